#include "fgstdp/circuit.hpp"

#include "fgstdp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fgstdp {

namespace {

void check_common(double C, double V_d_min, double delta_vd_max, double V_d_init,
                  const char* who) {
    auto fail = [who](const char* why) { throw ValidationError(std::string(who) + ": " + why); };
    if (!(C > 0) || !std::isfinite(C)) fail("C must be > 0");
    if (!(delta_vd_max > 0) || !std::isfinite(delta_vd_max)) fail("delta_vd_max must be > 0");
    if (!std::isfinite(V_d_min) || !(V_d_init > V_d_min)) fail("need V_d_init > V_d_min");
}

/// Charge-sharing steps taken strictly between a reset at t_reset and t.
long sc_steps(double t_reset, double t, double T_sc) {
    if (t <= t_reset) return 0;
    // Clock edges sit on multiples of T_sc.
    const long first = static_cast<long>(std::floor(t_reset / T_sc)) + 1;
    const long last = static_cast<long>(std::ceil(t / T_sc)) - 1;
    return std::max(0L, last - first + 1);
}

double sc_retained(const ScGeneratorParams& g) { return g.C / (g.C + g.C_sc); }

} // namespace

ScGeneratorParams ScGeneratorParams::from_targets(const TripletAmplitudeParams& amp, double C,
                                                  double T_sc, double V_d_min, double V_d_init) {
    amp.validate();
    ScGeneratorParams g;
    g.C = C;
    g.T_sc = T_sc;
    g.C_sc = C * T_sc / (amp.tau_y / amp.r);
    g.V_d_min = V_d_min;
    g.V_d_init = V_d_init;
    TripletAmplitudeParams unclamped = amp;
    unclamped.delta_vd_max = std::numeric_limits<double>::infinity();
    g.delta_vd_max = unclamped.V_inj * std::log1p(unclamped.A3_plus / unclamped.A2_plus);
    g.validate();
    return g;
}

void ScGeneratorParams::validate() const {
    check_common(C, V_d_min, delta_vd_max, V_d_init, "switched-cap generator");
    if (!(C_sc > 0) || !std::isfinite(C_sc)) throw ValidationError("switched-cap generator: C_sc must be > 0");
    if (!(T_sc > clock_nonoverlap_delay)) {
        throw ValidationError("switched-cap generator: T_sc must exceed the non-overlap delay");
    }
}

RampGeneratorParams RampGeneratorParams::from_targets(const TripletAmplitudeParams& amp, double C,
                                                      double V_d_min, double V_d_init) {
    amp.validate();
    RampGeneratorParams g;
    g.C = C;
    g.I_p = -C * amp.V_inj * amp.r / amp.tau_y;
    g.V_d_min = V_d_min;
    g.V_d_init = V_d_init;
    g.delta_vd_max = amp.V_inj * std::log(amp.A3_plus / amp.A2_plus);
    g.validate();
    return g;
}

void RampGeneratorParams::validate() const {
    check_common(C, V_d_min, delta_vd_max, V_d_init, "ramp generator");
    if (!(I_p < 0) || !std::isfinite(I_p)) throw ValidationError("ramp generator: I_p must be < 0");
}

double sc_capacitor_trace(std::span<const double> post, const ScGeneratorParams& g, double t) {
    g.validate();
    if (!std::is_sorted(post.begin(), post.end())) {
        throw ValidationError("sc_capacitor_trace: post times must be sorted");
    }
    // Latest reset at or before t.
    double reset = -std::numeric_limits<double>::infinity();
    for (double tp : post) {
        if (tp + clock_nonoverlap_delay <= t) reset = tp + clock_nonoverlap_delay;
    }
    if (!std::isfinite(reset)) return g.V_d_min;
    const long n = sc_steps(reset, t + g.T_sc * 1e-12, g.T_sc);
    return g.V_d_min - g.delta_vd_max * std::pow(sc_retained(g), static_cast<double>(n));
}

double emulated_delta_vd_single(double dt2, const ScGeneratorParams& g) {
    g.validate();
    if (!(dt2 > 0)) throw ValidationError("emulated_delta_vd_single: dt2 must be > 0");
    if (std::isinf(dt2)) return 0.0;
    // Previous post at t = 0; the new post samples the node just before any
    // clock edge coinciding with it.
    const long n = sc_steps(clock_nonoverlap_delay, dt2, g.T_sc);
    return g.delta_vd_max * std::pow(sc_retained(g), static_cast<double>(n));
}

std::optional<double> emulated_delta_vd_double(double dt2, const RampGeneratorParams& g) {
    g.validate();
    if (!(dt2 > 0)) throw ValidationError("emulated_delta_vd_double: dt2 must be > 0");
    const double since = std::max(0.0, dt2 - clock_nonoverlap_delay);
    const double d = g.delta_vd_max + g.slope() * since;
    if (!(d > 0)) return std::nullopt;
    return d;
}

double rc_reference_trace(double since_reset, const ScGeneratorParams& g) {
    g.validate();
    if (!(since_reset >= 0)) throw ValidationError("rc_reference_trace: time since reset must be >= 0");
    return g.V_d_min - g.delta_vd_max * std::exp(-since_reset / g.tau());
}

std::vector<GeneratorComparison> compare_single(std::span<const double> dt2s,
                                                const ScGeneratorParams& g,
                                                const TripletAmplitudeParams& amp) {
    std::vector<GeneratorComparison> rows;
    rows.reserve(dt2s.size());
    for (double dt2 : dt2s) {
        const double ideal = delta_vd_single(dt2, amp);
        const double emulated = emulated_delta_vd_single(dt2, g);
        rows.push_back({dt2, ideal, emulated, emulated - ideal});
    }
    return rows;
}

std::vector<GeneratorComparison> compare_double(std::span<const double> dt2s,
                                                const RampGeneratorParams& g,
                                                const TripletAmplitudeParams& amp) {
    std::vector<GeneratorComparison> rows;
    for (double dt2 : dt2s) {
        const auto ideal = delta_vd_double(dt2, amp);
        const auto emulated = emulated_delta_vd_double(dt2, g);
        if (ideal && emulated) rows.push_back({dt2, *ideal, *emulated, *emulated - *ideal});
    }
    return rows;
}

double sup_norm_error(std::span<const GeneratorComparison> rows) {
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, std::abs(r.error));
    return worst;
}

} // namespace fgstdp
