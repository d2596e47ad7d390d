#include "fgstdp/theory.hpp"

#include "fgstdp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <vector>

namespace fgstdp {

std::string_view to_string(MinimalModel m) {
    switch (m) {
    case MinimalModel::full: return "full";
    case MinimalModel::visual_cortex: return "visual-cortex";
    case MinimalModel::hippocampal: return "hippocampal";
    }
    return "?";
}

void DstdpParams::validate() const {
    if (!(A_plus > 0 && A_minus > 0 && tau_plus > 0 && tau_minus > 0)) {
        throw ValidationError("dstdp: all parameters must be positive");
    }
}

TstdpParams TstdpParams::effective() const {
    TstdpParams out = *this;
    switch (minimal_model) {
    case MinimalModel::full: break;
    case MinimalModel::visual_cortex:
        out.A2_plus = 0.0;
        out.A3_minus = 0.0;
        break;
    case MinimalModel::hippocampal: out.A3_minus = 0.0; break;
    }
    return out;
}

void TstdpParams::validate() const {
    if (!(A2_plus >= 0 && A2_minus >= 0 && A3_plus >= 0 && A3_minus >= 0)) {
        throw ValidationError("tstdp: amplitudes must be non-negative");
    }
    if (!(tau_plus > 0 && tau_minus > 0 && tau_x > 0 && tau_y > 0)) {
        throw ValidationError("tstdp: time constants must be positive");
    }
}

double dstdp_dw(double dt, const DstdpParams& p) {
    if (dt >= 0) return p.A_plus * std::exp(-dt / p.tau_plus);
    return -p.A_minus * std::exp(dt / p.tau_minus);
}

double tstdp_dw(double dt1, double dt2, double dt3, SpikeSide event, const TstdpParams& p) {
    const TstdpParams e = p.effective();
    if (event == SpikeSide::post) {
        return std::exp(-dt1 / e.tau_plus) * (e.A2_plus + e.A3_plus * std::exp(-dt2 / e.tau_y));
    }
    return -std::exp(dt1 / e.tau_minus) * (e.A2_minus + e.A3_minus * std::exp(-dt3 / e.tau_x));
}

ClosedFormConstants closed_form_constants(const DeviceParams& p, const WaveformConfig& cfg) {
    ClosedFormConstants cf;
    const double S2 = cfg.S2();
    const double S3 = cfg.S3();
    const double gate_ratio = p.C_g / p.C_T;
    cf.V_fg_min = p.V_fg_rest + gate_ratio * (cfg.V_g_min - cfg.V_g_init);
    cf.X = p.alpha * p.kappa * gate_ratio * S2 / p.U_T;
    cf.A = p.I_inj0 * std::exp(p.alpha * p.kappa * (p.V_dd - cf.V_fg_min) / p.U_T) *
           std::expm1(-cf.X * cfg.T_d) / (p.C_T * cf.X);
    cf.Y = (S3 - gate_ratio * S2) / p.V_ox;
    cf.B = p.I_tun0 * std::exp((cfg.V_tun_max - S3 * cfg.T_tun_delay - cf.V_fg_min) / p.V_ox);
    cf.B_prime = cf.B / cf.Y;
    return cf;
}

double fg_doublet_injection(double dt, const ClosedFormConstants& cf, double v_d_min,
                            const DeviceParams& p) {
    return std::abs(cf.A) * std::exp(-cf.X * dt) * std::exp((p.V_dd - v_d_min) / p.V_inj);
}

double fg_doublet_tunneling(double dt, const ClosedFormConstants& cf, const WaveformConfig& cfg,
                            const DeviceParams& p) {
    const double coupling = std::exp(-p.C_g * cfg.S2() * dt / (p.C_T * p.V_ox));
    const double window =
        std::exp(cf.Y * (cfg.T_tun_pulse - dt)) - std::exp(-cf.Y * dt);
    return cf.B_prime * window * coupling / p.C_T;
}

double ratio_yfg(DrainMode mode, double delta_vd, const DeviceParams& p) {
    switch (mode) {
    case DrainMode::single_pulsed: return std::exp(delta_vd / p.V_inj);
    case DrainMode::double_pulsed: return 1.0 + std::exp(delta_vd / p.V_inj);
    case DrainMode::doublet_flat: break;
    }
    throw ValidationError("ratio_yfg: drain mode must be single or double pulsed");
}

double ratio_ytheory(double dt2, const TstdpParams& p) {
    const TstdpParams e = p.effective();
    if (!(e.A2_plus > 0)) throw ValidationError("ratio_ytheory: needs A2+ > 0");
    if (!(dt2 >= 0)) throw ValidationError("ratio_ytheory: needs dt2 >= 0");
    return 1.0 + (e.A3_plus / e.A2_plus) * std::exp(-dt2 / e.tau_y);
}

double compression_factor(double tau_plus_theory, double tau_plus_fg) {
    if (!(tau_plus_theory > 0 && tau_plus_fg > 0)) {
        throw ValidationError("compression_factor: time constants must be positive");
    }
    return tau_plus_theory / tau_plus_fg;
}

namespace {

struct Event {
    double t;
    SpikeSide side;
};

std::vector<Event> merged_events(const SpikeSchedule& sched, double scale) {
    std::vector<Event> events;
    events.reserve(sched.pre.size() + sched.post.size());
    for (double t : sched.pre) events.push_back({t * scale, SpikeSide::pre});
    for (double t : sched.post) events.push_back({t * scale, SpikeSide::post});
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.side == SpikeSide::pre && b.side == SpikeSide::post;
    });
    return events;
}

template <typename PostRule, typename PreRule>
double nearest_spike_sum(const SpikeSchedule& sched, double scale, PostRule on_post,
                         PreRule on_pre) {
    double total = 0.0;
    double last_pre = -no_previous_spike;
    double last_post = -no_previous_spike;
    for (const Event& e : merged_events(sched, scale)) {
        if (e.side == SpikeSide::pre) {
            if (std::isfinite(last_post)) total += on_pre(last_post - e.t, e.t - last_pre);
            last_pre = e.t;
        } else {
            if (std::isfinite(last_pre)) total += on_post(e.t - last_pre, e.t - last_post);
            last_post = e.t;
        }
    }
    return total;
}

} // namespace

double tstdp_weight_change(const SpikeSchedule& sched, const TstdpParams& p, double time_scale) {
    const TstdpParams e = p.effective();
    return nearest_spike_sum(
        sched, time_scale,
        [&](double dt1, double dt2) { return tstdp_dw(dt1, dt2, no_previous_spike, SpikeSide::post, e); },
        [&](double dt1, double dt3) { return tstdp_dw(dt1, no_previous_spike, dt3, SpikeSide::pre, e); });
}

double dstdp_weight_change(const SpikeSchedule& sched, const DstdpParams& p, double time_scale) {
    return nearest_spike_sum(
        sched, time_scale, [&](double dt1, double) { return dstdp_dw(dt1, p); },
        [&](double dt1, double) { return -p.A_minus * std::exp(dt1 / p.tau_minus); });
}

} // namespace fgstdp
