#include "fgstdp/calibration.hpp"

#include "fgstdp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace fgstdp {

std::vector<double> default_window_grid() {
    std::vector<double> dts;
    for (const auto& pt : ProtocolSpec::default_window().points) dts.push_back(pt.dt1);
    return dts;
}

namespace {

int sign_of(double x) { return (x > 0) - (x < 0); }

std::vector<WindowPoint> sample_window(const std::vector<double>& dts, const WaveformConfig& cfg,
                                       const DeviceParams& p, const EngineOptions& opts) {
    const ProtocolSpec spec = ProtocolSpec::window(dts);
    RunOptions run;
    run.engine = opts;
    const auto rows = run_protocol(spec, cfg, TripletAmplitudeParams{}, p, {}, run);
    std::vector<WindowPoint> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back({row.point.dt1, row.dw_fg_pct});
    return out;
}

/// Points of one branch whose sign agrees with it; the rest are counted.
std::vector<WindowPoint> branch(const std::vector<WindowPoint>& pts, bool positive_dt,
                                std::size_t& excluded) {
    std::vector<WindowPoint> keep;
    for (const auto& pt : pts) {
        if ((pt.dt > 0) != positive_dt) continue;
        if (sign_of(pt.dw) == (positive_dt ? 1 : -1)) {
            keep.push_back(pt);
        } else {
            ++excluded;
        }
    }
    return keep;
}

ExponentialFit fit_branch(const std::vector<WindowPoint>& pts, bool positive_dt) {
    std::size_t ignored = 0;
    const auto keep = branch(pts, positive_dt, ignored);
    return fit_exponential_window(keep, FitWeighting::magnitude);
}

bool within(double value, double target, double tol) {
    return std::abs(value / target - 1.0) <= tol;
}

} // namespace

WindowReport summarize_window(std::vector<WindowPoint> points) {
    WindowReport report;
    report.points = std::move(points);
    std::sort(report.points.begin(), report.points.end(),
              [](const WindowPoint& a, const WindowPoint& b) { return a.dt < b.dt; });
    const auto pos = branch(report.points, true, report.excluded);
    const auto neg = branch(report.points, false, report.excluded);
    report.potentiation = fit_exponential_window(pos, FitWeighting::magnitude);
    report.depression = fit_exponential_window(neg, FitWeighting::magnitude);
    int last = 0;
    for (const auto& pt : report.points) {
        const int s = sign_of(pt.dw);
        if (s == 0) continue;
        if (last != 0 && s != last) ++report.sign_changes;
        last = s;
    }
    return report;
}

WindowReport measure_window(const std::vector<double>& dts, const WaveformConfig& cfg,
                            const DeviceParams& p, const EngineOptions& opts) {
    return summarize_window(sample_window(dts, cfg, p, opts));
}

double total_capacitance_for_tau_plus(double tau_plus, const WaveformConfig& cfg,
                                      const DeviceParams& p) {
    if (!(tau_plus > 0)) throw ValidationError("tau_plus must be > 0");
    return tau_plus * p.alpha * p.kappa * p.C_g * cfg.S2() / p.U_T;
}

CalibrationResult calibrate_window(const WindowTargets& target, const WaveformConfig& cfg,
                                   const DeviceParams& start, double tolerance) {
    if (!(tolerance > 0)) throw ValidationError("calibration tolerance must be > 0");
    if (!(target.A_plus > 0 && target.A_minus < 0 && target.tau_plus > 0 && target.tau_minus > 0)) {
        throw ValidationError("calibration targets: need A+ > 0, A- < 0, tau > 0");
    }
    cfg.validate();
    start.validate();

    CalibrationResult res;
    res.params = start;
    DeviceParams& p = res.params;
    const double aim = tolerance / 5.0;

    std::vector<double> pos_dts, neg_dts;
    for (double dt : default_window_grid()) (dt > 0 ? pos_dts : neg_dts).push_back(dt);

    auto fit_side = [&](bool positive) {
        ++res.evaluations;
        return fit_branch(sample_window(positive ? pos_dts : neg_dts, cfg, p, {}), positive);
    };

    // The fitted amplitudes scale almost linearly with I_inj0 and I_tun0, so
    // each is solved by rescaling in proportion to the miss.
    auto solve_amplitude = [&](double& current, bool positive, double want) {
        for (int it = 0; it < 60; ++it) {
            ExponentialFit f;
            try {
                f = fit_side(positive);
            } catch (const FitError&) {
                // Too few points of the branch sign: the mechanism is far too weak.
                current *= 10.0;
                continue;
            }
            if (within(f.amplitude, want, aim)) return f;
            if (!(f.amplitude / want > 0)) {
                throw CalibrationError("calibration: fitted amplitude has the wrong sign");
            }
            current *= want / f.amplitude;
        }
        throw CalibrationError(fmt::format("calibration: amplitude {} not reached", want));
    };

    const ExponentialFit plus = solve_amplitude(p.I_inj0, true, target.A_plus);
    res.log.push_back(fmt::format("I_inj0 = {:.6e} A: A+ = {:.5f} %, tau+ = {:.3f} ms",
                                  p.I_inj0, plus.amplitude, plus.tau * 1e3));
    if (!within(plus.tau, target.tau_plus, tolerance)) {
        throw CalibrationError(fmt::format("calibration: tau+ = {:.3f} ms outside tolerance; "
                                           "adjust C_T", plus.tau * 1e3));
    }

    // Keeps the peak tunneling current roughly fixed when V_ox moves, so the
    // amplitude solve starts close.
    const double barrier = cfg.V_tun_max - p.V_fg_rest;
    auto tau_minus_at = [&](double v_ox) {
        p.I_tun0 *= std::exp(barrier / p.V_ox - barrier / v_ox);
        p.V_ox = v_ox;
        const ExponentialFit f = solve_amplitude(p.I_tun0, false, target.A_minus);
        res.log.push_back(fmt::format("V_ox = {:.6f} V, I_tun0 = {:.6e} A: A- = {:.5f} %, "
                                      "tau- = {:.3f} ms",
                                      p.V_ox, p.I_tun0, f.amplitude, f.tau * 1e3));
        return f.tau;
    };

    double lo = start.V_ox, hi = start.V_ox;
    double t_lo = tau_minus_at(lo), t_hi = t_lo;
    for (int k = 0; k < 20 && t_lo > target.tau_minus; ++k) {
        hi = lo;
        t_hi = t_lo;
        lo *= 0.8;
        t_lo = tau_minus_at(lo);
    }
    for (int k = 0; k < 20 && t_hi < target.tau_minus; ++k) {
        lo = hi;
        t_lo = t_hi;
        hi *= 1.25;
        t_hi = tau_minus_at(hi);
    }
    if (!(t_lo <= target.tau_minus && target.tau_minus <= t_hi)) {
        throw CalibrationError("calibration: could not bracket tau-");
    }
    double best = within(t_lo, target.tau_minus, aim) ? lo : hi;
    for (int it = 0; it < 60; ++it) {
        if (within(t_lo, target.tau_minus, aim)) {
            best = lo;
            break;
        }
        if (within(t_hi, target.tau_minus, aim)) {
            best = hi;
            break;
        }
        const double mid = 0.5 * (lo + hi);
        const double t_mid = tau_minus_at(mid);
        if (t_mid < target.tau_minus) {
            lo = mid;
            t_lo = t_mid;
        } else {
            hi = mid;
            t_hi = t_mid;
        }
        best = mid;
    }
    tau_minus_at(best);

    res.report = measure_window(default_window_grid(), cfg, p);
    ++res.evaluations;
    return res;
}

} // namespace fgstdp
