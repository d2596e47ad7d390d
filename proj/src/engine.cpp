#include "fgstdp/engine.hpp"

#include "fgstdp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace fgstdp {

void SpikeSchedule::validate() const {
    if (!(horizon >= 0) || !std::isfinite(horizon)) {
        throw ValidationError("schedule: horizon must be finite and >= 0");
    }
    auto check = [this](const std::vector<double>& times, const char* side) {
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double t = times[i];
            if (!std::isfinite(t) || t < 0 || t > horizon) {
                throw ValidationError(fmt::format("schedule: {} spike {} at {} outside [0, {}]",
                                                  side, i, t, horizon));
            }
            if (i > 0 && !(times[i - 1] < t)) {
                throw ValidationError(fmt::format(
                    "schedule: {} spikes must be strictly increasing (index {})", side, i));
            }
        }
    };
    check(pre, "pre");
    check(post, "post");
}

namespace {

struct Rates {
    double dv;
    double inj;
    double tun;
};

/// Which mechanisms are switched on in a segment, and the drain level there.
struct SegmentState {
    bool injection;
    bool tunneling;
    bool window;
    double v_d;
};

class Integrand {
public:
    Integrand(const ControlWaveforms& w, const WaveformConfig& cfg, const DeviceParams& p)
        : w_(w), cfg_(cfg), p_(p) {}

    Rates operator()(double t, double v_slow, const SegmentState& s) const {
        const TraceSample x = sample(t, v_slow, s);
        return {(x.i_tun - x.i_inj) / p_.C_T, -x.i_inj / p_.C_T, x.i_tun / p_.C_T};
    }

    TraceSample sample(double t, double v_slow, const SegmentState& s) const {
        TraceSample x{};
        x.t = t;
        x.v_g = w_.gate(t);
        x.v_tun_eff = s.window ? w_.tunnel.global(t) : cfg_.V_tun_init;
        x.v_d = s.v_d;
        x.v_fg = fg_voltage({v_slow, t}, x.v_g, x.v_tun_eff, cfg_, p_);
        x.i_d = drain_current(x.v_fg, p_);
        x.i_inj = s.injection
                      ? injection_current(x.i_d, drain_source_voltage(x.v_d, p_), p_)
                      : 0.0;
        x.i_tun = s.tunneling ? tunneling_current(x.v_tun_eff, x.v_fg, p_) : 0.0;
        return x;
    }

private:
    const ControlWaveforms& w_;
    const WaveformConfig& cfg_;
    const DeviceParams& p_;
};

} // namespace

constexpr double max_steps_per_segment = 1e8;

RunResult integrate(const SpikeSchedule& sched, const WaveformConfig& cfg,
                    const TripletAmplitudeParams& amp, const DeviceParams& p,
                    const EngineOptions& opts) {
    sched.validate();
    cfg.validate();
    amp.validate();
    p.validate();
    if (!(opts.dt_max > 0) || opts.pulse_subdivisions < 1) {
        throw ValidationError("engine: dt_max must be > 0 and pulse_subdivisions >= 1");
    }

    const ControlWaveforms waves(sched, cfg, amp);
    const Integrand rates(waves, cfg, p);

    std::vector<double> grid = waves.breakpoints();
    grid.push_back(0.0);
    grid.push_back(sched.horizon);
    std::erase_if(grid, [&](double t) { return t < 0.0 || t > sched.horizon; });
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    auto segment_state = [&](double t) {
        SegmentState s{};
        const bool pulse = waves.drain.pulled_low(t);
        s.window = waves.tunnel.in_window(t);
        s.injection = opts.rest_currents || pulse;
        s.tunneling = opts.rest_currents || s.window;
        s.v_d = waves.drain(t);
        return s;
    };

    RunResult result;
    double v = p.V_fg_rest;
    double inj = 0.0;
    double tun = 0.0;
    const bool tracing = opts.trace_period > 0;
    std::vector<std::pair<double, double>> history;
    if (tracing) history.emplace_back(0.0, v);

    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double a = grid[i];
        const double b = grid[i + 1];
        const SegmentState s = segment_state(0.5 * (a + b));
        if (!s.injection && !s.tunneling) continue;

        double h_cap = opts.dt_max;
        if (waves.drain.pulled_low(0.5 * (a + b))) h_cap = std::min(h_cap, cfg.T_d / opts.pulse_subdivisions);
        if (s.window) h_cap = std::min(h_cap, cfg.T_tun_pulse / opts.pulse_subdivisions);
        const double n_steps = std::ceil((b - a) / h_cap);
        if (!(n_steps <= max_steps_per_segment)) throw std::runtime_error("engine: step size underflow");
        const auto n = static_cast<std::size_t>(n_steps);
        const double h = (b - a) / n_steps;
        if (!(h > 0) || a + h == a) throw std::runtime_error("engine: step size underflow");
        if (tracing) history.emplace_back(a, v);

        for (std::size_t k = 0; k < n; ++k) {
            const double t = a + static_cast<double>(k) * h;
            const Rates k1 = rates(t, v, s);
            const Rates k2 = rates(t + 0.5 * h, v + 0.5 * h * k1.dv, s);
            const Rates k3 = rates(t + 0.5 * h, v + 0.5 * h * k2.dv, s);
            const Rates k4 = rates(t + h, v + h * k3.dv, s);
            v += h / 6.0 * (k1.dv + 2 * k2.dv + 2 * k3.dv + k4.dv);
            inj += h / 6.0 * (k1.inj + 2 * k2.inj + 2 * k3.inj + k4.inj);
            tun += h / 6.0 * (k1.tun + 2 * k2.tun + 2 * k3.tun + k4.tun);
            ++result.steps;
            if (tracing) history.emplace_back(t + h, v);
        }
    }

    result.dv_fg_slow = v - p.V_fg_rest;
    result.dv_injection = inj;
    result.dv_tunneling = tun;
    result.dw_percent = percent_weight_change(result.dv_fg_slow, p);

    if (tracing) {
        const auto n = static_cast<std::size_t>(std::floor(sched.horizon / opts.trace_period));
        result.traces.reserve(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            const double t = static_cast<double>(k) * opts.trace_period;
            auto it = std::upper_bound(history.begin(), history.end(), t,
                                       [](double x, const auto& e) { return x < e.first; });
            double v_slow = std::prev(it)->second;
            if (it != history.end()) {
                const auto& [t0, v0] = *std::prev(it);
                const auto& [t1, v1] = *it;
                v_slow = v0 + (v1 - v0) * (t - t0) / (t1 - t0);
            }
            result.traces.push_back(rates.sample(t, v_slow, segment_state(t)));
        }
    }
    return result;
}

double weight_change_percent(const RunResult& result, const DeviceParams& p) {
    return percent_weight_change(result.dv_fg_slow, p);
}

} // namespace fgstdp
