#include "fgstdp/waveforms.hpp"

#include "fgstdp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace fgstdp {

std::string_view to_string(DrainMode mode) {
    switch (mode) {
    case DrainMode::doublet_flat: return "flat";
    case DrainMode::single_pulsed: return "single";
    case DrainMode::double_pulsed: return "double";
    }
    return "?";
}

DrainMode drain_mode_from_string(std::string_view name) {
    if (name == "flat" || name == "doublet-flat") return DrainMode::doublet_flat;
    if (name == "single" || name == "single-pulsed") return DrainMode::single_pulsed;
    if (name == "double" || name == "double-pulsed") return DrainMode::double_pulsed;
    throw ValidationError(fmt::format("unknown drain mode '{}'", name));
}

void WaveformConfig::validate() const {
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw ValidationError(msg);
    };
    require(V_g_min < V_g_init, "waveform: V_g_min must be below V_g_init");
    require(V_d_min < V_d_init, "waveform: V_d_min must be below V_d_init");
    require(V_tun_init < V_tun_max, "waveform: V_tun_init must be below V_tun_max");
    require(T_g > 0 && T_d > 0 && T_tun > 0 && T_tun_pulse > 0 && T_tun_delay >= 0,
            "waveform: durations must be positive");
    require(t_fall_gate > 0 && t_fall_gate < T_g, "waveform: t_fall_gate must lie in (0, T_g)");
    require(T_d <= T_g / 10, "waveform: T_d must be at most T_g / 10");
    require(T_tun > T_tun_delay, "waveform: T_tun must exceed T_tun_delay");
    require(S2() > 0 && S3() < 0, "waveform: slope signs violated");
}

void TripletAmplitudeParams::validate() const {
    if (!(A2_plus > 0) || !(A3_plus >= 0) || !(tau_y > 0) || !(V_inj > 0) || !(r >= 1) ||
        !(delta_vd_max > 0)) {
        throw ValidationError("amplitudes: need A2+ > 0, A3+ >= 0, tau_y > 0, V_inj > 0, r >= 1, "
                              "delta_vd_max > 0");
    }
}

namespace {

double triplet_ratio_term(double dt2, const TripletAmplitudeParams& p) {
    if (!(dt2 > 0)) {
        throw ValidationError(fmt::format("drain law needs dt2 > 0, got {}", dt2));
    }
    return (p.A3_plus / p.A2_plus) * std::exp(-p.r * dt2 / p.tau_y);
}

} // namespace

double delta_vd_single(double dt2, const TripletAmplitudeParams& p) {
    const double x = triplet_ratio_term(dt2, p);
    return std::min(p.V_inj * std::log1p(x), p.delta_vd_max);
}

std::optional<double> delta_vd_double(double dt2, const TripletAmplitudeParams& p) {
    const double x = triplet_ratio_term(dt2, p);
    if (!(x > 1.0)) return std::nullopt;
    return std::min(p.V_inj * std::log(x), p.delta_vd_max);
}

// ---------------------------------------------------------------------------
// Gate

GateWaveform::GateWaveform(std::span<const double> pre, const WaveformConfig& cfg)
    : cfg_(cfg), spikes_(pre.begin(), pre.end()) {
    start_values_.reserve(spikes_.size());
    for (std::size_t k = 0; k < spikes_.size(); ++k) {
        if (k == 0) {
            start_values_.push_back(cfg_.V_g_init);
        } else {
            start_values_.push_back(after_spike(start_values_[k - 1], spikes_[k] - spikes_[k - 1]));
        }
    }
}

double GateWaveform::after_spike(double v_start, double tau) const {
    if (tau < cfg_.t_fall_gate) {
        return v_start + (cfg_.V_g_min - v_start) * (tau / cfg_.t_fall_gate);
    }
    const double ramp = tau - cfg_.t_fall_gate;
    if (ramp < cfg_.T_g) return cfg_.V_g_min + cfg_.S2() * ramp;
    return cfg_.V_g_init;
}

double GateWaveform::operator()(double t) const {
    auto it = std::upper_bound(spikes_.begin(), spikes_.end(), t);
    if (it == spikes_.begin()) return cfg_.V_g_init;
    const auto k = static_cast<std::size_t>(std::distance(spikes_.begin(), it) - 1);
    return after_spike(start_values_[k], t - spikes_[k]);
}

std::vector<double> GateWaveform::breakpoints() const {
    std::vector<double> out;
    out.reserve(3 * spikes_.size());
    for (double s : spikes_) {
        out.push_back(s);
        out.push_back(s + cfg_.t_fall_gate);
        out.push_back(s + cfg_.t_fall_gate + cfg_.T_g);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tunnel

TunnelWaveform::TunnelWaveform(std::span<const double> pre, std::span<const double> post,
                               const WaveformConfig& cfg)
    : cfg_(cfg), post_(post.begin(), post.end()), window_start_(pre.begin(), pre.end()) {
    start_values_.reserve(post_.size());
    for (std::size_t k = 0; k < post_.size(); ++k) {
        if (k == 0) {
            start_values_.push_back(cfg_.V_tun_init);
        } else {
            start_values_.push_back(after_spike(start_values_[k - 1], post_[k] - post_[k - 1]));
        }
    }
}

double TunnelWaveform::after_spike(double v_start, double tau) const {
    if (tau < cfg_.T_tun_delay) {
        return v_start + (cfg_.V_tun_max - v_start) * (tau / cfg_.T_tun_delay);
    }
    if (tau < cfg_.T_tun) return cfg_.V_tun_max + cfg_.S3() * (tau - cfg_.T_tun_delay);
    return cfg_.V_tun_init;
}

double TunnelWaveform::global(double t) const {
    auto it = std::upper_bound(post_.begin(), post_.end(), t);
    if (it == post_.begin()) return cfg_.V_tun_init;
    const auto k = static_cast<std::size_t>(std::distance(post_.begin(), it) - 1);
    return after_spike(start_values_[k], t - post_[k]);
}

bool TunnelWaveform::in_window(double t) const {
    auto it = std::upper_bound(window_start_.begin(), window_start_.end(), t);
    if (it == window_start_.begin()) return false;
    return t < *std::prev(it) + cfg_.T_tun_pulse;
}

double TunnelWaveform::operator()(double t) const {
    return in_window(t) ? global(t) : cfg_.V_tun_init;
}

std::vector<double> TunnelWaveform::breakpoints() const {
    std::vector<double> out;
    out.reserve(3 * post_.size() + 2 * window_start_.size());
    for (double s : post_) {
        out.push_back(s);
        out.push_back(s + cfg_.T_tun_delay);
        out.push_back(s + cfg_.T_tun);
    }
    for (double s : window_start_) {
        out.push_back(s);
        out.push_back(s + cfg_.T_tun_pulse);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Drain

DrainWaveform::DrainWaveform(std::span<const double> post, const WaveformConfig& cfg,
                             const TripletAmplitudeParams& amp)
    : cfg_(cfg) {
    double previous = -std::numeric_limits<double>::infinity();
    for (double t : post) {
        const double gap = t - previous;
        if (gap < 2 * cfg_.T_d) {
            throw ValidationError(fmt::format(
                "drain: post-spikes {:.6g} s apart overlap their pulses (need >= 2 T_d)", gap));
        }
        switch (cfg_.drain_mode) {
        case DrainMode::doublet_flat:
            pulses_.push_back({t, t + cfg_.T_d, cfg_.V_d_min});
            break;
        case DrainMode::single_pulsed:
            pulses_.push_back({t, t + cfg_.T_d, cfg_.V_d_min - delta_vd_single(gap, amp)});
            break;
        case DrainMode::double_pulsed:
            pulses_.push_back({t, t + cfg_.T_d, cfg_.V_d_min});
            if (auto extra = delta_vd_double(gap, amp)) {
                pulses_.push_back({t + cfg_.T_d, t + 2 * cfg_.T_d, cfg_.V_d_min - *extra});
            }
            break;
        }
        previous = t;
    }
}

const DrainPulse* DrainWaveform::find(double t) const {
    auto it = std::upper_bound(pulses_.begin(), pulses_.end(), t,
                               [](double v, const DrainPulse& p) { return v < p.begin; });
    if (it == pulses_.begin()) return nullptr;
    const DrainPulse& p = *std::prev(it);
    return t < p.end ? &p : nullptr;
}

double DrainWaveform::operator()(double t) const {
    const DrainPulse* p = find(t);
    return p ? p->voltage : cfg_.V_d_init;
}

bool DrainWaveform::pulled_low(double t) const { return find(t) != nullptr; }

std::vector<double> DrainWaveform::breakpoints() const {
    std::vector<double> out;
    out.reserve(2 * pulses_.size());
    for (const auto& p : pulses_) {
        out.push_back(p.begin);
        out.push_back(p.end);
    }
    return out;
}

// ---------------------------------------------------------------------------

double gate_trace(double t, const SpikeSchedule& sched, const WaveformConfig& cfg) {
    return GateWaveform(sched.pre, cfg)(t);
}

double tunnel_eff_trace(double t, const SpikeSchedule& sched, const WaveformConfig& cfg) {
    return TunnelWaveform(sched.pre, sched.post, cfg)(t);
}

double drain_trace(double t, const SpikeSchedule& sched, const WaveformConfig& cfg,
                   const TripletAmplitudeParams& amp) {
    return DrainWaveform(sched.post, cfg, amp)(t);
}

ControlWaveforms::ControlWaveforms(const SpikeSchedule& sched, const WaveformConfig& cfg,
                                   const TripletAmplitudeParams& amp)
    : gate(sched.pre, cfg), tunnel(sched.pre, sched.post, cfg), drain(sched.post, cfg, amp) {}

std::vector<double> ControlWaveforms::breakpoints() const {
    std::vector<double> out = gate.breakpoints();
    auto append = [&out](std::vector<double> more) {
        out.insert(out.end(), more.begin(), more.end());
    };
    append(tunnel.breakpoints());
    append(drain.breakpoints());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace fgstdp
