#include "fgstdp/protocols.hpp"

#include "fgstdp/errors.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fmt/format.h>
#include <thread>

namespace fgstdp {

namespace {

constexpr double lead_time = 5e-3;
constexpr double tail_time = 0.4;

bool is_set(double v) { return !std::isnan(v); }

double ms(double s) { return s * 1e3; }

} // namespace

std::string_view to_string(ProtocolKind kind) {
    switch (kind) {
    case ProtocolKind::window: return "window";
    case ProtocolKind::triplet1: return "triplet1";
    case ProtocolKind::triplet2: return "triplet2";
    case ProtocolKind::quadruplet: return "quadruplet";
    case ProtocolKind::frequency: return "frequency";
    }
    return "?";
}

ProtocolKind protocol_kind_from_string(std::string_view name) {
    for (auto k : {ProtocolKind::window, ProtocolKind::triplet1, ProtocolKind::triplet2,
                   ProtocolKind::quadruplet, ProtocolKind::frequency}) {
        if (to_string(k) == name) return k;
    }
    throw ValidationError(fmt::format("unknown protocol kind '{}'", name));
}

std::string ProtocolPoint::label(ProtocolKind kind) const {
    switch (kind) {
    case ProtocolKind::window: return fmt::format("dt={:g}ms", ms(dt1));
    case ProtocolKind::triplet1: return fmt::format("({:g},{:g})", ms(dt1), ms(dt3));
    case ProtocolKind::triplet2: return fmt::format("({:g},{:g})", ms(dt1), ms(dt2));
    case ProtocolKind::quadruplet: return fmt::format("T={:g}ms", ms(T));
    case ProtocolKind::frequency: return fmt::format("dt={:g}ms,rho={:g}Hz", ms(dt1), rho);
    }
    return {};
}

namespace {

/// Duration of one repetition of the point's pattern, compressed.
double pattern_span(ProtocolKind kind, const ProtocolPoint& pt, double r) {
    switch (kind) {
    case ProtocolKind::window: return std::abs(pt.dt1) / r;
    case ProtocolKind::triplet1: return (pt.dt1 + pt.dt3) / r;
    case ProtocolKind::triplet2: return (std::abs(pt.dt1) + pt.dt2) / r;
    case ProtocolKind::quadruplet: return (std::abs(pt.T) + pt.dt1) / r;
    case ProtocolKind::frequency: return std::abs(pt.dt1) / r;
    }
    return 0.0;
}

void validate_point(ProtocolKind kind, const ProtocolPoint& pt, std::size_t i) {
    auto fail = [&](const char* why) {
        throw ValidationError(fmt::format("{} point {}: {}", to_string(kind), i, why));
    };
    switch (kind) {
    case ProtocolKind::window:
        if (!is_set(pt.dt1)) fail("needs dt1");
        break;
    case ProtocolKind::triplet1:
        if (!(pt.dt1 > 0 && pt.dt3 > 0)) fail("needs dt1 > 0 and dt3 > 0");
        break;
    case ProtocolKind::triplet2:
        if (!(pt.dt1 < 0 && pt.dt2 > 0)) fail("needs dt1 < 0 and dt2 > 0");
        break;
    case ProtocolKind::quadruplet:
        if (!(pt.dt1 > 0 && is_set(pt.T))) fail("needs dt1 > 0 and T");
        if (!(std::abs(pt.T) > pt.dt1)) fail("|T| must exceed the intra-pair gap");
        break;
    case ProtocolKind::frequency:
        if (!(is_set(pt.dt1) && pt.rho > 0)) fail("needs dt1 and rho > 0");
        if (!(1.0 / pt.rho >= std::abs(pt.dt1))) fail("pairing period shorter than the pair");
        break;
    }
}

} // namespace

void ProtocolSpec::validate() const {
    if (points.empty()) throw ValidationError(fmt::format("{}: no points", to_string(kind)));
    if (reps < 1) throw ValidationError("protocol: reps must be >= 1");
    if (!(compression_r > 0)) throw ValidationError("protocol: compression_r must be > 0");
    for (std::size_t i = 0; i < points.size(); ++i) {
        validate_point(kind, points[i], i);
        if (kind != ProtocolKind::frequency && reps > 1 &&
            !(rep_interval > pattern_span(kind, points[i], compression_r))) {
            throw ValidationError(fmt::format(
                "{} point {}: rep_interval must exceed the pattern span", to_string(kind), i));
        }
    }
}

ProtocolSpec ProtocolSpec::window(std::vector<double> dts, double r, int reps) {
    ProtocolSpec spec;
    spec.kind = ProtocolKind::window;
    spec.compression_r = r;
    spec.reps = reps;
    for (double dt : dts) spec.points.push_back({.dt1 = dt});
    return spec;
}

ProtocolSpec ProtocolSpec::default_window() {
    std::vector<double> dts;
    for (int i = 24; i >= 0; --i) dts.push_back(-(2e-3 + i * (98e-3 / 24)));
    for (int i = 0; i <= 24; ++i) dts.push_back(2e-3 + i * (98e-3 / 24));
    return window(std::move(dts));
}

ProtocolSpec ProtocolSpec::default_triplet1() {
    ProtocolSpec spec;
    spec.kind = ProtocolKind::triplet1;
    for (auto [a, b] : {std::pair{5, 5}, {10, 10}, {15, 5}, {5, 15}}) {
        spec.points.push_back({.dt1 = a * 1e-3, .dt3 = b * 1e-3});
    }
    return spec;
}

ProtocolSpec ProtocolSpec::default_triplet2() {
    ProtocolSpec spec;
    spec.kind = ProtocolKind::triplet2;
    for (auto [a, b] : {std::pair{-5, 5}, {-10, 10}, {-5, 15}, {-15, 5}}) {
        spec.points.push_back({.dt1 = a * 1e-3, .dt2 = b * 1e-3});
    }
    return spec;
}

ProtocolSpec ProtocolSpec::default_quadruplet() {
    ProtocolSpec spec;
    spec.kind = ProtocolKind::quadruplet;
    for (int T : {-160, -140, -120, -100, -80, -60, -40, -20, 20, 40, 60, 80, 100, 120, 140, 160}) {
        spec.points.push_back({.dt1 = 5e-3, .T = T * 1e-3});
    }
    return spec;
}

ProtocolSpec ProtocolSpec::default_frequency(double dt) {
    ProtocolSpec spec;
    spec.kind = ProtocolKind::frequency;
    for (double rho : {0.1, 10.0, 20.0, 40.0, 50.0}) {
        spec.points.push_back({.dt1 = dt, .rho = rho});
    }
    return spec;
}

SpikeSchedule build_schedule(const ProtocolSpec& spec, std::size_t point_index) {
    spec.validate();
    if (point_index >= spec.points.size()) {
        throw ValidationError(fmt::format("point index {} out of range", point_index));
    }
    const ProtocolPoint& pt = spec.points[point_index];
    const double r = spec.compression_r;
    SpikeSchedule s;

    auto pair = [&s](double base, double dt) {
        if (dt >= 0) {
            s.pre.push_back(base);
            s.post.push_back(base + dt);
        } else {
            s.post.push_back(base);
            s.pre.push_back(base - dt);
        }
    };

    for (int k = 0; k < spec.reps; ++k) {
        switch (spec.kind) {
        case ProtocolKind::window:
            pair(lead_time + k * spec.rep_interval, pt.dt1 / r);
            break;
        case ProtocolKind::triplet1: {
            const double base = lead_time + k * spec.rep_interval;
            s.pre.push_back(base);
            s.post.push_back(base + pt.dt1 / r);
            s.pre.push_back(base + (pt.dt1 + pt.dt3) / r);
            break;
        }
        case ProtocolKind::triplet2: {
            const double base = lead_time + k * spec.rep_interval;
            s.post.push_back(base);
            s.pre.push_back(base - pt.dt1 / r);
            s.post.push_back(base + (-pt.dt1 + pt.dt2) / r);
            break;
        }
        case ProtocolKind::quadruplet: {
            const double base = lead_time + k * spec.rep_interval;
            const double gap = pt.dt1 / r;
            const double span = std::abs(pt.T) / r;
            if (pt.T > 0) {
                pair(base, -gap);
                pair(base + span, gap);
            } else {
                pair(base, gap);
                pair(base + span, -gap);
            }
            break;
        }
        case ProtocolKind::frequency:
            pair(lead_time + k / (r * pt.rho), pt.dt1 / r);
            break;
        }
    }

    std::sort(s.pre.begin(), s.pre.end());
    std::sort(s.post.begin(), s.post.end());
    for (const auto* side : {&s.pre, &s.post}) {
        if (std::adjacent_find(side->begin(), side->end()) != side->end()) {
            throw ValidationError(fmt::format("{} {}: two spikes on one side at the same instant",
                                              to_string(spec.kind), pt.label(spec.kind)));
        }
    }
    double last = 0.0;
    if (!s.pre.empty()) last = std::max(last, s.pre.back());
    if (!s.post.empty()) last = std::max(last, s.post.back());
    s.horizon = last + tail_time;
    return s;
}

std::vector<ProtocolRow> run_protocol(const ProtocolSpec& spec, const WaveformConfig& cfg,
                                      const TripletAmplitudeParams& amp, const DeviceParams& p,
                                      const TheoryParams& theory, const RunOptions& opts) {
    spec.validate();
    cfg.validate();
    amp.validate();
    p.validate();
    theory.dstdp.validate();
    theory.tstdp.validate();
    TripletAmplitudeParams law = amp;
    law.r = spec.compression_r;

    const std::size_t n = spec.points.size();
    std::vector<ProtocolRow> rows(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                const SpikeSchedule sched = build_schedule(spec, i);
                ProtocolRow& row = rows[i];
                row.point = spec.points[i];
                row.dw_fg_pct = integrate(sched, cfg, law, p, opts.engine).dw_percent;
                row.dw_dstdp_pct = 100.0 * dstdp_weight_change(sched, theory.dstdp, spec.compression_r);
                row.dw_tstdp_pct = 100.0 * tstdp_weight_change(sched, theory.tstdp, spec.compression_r);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    unsigned workers = opts.workers ? opts.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

ProtocolSetup protocol_setup(ProtocolKind kind, DrainMode mode, const WaveformConfig& base,
                             const TripletAmplitudeParams& base_amp) {
    ProtocolSetup setup{base, base_amp, {}};
    setup.waveform.drain_mode = mode;
    if (kind == ProtocolKind::frequency) {
        setup.amplitudes.A3_plus = 28.7e-3;
        if (mode != DrainMode::doublet_flat) setup.waveform.V_d_min = 0.5;
    }
    setup.theory.tstdp.A2_plus = setup.amplitudes.A2_plus;
    setup.theory.tstdp.A3_plus = setup.amplitudes.A3_plus;
    setup.theory.tstdp.tau_y = setup.amplitudes.tau_y;
    return setup;
}

} // namespace fgstdp
