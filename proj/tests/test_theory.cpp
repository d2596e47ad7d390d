#include <doctest.h>

#include "fgstdp/engine.hpp"
#include "fgstdp/errors.hpp"
#include "fgstdp/theory.hpp"
#include "fgstdp/waveforms.hpp"

#include <cmath>
#include <random>

using namespace fgstdp;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Brute-force nearest-spike accumulation: for every spike, scan the whole
// schedule for the latest earlier spike on each side.
double nearest_oracle(const SpikeSchedule& s, const TstdpParams& p) {
    auto latest_before = [](const std::vector<double>& v, double t, bool inclusive) {
        double best = -inf;
        for (double x : v) {
            if ((inclusive ? x <= t : x < t) && x > best) best = x;
        }
        return best;
    };
    const TstdpParams e = p.effective();
    double total = 0.0;
    for (double t : s.post) {
        const double pre = latest_before(s.pre, t, true);
        if (pre == -inf) continue;
        const double prev_post = latest_before(s.post, t, false);
        const double y = prev_post == -inf ? 0.0 : std::exp(-(t - prev_post) / e.tau_y);
        total += std::exp(-(t - pre) / e.tau_plus) * (e.A2_plus + e.A3_plus * y);
    }
    for (double t : s.pre) {
        const double post = latest_before(s.post, t, false);
        if (post == -inf) continue;
        const double prev_pre = latest_before(s.pre, t, false);
        const double x = prev_pre == -inf ? 0.0 : std::exp(-(t - prev_pre) / e.tau_x);
        total -= std::exp(-(t - post) / e.tau_minus) * (e.A2_minus + e.A3_minus * x);
    }
    return total;
}

SpikeSchedule random_schedule(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SpikeSchedule s;
    for (int i = 0; i < n; ++i) {
        s.pre.push_back(std::round(u(rng) * 1e5) / 1e5);
        s.post.push_back(std::round(u(rng) * 1e5) / 1e5 + 0.5e-5);
    }
    std::sort(s.pre.begin(), s.pre.end());
    std::sort(s.post.begin(), s.post.end());
    s.pre.erase(std::unique(s.pre.begin(), s.pre.end()), s.pre.end());
    s.post.erase(std::unique(s.post.begin(), s.post.end()), s.post.end());
    s.horizon = 1.1;
    return s;
}

} // namespace

TEST_CASE("pair rule") {
    const DstdpParams p;
    CHECK(dstdp_dw(0.0, p) == 4.6e-3);
    CHECK(dstdp_dw(10.0, p) == doctest::Approx(0.0));
    CHECK(dstdp_dw(-33.7e-3, p) == doctest::Approx(-3e-3 / std::exp(1.0)).epsilon(1e-14));
    CHECK(dstdp_dw(16.8e-3, p) == doctest::Approx(4.6e-3 / std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("triplet rule") {
    TstdpParams p;
    const DstdpParams d;

    CHECK(tstdp_dw(5e-3, inf, inf, SpikeSide::post, p) == dstdp_dw(5e-3, d));
    CHECK(tstdp_dw(5e-3, 10e-3, inf, SpikeSide::post, p) ==
          doctest::Approx(std::exp(-5.0 / 16.8) * (4.6e-3 + 9.1e-3 * std::exp(-10.0 / 48.0)))
              .epsilon(1e-14));
    CHECK(tstdp_dw(-12e-3, inf, 30e-3, SpikeSide::pre, p) == dstdp_dw(-12e-3, d));

    SUBCASE("minimal models") {
        p.A3_minus = 1e-3;
        p.minimal_model = MinimalModel::hippocampal;
        CHECK(tstdp_dw(-5e-3, inf, 1e-3, SpikeSide::pre, p) == dstdp_dw(-5e-3, d));
        p.minimal_model = MinimalModel::visual_cortex;
        CHECK(tstdp_dw(5e-3, inf, inf, SpikeSide::post, p) == 0.0);
        p.minimal_model = MinimalModel::full;
        CHECK(tstdp_dw(-5e-3, inf, 1e-3, SpikeSide::pre, p) < dstdp_dw(-5e-3, d));
    }

    SUBCASE("A3 terms off reduce to the pair rule on a grid") {
        p.A3_plus = 0.0;
        for (double dt1 = 0.0; dt1 < 0.2; dt1 += 1e-3) {
            for (double dt2 : {1e-3, 10e-3, 100e-3, inf}) {
                CHECK(std::abs(tstdp_dw(dt1, dt2, inf, SpikeSide::post, p) - dstdp_dw(dt1, d)) < 1e-12);
                CHECK(std::abs(tstdp_dw(-dt1, inf, dt2, SpikeSide::pre, p) +
                               d.A_minus * std::exp(-dt1 / d.tau_minus)) < 1e-12);
            }
        }
    }
}

TEST_CASE("ratios") {
    const DeviceParams dev = DeviceParams::defaults();
    const TstdpParams t;

    CHECK(ratio_ytheory(1e3, t) == doctest::Approx(1.0));
    CHECK(ratio_ytheory(0.0, t) == doctest::Approx(1 + 9.1 / 4.6).epsilon(1e-14));
    CHECK(ratio_ytheory(0.0, t) == doctest::Approx(2.978).epsilon(1e-3));
    CHECK(ratio_ytheory(t.tau_y, t) == doctest::Approx(1 + 9.1 / 4.6 / std::exp(1.0)).epsilon(1e-14));

    CHECK(ratio_yfg(DrainMode::single_pulsed, 0.0, dev) == 1.0);
    const double ys = ratio_yfg(DrainMode::single_pulsed, 0.24, dev);
    CHECK(ys == doctest::Approx(2.61).epsilon(0.01));
    CHECK(ys == doctest::Approx(ratio_ytheory(10e-3, t)).epsilon(0.02));
    const double yd = ratio_yfg(DrainMode::double_pulsed, 0.066, dev);
    CHECK(yd == doctest::Approx(1 + std::exp(0.066 / 0.25)).epsilon(1e-14));
    CHECK(yd == doctest::Approx(2.30).epsilon(0.01));
    CHECK(yd == doctest::Approx(ratio_ytheory(20e-3, t)).epsilon(0.01));
    CHECK_THROWS_AS(ratio_yfg(DrainMode::doublet_flat, 0.1, dev), ValidationError);

    SUBCASE("inversion identity") {
        TripletAmplitudeParams amp;
        for (double dt2 = 0.2e-3; dt2 < 0.4; dt2 *= 1.05) {
            const double want = ratio_ytheory(amp.r * dt2, t);
            CHECK(ratio_yfg(DrainMode::single_pulsed, delta_vd_single(dt2, amp), dev) ==
                  doctest::Approx(want).epsilon(1e-12));
            if (auto d = delta_vd_double(dt2, amp)) {
                CHECK(ratio_yfg(DrainMode::double_pulsed, *d, dev) == doctest::Approx(want).epsilon(1e-12));
            }
        }
    }

    CHECK(compression_factor(16.8e-3, 16.8e-3) == 1.0);
    CHECK(compression_factor(16.8e-3, 8.4e-3) == 2.0);
    CHECK_THROWS_AS(compression_factor(0.0, 1.0), ValidationError);
}

TEST_CASE("closed-form injection") {
    const DeviceParams p = DeviceParams::defaults();
    const WaveformConfig cfg;
    const auto cf = closed_form_constants(p, cfg);

    CHECK(cf.A < 0.0);
    CHECK(cf.X == doctest::Approx(1.0 / 25e-3).epsilon(1e-3));
    CHECK(fg_doublet_injection(0.0, cf, cfg.V_d_min, p) ==
          doctest::Approx(std::abs(cf.A) * std::exp((p.V_dd - cfg.V_d_min) / p.V_inj)).epsilon(1e-14));
    const double full = fg_doublet_injection(0.0, cf, cfg.V_d_min, p);
    CHECK(fg_doublet_injection(std::log(2.0) / cf.X, cf, cfg.V_d_min, p) == doctest::Approx(full / 2));

    // log-linear in dt with slope -X
    const double h = 1e-4;
    const double slope = (std::log(fg_doublet_injection(20e-3 + h, cf, cfg.V_d_min, p)) -
                          std::log(fg_doublet_injection(20e-3 - h, cf, cfg.V_d_min, p))) / (2 * h);
    CHECK(slope == doctest::Approx(-cf.X).epsilon(1e-9));

    // A lower drain pulse injects more.
    CHECK(fg_doublet_injection(10e-3, cf, 0.1, p) > fg_doublet_injection(10e-3, cf, 0.3, p));
}

TEST_CASE("closed-form tunneling") {
    const DeviceParams p = DeviceParams::defaults();
    const WaveformConfig cfg;
    const auto cf = closed_form_constants(p, cfg);
    double prev = inf;
    for (double dt : {-2e-3, -5e-3, -10e-3, -20e-3, -50e-3, -100e-3, -250e-3}) {
        const double v = fg_doublet_tunneling(dt, cf, cfg, p);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(fg_doublet_tunneling(-250e-3, cf, cfg, p) < 1e-4 * fg_doublet_tunneling(-5e-3, cf, cfg, p));
}

TEST_CASE("closed forms agree with the integrator") {
    const DeviceParams p = DeviceParams::defaults();
    WaveformConfig cfg;
    cfg.drain_mode = DrainMode::doublet_flat;
    const auto cf = closed_form_constants(p, cfg);
    for (double dt : {20e-3, -10e-3}) {
        SpikeSchedule s;
        const double t0 = 0.01;
        if (dt > 0) {
            s.pre = {t0};
            s.post = {t0 + dt};
        } else {
            s.post = {t0};
            s.pre = {t0 - dt};
        }
        s.horizon = 0.5;
        const RunResult r = integrate(s, cfg, {}, p);
        if (dt > 0) {
            CHECK(-r.dv_injection == doctest::Approx(fg_doublet_injection(dt, cf, cfg.V_d_min, p)).epsilon(0.02));
        } else {
            CHECK(r.dv_tunneling == doctest::Approx(fg_doublet_tunneling(dt, cf, cfg, p)).epsilon(0.02));
        }
    }
}

TEST_CASE("nearest-spike accumulation") {
    std::mt19937 rng(2024);
    TstdpParams full;
    full.minimal_model = MinimalModel::full;
    full.A3_minus = 2e-3;
    for (int trial = 0; trial < 50; ++trial) {
        const SpikeSchedule s = random_schedule(rng, 12);
        for (const TstdpParams& p : {TstdpParams{}, full}) {
            CHECK(tstdp_weight_change(s, p) == doctest::Approx(nearest_oracle(s, p)).epsilon(1e-12));
        }
    }

    SUBCASE("pair rule equals the triplet rule without triplet terms") {
        TstdpParams p;
        p.A3_plus = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const SpikeSchedule s = random_schedule(rng, 10);
            CHECK(std::abs(tstdp_weight_change(s, p) - dstdp_weight_change(s, DstdpParams{})) < 1e-12);
        }
    }

    SUBCASE("time scale") {
        const SpikeSchedule s{{0.010, 0.300}, {0.0125, 0.2975}, 1.0};
        SpikeSchedule doubled = s;
        for (double& t : doubled.pre) t *= 2;
        for (double& t : doubled.post) t *= 2;
        CHECK(tstdp_weight_change(s, TstdpParams{}, 2.0) ==
              doctest::Approx(tstdp_weight_change(doubled, TstdpParams{})).epsilon(1e-13));
    }

    SUBCASE("coincident spikes count as pre first") {
        const SpikeSchedule s{{0.1}, {0.1}, 1.0};
        CHECK(dstdp_weight_change(s, DstdpParams{}) == 4.6e-3);
    }
}
