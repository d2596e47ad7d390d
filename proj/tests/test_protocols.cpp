#include <doctest.h>

#include "fgstdp/errors.hpp"
#include "fgstdp/protocols.hpp"

#include <cmath>

using namespace fgstdp;

namespace {

ProtocolSpec one_point(ProtocolKind kind, ProtocolPoint pt, double r = 2.0, int reps = 1) {
    ProtocolSpec spec;
    spec.kind = kind;
    spec.points = {pt};
    spec.compression_r = r;
    spec.reps = reps;
    return spec;
}

} // namespace

TEST_CASE("kind names round-trip") {
    for (auto k : {ProtocolKind::window, ProtocolKind::triplet1, ProtocolKind::triplet2,
                   ProtocolKind::quadruplet, ProtocolKind::frequency}) {
        CHECK(protocol_kind_from_string(to_string(k)) == k);
    }
    CHECK_THROWS_AS(protocol_kind_from_string("sextuplet"), ValidationError);
}

TEST_CASE("labels") {
    CHECK(ProtocolPoint{.dt1 = -5e-3, .dt2 = 5e-3}.label(ProtocolKind::triplet2) == "(-5,5)");
    CHECK(ProtocolPoint{.dt1 = 5e-3, .dt3 = 15e-3}.label(ProtocolKind::triplet1) == "(5,15)");
    CHECK(ProtocolPoint{.dt1 = 5e-3, .T = -20e-3}.label(ProtocolKind::quadruplet) == "T=-20ms");
    CHECK(ProtocolPoint{.dt1 = 5e-3, .rho = 10}.label(ProtocolKind::frequency) == "dt=5ms,rho=10Hz");
}

TEST_CASE("schedule layouts") {
    SUBCASE("window") {
        const auto s = build_schedule(ProtocolSpec::window({20e-3}), 0);
        REQUIRE(s.pre.size() == 1);
        CHECK(s.post[0] - s.pre[0] == doctest::Approx(20e-3));
        const auto neg = build_schedule(ProtocolSpec::window({-20e-3}, 2.0), 0);
        CHECK(neg.post[0] - neg.pre[0] == doctest::Approx(-10e-3));
        const auto zero = build_schedule(ProtocolSpec::window({0.0}), 0);
        CHECK(zero.pre[0] == zero.post[0]);
        CHECK(zero.horizon > zero.post[0]);
    }
    SUBCASE("triplet2 post-pre-post") {
        const auto s = build_schedule(one_point(ProtocolKind::triplet2, {.dt1 = -5e-3, .dt2 = 5e-3}), 0);
        REQUIRE(s.post.size() == 2);
        REQUIRE(s.pre.size() == 1);
        CHECK(s.pre[0] - s.post[0] == doctest::Approx(2.5e-3));
        CHECK(s.post[1] - s.pre[0] == doctest::Approx(2.5e-3));
    }
    SUBCASE("triplet1 pre-post-pre") {
        const auto s = build_schedule(one_point(ProtocolKind::triplet1, {.dt1 = 10e-3, .dt3 = 10e-3}), 0);
        REQUIRE(s.pre.size() == 2);
        CHECK(s.post[0] - s.pre[0] == doctest::Approx(5e-3));
        CHECK(s.pre[1] - s.post[0] == doctest::Approx(5e-3));
    }
    SUBCASE("quadruplet") {
        const auto pos = build_schedule(one_point(ProtocolKind::quadruplet, {.dt1 = 5e-3, .T = 40e-3}), 0);
        REQUIRE(pos.pre.size() == 2);
        REQUIRE(pos.post.size() == 2);
        // post-pre-pre-post
        CHECK(pos.pre[0] - pos.post[0] == doctest::Approx(2.5e-3));
        CHECK(pos.post[1] - pos.pre[1] == doctest::Approx(2.5e-3));
        CHECK(pos.pre[1] - pos.post[0] == doctest::Approx(20e-3));
        const auto neg = build_schedule(one_point(ProtocolKind::quadruplet, {.dt1 = 5e-3, .T = -40e-3}), 0);
        // pre-post-post-pre
        CHECK(neg.post[0] - neg.pre[0] == doctest::Approx(2.5e-3));
        CHECK(neg.pre[1] - neg.post[1] == doctest::Approx(2.5e-3));
    }
    SUBCASE("frequency") {
        auto spec = one_point(ProtocolKind::frequency, {.dt1 = 5e-3, .rho = 20}, 2.0, 4);
        const auto s = build_schedule(spec, 0);
        REQUIRE(s.pre.size() == 4);
        CHECK(s.pre[1] - s.pre[0] == doctest::Approx(1.0 / 40));
        CHECK(s.post[0] - s.pre[0] == doctest::Approx(2.5e-3));
    }
    SUBCASE("repetitions") {
        auto spec = ProtocolSpec::window({10e-3}, 1.0, 3);
        const auto s = build_schedule(spec, 0);
        REQUIRE(s.pre.size() == 3);
        CHECK(s.pre[2] - s.pre[1] == doctest::Approx(spec.rep_interval));
        CHECK_NOTHROW(s.validate());
    }
}

TEST_CASE("default sweeps") {
    CHECK(ProtocolSpec::default_window().points.size() == 50);
    CHECK(ProtocolSpec::default_triplet1().points.size() == 4);
    CHECK(ProtocolSpec::default_triplet2().points.size() == 4);
    const auto q = ProtocolSpec::default_quadruplet();
    double widest = 0;
    for (const auto& p : q.points) widest = std::max(widest, std::abs(p.T) / q.compression_r);
    CHECK(widest == doctest::Approx(80e-3));
    const auto f = ProtocolSpec::default_frequency(-5e-3);
    CHECK(f.points.front().dt1 == -5e-3);
    for (const auto& spec : {ProtocolSpec::default_window(), ProtocolSpec::default_triplet1(),
                             ProtocolSpec::default_triplet2(), q, f}) {
        CHECK_NOTHROW(spec.validate());
        for (std::size_t i = 0; i < spec.points.size(); ++i) CHECK_NOTHROW(build_schedule(spec, i));
    }
}

TEST_CASE("spec validation") {
    ProtocolSpec empty;
    CHECK_THROWS_AS(empty.validate(), ValidationError);

    auto bad = ProtocolSpec::window({10e-3});
    bad.reps = 0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    auto tight = ProtocolSpec::window({10e-3}, 1.0, 2);
    tight.rep_interval = 5e-3;
    CHECK_THROWS_AS(tight.validate(), ValidationError);

    CHECK_THROWS_AS(one_point(ProtocolKind::triplet2, {.dt1 = 5e-3, .dt2 = 5e-3}).validate(), ValidationError);
    CHECK_THROWS_AS(one_point(ProtocolKind::triplet1, {.dt1 = 5e-3}).validate(), ValidationError);
    CHECK_THROWS_AS(one_point(ProtocolKind::quadruplet, {.dt1 = 5e-3, .T = 5e-3}).validate(), ValidationError);
    CHECK_THROWS_AS(one_point(ProtocolKind::frequency, {.dt1 = 50e-3, .rho = 40}).validate(), ValidationError);
    CHECK_THROWS_AS(one_point(ProtocolKind::window, {}).validate(), ValidationError);
    CHECK_THROWS_AS(build_schedule(ProtocolSpec::window({1e-3}), 3), ValidationError);
}

TEST_CASE("protocol setup") {
    const auto f = protocol_setup(ProtocolKind::frequency, DrainMode::single_pulsed);
    CHECK(f.amplitudes.A3_plus == 28.7e-3);
    CHECK(f.waveform.V_d_min == 0.5);
    CHECK(f.theory.tstdp.A3_plus == 28.7e-3);
    const auto ff = protocol_setup(ProtocolKind::frequency, DrainMode::doublet_flat);
    CHECK(ff.waveform.V_d_min == 0.3);
    CHECK(ff.waveform.drain_mode == DrainMode::doublet_flat);
    const auto t = protocol_setup(ProtocolKind::triplet2, DrainMode::double_pulsed);
    CHECK(t.amplitudes.A3_plus == 9.1e-3);
    CHECK(t.waveform.drain_mode == DrainMode::double_pulsed);
}

TEST_CASE("run_protocol") {
    const DeviceParams p = DeviceParams::defaults();
    const auto setup = protocol_setup(ProtocolKind::triplet2, DrainMode::single_pulsed);
    auto spec = ProtocolSpec::default_triplet2();
    spec.reps = 3;

    RunOptions serial;
    serial.workers = 1;
    RunOptions parallel;
    parallel.workers = 4;
    const auto a = run_protocol(spec, setup.waveform, setup.amplitudes, p, setup.theory, serial);
    const auto b = run_protocol(spec, setup.waveform, setup.amplitudes, p, setup.theory, parallel);
    REQUIRE(a.size() == 4);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].point.dt1 == spec.points[i].dt1);
        CHECK(a[i].dw_fg_pct == b[i].dw_fg_pct);
        CHECK(a[i].dw_tstdp_pct == b[i].dw_tstdp_pct);
        CHECK(a[i].dw_tstdp_pct > a[i].dw_dstdp_pct);
    }

    SUBCASE("errors propagate") {
        DeviceParams hot = p;
        hot.exponent_cap = 10.0;
        CHECK_THROWS_AS(run_protocol(spec, setup.waveform, setup.amplitudes, hot, setup.theory, parallel),
                        ModelRangeError);
    }
}

TEST_CASE("theory columns do not depend on r") {
    const DeviceParams p = DeviceParams::defaults();
    const WaveformConfig cfg;
    auto s1 = ProtocolSpec::default_triplet1();
    s1.reps = 2;
    s1.compression_r = 1.0;
    auto s2 = s1;
    s2.compression_r = 2.0;
    const auto a = run_protocol(s1, cfg, {}, p);
    const auto b = run_protocol(s2, cfg, {}, p);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].dw_tstdp_pct == doctest::Approx(b[i].dw_tstdp_pct).epsilon(1e-9));
        CHECK(a[i].dw_dstdp_pct == doctest::Approx(b[i].dw_dstdp_pct).epsilon(1e-9));
    }
}

TEST_CASE("compressing time is equivalent to co-scaling the waveforms") {
    // With every waveform duration divided by r and both currents
    // multiplied by r, the FG equation is the r = 1 equation on a
    // rescaled clock.
    const double r = 2.0;
    const DeviceParams p = DeviceParams::defaults();
    DeviceParams fast = p;
    fast.I_inj0 *= r;
    fast.I_tun0 *= r;
    WaveformConfig cfg;
    WaveformConfig scaled = cfg;
    for (double* d : {&scaled.T_g, &scaled.t_fall_gate, &scaled.T_tun, &scaled.T_tun_delay,
                      &scaled.T_tun_pulse, &scaled.T_d}) {
        *d /= r;
    }
    RunOptions o1, o2;
    o2.engine.dt_max = o1.engine.dt_max / r;

    for (ProtocolSpec spec : {ProtocolSpec::default_triplet2(), ProtocolSpec::default_triplet1()}) {
        spec.reps = 2;
        spec.compression_r = 1.0;
        auto compressed = spec;
        compressed.compression_r = r;
        const auto a = run_protocol(spec, cfg, {}, p, {}, o1);
        const auto b = run_protocol(compressed, scaled, {}, fast, {}, o2);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(b[i].dw_fg_pct == doctest::Approx(a[i].dw_fg_pct).epsilon(1e-6));
        }
    }
}

TEST_CASE("flat equals single when post-spikes are far apart") {
    const DeviceParams p = DeviceParams::defaults();
    WaveformConfig single;
    WaveformConfig flat;
    flat.drain_mode = DrainMode::doublet_flat;
    auto spec = ProtocolSpec::window({-10e-3, 10e-3}, 2.0, 3);
    const auto a = run_protocol(spec, single, {}, p);
    const auto b = run_protocol(spec, flat, {}, p);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].dw_fg_pct == doctest::Approx(b[i].dw_fg_pct).epsilon(1e-6));
    }
}
