#include <doctest.h>

#include "fgstdp/device.hpp"
#include "fgstdp/errors.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace fgstdp;

namespace {

// Charge on the FG node with every coupling capacitor written out. The
// remainder of C_T is tied to a fixed node at 0 V.
struct ChargeNode {
    double C_g, C_tun, C_rest;

    double charge(double v_fg, double v_g, double v_tun) const {
        return C_g * (v_fg - v_g) + C_tun * (v_fg - v_tun) + C_rest * v_fg;
    }
    double solve(double q, double v_g, double v_tun) const {
        return (q + C_g * v_g + C_tun * v_tun) / (C_g + C_tun + C_rest);
    }
};

} // namespace

TEST_CASE("defaults validate and satisfy the alpha identity") {
    const DeviceParams p = DeviceParams::defaults();
    CHECK_NOTHROW(p.validate());
    CHECK(p.alpha == doctest::Approx(1.0 - p.U_T / p.V_inj).epsilon(1e-15));
}

TEST_CASE("fg_voltage coupling") {
    const DeviceParams p = DeviceParams::defaults();
    const WaveformConfig cfg;
    const FgState s{4.4, 0.0};

    SUBCASE("rest") {
        CHECK(fg_voltage(s, cfg.V_g_init, cfg.V_tun_init, cfg, p) == 4.4);
    }
    SUBCASE("single capacitor divider") {
        DeviceParams q = p;
        q.C_tun = 0.0;
        const double dv = 0.8;
        CHECK(fg_voltage(s, cfg.V_g_init - dv, cfg.V_tun_init, cfg, q) ==
              doctest::Approx(4.4 - q.C_g / q.C_T * dv).epsilon(1e-14));
    }
    SUBCASE("charge balance") {
        const ChargeNode node{p.C_g, p.C_tun, p.C_T - p.C_g - p.C_tun};
        const double q0 = node.charge(s.V_fg_slow, cfg.V_g_init, cfg.V_tun_init);
        for (double vg : {2.5, 2.9, 3.3, 3.6}) {
            for (double vt : {5.4, 9.0, 16.5}) {
                const double expect = node.solve(q0, vg, vt);
                CHECK(fg_voltage(s, vg, vt, cfg, p) == doctest::Approx(expect).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("drain_current") {
    const DeviceParams p = DeviceParams::defaults();
    CHECK(drain_current(p.V_dd, p) == p.I_s0);
    CHECK(drain_current(p.V_dd - p.U_T / p.kappa, p) ==
          doctest::Approx(p.I_s0 * std::exp(1.0)).epsilon(1e-14));

    // d ln I / dV = -kappa / U_T, checked by central differences.
    for (double v : {3.9, 4.4, 4.9}) {
        const double h = 1e-6;
        const double slope = (std::log(drain_current(v + h, p)) - std::log(drain_current(v - h, p))) / (2 * h);
        CHECK(slope == doctest::Approx(-p.kappa / p.U_T).epsilon(1e-6));
    }

    CHECK_THROWS_AS(drain_current(p.V_dd - 20.0, p), ModelRangeError);
}

TEST_CASE("injection_current") {
    const DeviceParams p = DeviceParams::defaults();
    CHECK(injection_current(0.0, -4.9, p) == 0.0);
    CHECK(injection_current(p.I_s0, 0.0, p) == doctest::Approx(p.I_inj0).epsilon(1e-14));

    for (double id : {1e-12, 3e-10, 1e-8}) {
        for (double vds : {-4.9, -2.0, 0.0}) {
            const double ratio = injection_current(2 * id, vds, p) / injection_current(id, vds, p);
            CHECK(ratio == doctest::Approx(std::pow(2.0, p.alpha)).epsilon(1e-12));
        }
    }

    // Pulling the drain lower injects more.
    const double id = 1e-9;
    CHECK(injection_current(id, drain_source_voltage(0.3, p), p) >
          injection_current(id, drain_source_voltage(5.0, p), p));
    CHECK(drain_source_voltage(p.V_dd, p) == 0.0);

    // log-linear in delta_v_ds with slope -1/V_inj
    const double a = std::log(injection_current(id, -3.0, p));
    const double b = std::log(injection_current(id, -3.5, p));
    CHECK((b - a) / 0.5 == doctest::Approx(1.0 / p.V_inj).epsilon(1e-9));
}

TEST_CASE("tunneling_current") {
    const DeviceParams p = DeviceParams::defaults();
    CHECK(tunneling_current(7.0, 7.0, p) == p.I_tun0);
    CHECK(tunneling_current(7.0 + p.V_ox, 7.0, p) ==
          doctest::Approx(p.I_tun0 * std::exp(1.0)).epsilon(1e-14));
    CHECK_THROWS_AS(tunneling_current(500.0, 0.0, p), ModelRangeError);

    // The tunnel node at rest is effectively off compared with the peak.
    const WaveformConfig cfg;
    const double rest = tunneling_current(cfg.V_tun_init, p.V_fg_rest, p);
    const double peak = tunneling_current(cfg.V_tun_max, p.V_fg_rest, p);
    CHECK(rest < 1e-4 * peak);
}

TEST_CASE("weight map") {
    const DeviceParams p = DeviceParams::defaults();
    CHECK(percent_weight_change(0.0, p) == 0.0);
    CHECK(percent_weight_change(-p.U_T / p.kappa, p) ==
          doctest::Approx(100.0 * (std::exp(1.0) - 1.0)).epsilon(1e-13));
    CHECK(percent_weight_change(-p.U_T / p.kappa, p) == doctest::Approx(171.8).epsilon(1e-3));
    CHECK(percent_weight_change(1e-3, p) < 0.0);

    // Consistent with the ratio of absolute weights.
    const double v0 = 4.4, dv = -2e-3;
    CHECK(percent_weight_change(dv, p) ==
          doctest::Approx(100.0 * (weight_of(v0 + dv, p) / weight_of(v0, p) - 1.0)).epsilon(1e-9));
    CHECK_THROWS_AS(weight_of(-20.0, p), ModelRangeError);
}

TEST_CASE("strict monotonicity over random voltage pairs") {
    const DeviceParams p = DeviceParams::defaults();
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> volt(3.0, 5.2);
    for (int i = 0; i < 2000; ++i) {
        double a = volt(rng), b = volt(rng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        CHECK(drain_current(a, p) > drain_current(b, p));
        CHECK(tunneling_current(a + 10.0, 4.4, p) < tunneling_current(b + 10.0, 4.4, p));
        CHECK(weight_of(a, p) > weight_of(b, p));
    }
}

TEST_CASE("device functions are pure") {
    const DeviceParams p = DeviceParams::defaults();
    const double a = injection_current(drain_current(4.1, p), -4.9, p);
    const double b = injection_current(drain_current(4.1, p), -4.9, p);
    CHECK(a == b);
}

TEST_CASE("validation rejects broken parameter sets") {
    auto rejects = [](auto mutate) {
        DeviceParams p = DeviceParams::defaults();
        mutate(p);
        CHECK_THROWS_AS(p.validate(), ValidationError);
    };
    rejects([](DeviceParams& p) { p.C_tun = p.C_g / 5; });
    rejects([](DeviceParams& p) { p.alpha += 1e-6; });
    rejects([](DeviceParams& p) { p.kappa = 1.2; });
    rejects([](DeviceParams& p) { p.kappa = 0.0; });
    rejects([](DeviceParams& p) { p.V_ox = 0.0; });
    rejects([](DeviceParams& p) { p.I_s0 = -1e-16; });
    rejects([](DeviceParams& p) { p.C_T = p.C_g; });

    DeviceParams p = DeviceParams::defaults();
    p.V_inj = 0.3;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p.refresh_alpha();
    CHECK_NOTHROW(p.validate());
}
