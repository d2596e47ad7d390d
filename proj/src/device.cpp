#include "fgstdp/device.hpp"

#include "fgstdp/errors.hpp"

#include <cmath>
#include <fmt/format.h>

namespace fgstdp {

namespace {

double checked_exp(double exponent, const DeviceParams& p, const char* what) {
    if (!(exponent <= p.exponent_cap)) {
        throw ModelRangeError(fmt::format("{}: exponent {:.6g} exceeds cap {:.6g}", what,
                                          exponent, p.exponent_cap));
    }
    return std::exp(exponent);
}

void require(bool ok, const char* message) {
    if (!ok) throw ValidationError(message);
}

} // namespace

DeviceParams DeviceParams::defaults() {
    DeviceParams p;
    // Output of calibrate_window() on the reference waveform setup, rounded.
    p.I_inj0 = 1.068e-30;
    p.I_tun0 = 9.126e-19;
    p.V_ox = 0.9;
    return p;
}

void DeviceParams::validate() const {
    require(I_s0 > 0 && U_T > 0 && V_inj > 0 && V_ox > 0, "device: I_s0, U_T, V_inj, V_ox must be > 0");
    require(I_inj0 >= 0 && I_tun0 >= 0, "device: I_inj0 and I_tun0 must be >= 0");
    require(C_T > 0 && C_g > 0 && C_tun >= 0, "device: capacitances must be positive");
    require(kappa > 0 && kappa <= 1, "device: kappa must lie in (0, 1]");
    require(std::abs(alpha - (1.0 - U_T / V_inj)) <= 1e-12, "device: alpha must equal 1 - U_T/V_inj");
    require(C_g >= 10 * C_tun, "device: gate coupling must dominate (C_g >= 10 C_tun)");
    require(C_g + C_tun <= C_T, "device: C_T must include C_g and C_tun");
    require(std::isfinite(V_dd) && std::isfinite(V_fg_rest), "device: V_dd and V_fg_rest must be finite");
    require(exponent_cap > 0, "device: exponent_cap must be > 0");
}

double fg_voltage(const FgState& state, double v_g, double v_tun, const WaveformConfig& cfg,
                  const DeviceParams& p) {
    return state.V_fg_slow + (p.C_g / p.C_T) * (v_g - cfg.V_g_init) +
           (p.C_tun / p.C_T) * (v_tun - cfg.V_tun_init);
}

double drain_current(double v_fg, const DeviceParams& p) {
    return p.I_s0 * checked_exp(p.kappa * (p.V_dd - v_fg) / p.U_T, p, "drain_current");
}

double injection_current(double i_d, double delta_v_ds, const DeviceParams& p) {
    if (i_d <= 0.0) return 0.0;
    const double exponent = p.alpha * std::log(i_d / p.I_s0) - delta_v_ds / p.V_inj;
    return p.I_inj0 * checked_exp(exponent, p, "injection_current");
}

double drain_source_voltage(double v_d, const DeviceParams& p) { return v_d - p.V_dd; }

double tunneling_current(double v_tun, double v_fg, const DeviceParams& p) {
    return p.I_tun0 * checked_exp((v_tun - v_fg) / p.V_ox, p, "tunneling_current");
}

double weight_of(double v_fg, const DeviceParams& p) {
    return checked_exp(-p.kappa * v_fg / p.U_T, p, "weight_of");
}

double percent_weight_change(double dv_fg_slow, const DeviceParams& p) {
    return 100.0 * std::expm1(-p.kappa * dv_fg_slow / p.U_T);
}

} // namespace fgstdp
