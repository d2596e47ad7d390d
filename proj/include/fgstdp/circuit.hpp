#pragma once

#include "fgstdp/schedule.hpp"
#include "fgstdp/waveforms.hpp"

#include <optional>
#include <span>
#include <vector>

namespace fgstdp {

/// Delay between the sampling clock and the reset clock.
inline constexpr double clock_nonoverlap_delay = 10e-6;

/// Switched-capacitor generator for the single-pulsed drain increment:
/// capacitor C reset below V_d_min, relaxing back through a switched
/// capacitor C_sc clocked at T_sc.
struct ScGeneratorParams {
    double C = 1e-12;
    double C_sc = 1e-12 * 2e-3 / 48e-3;
    double T_sc = 2e-3;
    double V_d_min = 0.3;
    double delta_vd_max = 0.25 * 1.0909;
    double V_d_init = 5.0;

    /// Sizes C_sc for R_sc C = tau_y and sets delta_vd_max to the ideal law
    /// at dt2 -> 0.
    static ScGeneratorParams from_targets(const TripletAmplitudeParams& amp, double C,
                                          double T_sc, double V_d_min, double V_d_init = 5.0);

    /// Equivalent resistance T_sc / C_sc.
    double R_sc() const { return T_sc / C_sc; }
    /// Decay constant R_sc C implied by the sizing.
    double tau() const { return R_sc() * C; }
    void validate() const;
};

/// Current-source ramp generator for the double-pulsed drain increment.
struct RampGeneratorParams {
    double C = 1e-12;
    double I_p = -5.2e-12;
    double V_d_min = 0.3;
    double delta_vd_max = 0.17;
    double V_d_init = 5.0;

    /// I_p = -C V_inj / tau_y and delta_vd_max from the ideal law at dt2 -> 0.
    static RampGeneratorParams from_targets(const TripletAmplitudeParams& amp, double C,
                                            double V_d_min, double V_d_init = 5.0);

    double slope() const { return I_p / C; }
    void validate() const;
};

/// Capacitor node voltage of the switched-capacitor generator at time t.
/// Each post-spike resets the node (after the non-overlap delay); between
/// resets the node moves toward V_d_min by charge sharing once per T_sc.
double sc_capacitor_trace(std::span<const double> post, const ScGeneratorParams& g, double t);

/// Drain increment the switched-capacitor circuit delivers to a post-spike
/// arriving dt2 after the previous one.
double emulated_delta_vd_single(double dt2, const ScGeneratorParams& g);

/// Drain increment of the ramp circuit, nullopt once the ramp has reached
/// V_d_min.
std::optional<double> emulated_delta_vd_double(double dt2, const RampGeneratorParams& g);

/// Continuous RC reference for the switched-capacitor node.
double rc_reference_trace(double since_reset, const ScGeneratorParams& g);

struct GeneratorComparison {
    double dt2;
    double ideal;
    double emulated;
    double error;
};

/// Emulated vs. ideal increments on a dt2 grid; ideal laws evaluated with
/// amp (use r = 1 for the uncompressed circuit axis).
std::vector<GeneratorComparison> compare_single(std::span<const double> dt2s,
                                                const ScGeneratorParams& g,
                                                const TripletAmplitudeParams& amp);
/// Restricted to dt2 where both ideal and emulated second pulses exist.
std::vector<GeneratorComparison> compare_double(std::span<const double> dt2s,
                                                const RampGeneratorParams& g,
                                                const TripletAmplitudeParams& amp);

double sup_norm_error(std::span<const GeneratorComparison> rows);

} // namespace fgstdp
