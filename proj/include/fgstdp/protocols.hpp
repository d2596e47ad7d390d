#pragma once

#include "fgstdp/device.hpp"
#include "fgstdp/engine.hpp"
#include "fgstdp/schedule.hpp"
#include "fgstdp/theory.hpp"
#include "fgstdp/waveforms.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace fgstdp {

enum class ProtocolKind { window, triplet1, triplet2, quadruplet, frequency };

std::string_view to_string(ProtocolKind kind);
ProtocolKind protocol_kind_from_string(std::string_view name);

inline constexpr double unset = std::numeric_limits<double>::quiet_NaN();

/// One point of a sweep, in uncompressed (reference) time units.
///
///   window      dt1 = t_post - t_pre
///   triplet1    pre, post, pre: dt1 = post - pre1 (> 0), dt3 = pre2 - post (> 0)
///   triplet2    post, pre, post: dt1 = post1 - pre (< 0), dt2 = post2 - pre (> 0)
///   quadruplet  dt1 = intra-pair gap (> 0), T = signed pair-to-pair interval;
///               T < 0 is pre-post-post-pre, T > 0 post-pre-pre-post
///   frequency   dt1 = t_post - t_pre of each pair, rho = pairing rate (Hz)
struct ProtocolPoint {
    double dt1 = unset;
    double dt2 = unset;
    double dt3 = unset;
    double T = unset;
    double rho = unset;

    std::string label(ProtocolKind kind) const;
};

struct ProtocolSpec {
    ProtocolKind kind = ProtocolKind::window;
    std::vector<ProtocolPoint> points;
    int reps = 60;
    /// Spacing between repetitions of a pattern (s); unused by frequency.
    double rep_interval = 1.0;
    /// Every timing is divided by r before it is applied to the device.
    double compression_r = 2.0;

    void validate() const;

    static ProtocolSpec window(std::vector<double> dts, double r = 1.0, int reps = 1);
    static ProtocolSpec default_window();
    static ProtocolSpec default_triplet1();
    static ProtocolSpec default_triplet2();
    static ProtocolSpec default_quadruplet();
    static ProtocolSpec default_frequency(double dt);
};

/// Builds the compressed schedule of one sweep point, all repetitions.
SpikeSchedule build_schedule(const ProtocolSpec& spec, std::size_t point_index);

struct TheoryParams {
    DstdpParams dstdp;
    TstdpParams tstdp;
};

struct ProtocolRow {
    ProtocolPoint point;
    double dw_fg_pct = 0.0;
    double dw_dstdp_pct = 0.0;
    double dw_tstdp_pct = 0.0;
};

struct RunOptions {
    EngineOptions engine;
    /// Worker threads for sweep points; 0 picks hardware concurrency.
    unsigned workers = 0;
};

/// Runs every point of the sweep on the FG integrator and evaluates both
/// theory rules (on the uncompressed time axis) for the same schedule.
/// Theory percentages are 100 times the summed per-event weight changes.
/// Rows are returned in point order.
std::vector<ProtocolRow> run_protocol(const ProtocolSpec& spec, const WaveformConfig& cfg,
                                      const TripletAmplitudeParams& amp,
                                      const DeviceParams& p,
                                      const TheoryParams& theory = {},
                                      const RunOptions& opts = {});

/// Waveform and amplitude settings used for a protocol in a drain mode:
/// the reference setup, with A3+ = 28.7e-3 and V_d_min = 0.5 V for the
/// frequency protocol in the pulsed modes. The T-STDP reference shares the
/// triplet amplitudes (A3+ = 28.7e-3 for frequency in every mode).
struct ProtocolSetup {
    WaveformConfig waveform;
    TripletAmplitudeParams amplitudes;
    TheoryParams theory;
};

ProtocolSetup protocol_setup(ProtocolKind kind, DrainMode mode,
                             const WaveformConfig& base = {},
                             const TripletAmplitudeParams& base_amp = {});

} // namespace fgstdp
