#pragma once

#include <vector>

namespace fgstdp {

/// Pre- and post-synaptic spike times (s) for one run.
struct SpikeSchedule {
    std::vector<double> pre;
    std::vector<double> post;
    double horizon = 0.0;

    /// Sorted ascending, finite, within [0, horizon], no duplicate instants
    /// on the same side.
    void validate() const;
};

} // namespace fgstdp
