#pragma once

#include "fgstdp/device.hpp"
#include "fgstdp/protocols.hpp"
#include "fgstdp/waveforms.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace fgstdp {

struct OutputOptions {
    std::filesystem::path dir = "out";
    bool plot = false;
    bool trace = false;
};

/// Everything a CLI run needs. Sections of the config file mirror the
/// member names; every key is optional and falls back to the defaults.
struct RunConfig {
    DeviceParams device = DeviceParams::defaults();
    WaveformConfig waveform;
    TripletAmplitudeParams amplitudes;
    /// Replaces the command's default sweep when its kind matches.
    std::optional<ProtocolSpec> protocol;
    OutputOptions output;
    /// The engine has no random state; kept so configs can say so.
    bool seedless = true;

    void validate() const;
};

/// Parses JSON text (// and /* */ comments allowed). Unknown keys are
/// rejected. Throws ValidationError.
RunConfig parse_config(std::string_view text);

/// Reads and parses a config file. Throws IoError if it cannot be read.
RunConfig load_config(const std::filesystem::path& path);

/// Serializes the device section (used to write calibration results).
std::string device_to_json(const DeviceParams& p);

/// Creates dir if needed and checks that a file can be written in it.
void ensure_writable_dir(const std::filesystem::path& dir);

/// Writes text to path, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace fgstdp
