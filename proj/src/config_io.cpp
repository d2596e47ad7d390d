#include "fgstdp/config_io.hpp"

#include "fgstdp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>

namespace fgstdp {

using nlohmann::json;

namespace {

/// Reads the keys of one JSON object into fields, rejecting unknown ones.
class Section {
public:
    Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
        if (!j_.is_object()) throw ValidationError(fmt::format("config: '{}' must be an object", name_));
    }

    Section& num(const char* key, double& field) {
        seen_.push_back(key);
        if (auto it = j_.find(key); it != j_.end()) {
            if (!it->is_number()) {
                throw ValidationError(fmt::format("config: {}.{} must be a number", name_, key));
            }
            field = it->get<double>();
        }
        return *this;
    }

    Section& integer(const char* key, int& field) {
        seen_.push_back(key);
        if (auto it = j_.find(key); it != j_.end()) {
            if (!it->is_number_integer()) {
                throw ValidationError(fmt::format("config: {}.{} must be an integer", name_, key));
            }
            field = it->get<int>();
        }
        return *this;
    }

    Section& boolean(const char* key, bool& field) {
        seen_.push_back(key);
        if (auto it = j_.find(key); it != j_.end()) {
            if (!it->is_boolean()) {
                throw ValidationError(fmt::format("config: {}.{} must be true or false", name_, key));
            }
            field = it->get<bool>();
        }
        return *this;
    }

    Section& str(const char* key, std::optional<std::string>& field) {
        seen_.push_back(key);
        if (auto it = j_.find(key); it != j_.end()) {
            if (!it->is_string()) {
                throw ValidationError(fmt::format("config: {}.{} must be a string", name_, key));
            }
            field = it->get<std::string>();
        }
        return *this;
    }

    const json* sub(const char* key) {
        seen_.push_back(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
                throw ValidationError(fmt::format("config: unknown key '{}' in '{}'", key, name_));
            }
        }
    }

private:
    const json& j_;
    std::string name_;
    std::vector<std::string> seen_;
};

void read_device(const json& j, DeviceParams& p) {
    Section s(j, "device");
    s.num("I_s0", p.I_s0)
        .num("kappa", p.kappa)
        .num("U_T", p.U_T)
        .num("I_inj0", p.I_inj0)
        .num("V_inj", p.V_inj)
        .num("I_tun0", p.I_tun0)
        .num("V_ox", p.V_ox)
        .num("C_T", p.C_T)
        .num("C_g", p.C_g)
        .num("C_tun", p.C_tun)
        .num("V_dd", p.V_dd)
        .num("V_fg_rest", p.V_fg_rest)
        .num("exponent_cap", p.exponent_cap);
    // alpha is derived; a stated value must agree with U_T and V_inj.
    double alpha = std::numeric_limits<double>::quiet_NaN();
    s.num("alpha", alpha);
    s.finish();
    p.refresh_alpha();
    if (!std::isnan(alpha) && std::abs(alpha - p.alpha) > 1e-12) {
        throw ValidationError("config: device.alpha must equal 1 - U_T/V_inj");
    }
}

void read_waveform(const json& j, WaveformConfig& c) {
    Section s(j, "waveform");
    std::optional<std::string> mode;
    s.num("V_g_init", c.V_g_init)
        .num("V_g_min", c.V_g_min)
        .num("T_g", c.T_g)
        .num("t_fall_gate", c.t_fall_gate)
        .num("V_tun_init", c.V_tun_init)
        .num("V_tun_max", c.V_tun_max)
        .num("T_tun", c.T_tun)
        .num("T_tun_delay", c.T_tun_delay)
        .num("T_tun_pulse", c.T_tun_pulse)
        .num("V_d_init", c.V_d_init)
        .num("V_d_min", c.V_d_min)
        .num("T_d", c.T_d)
        .str("drain_mode", mode);
    s.finish();
    if (mode) c.drain_mode = drain_mode_from_string(*mode);
}

void read_amplitudes(const json& j, TripletAmplitudeParams& a) {
    Section s(j, "amplitudes");
    s.num("A2_plus", a.A2_plus)
        .num("A3_plus", a.A3_plus)
        .num("tau_y", a.tau_y)
        .num("V_inj", a.V_inj)
        .num("r", a.r)
        .num("delta_vd_max", a.delta_vd_max);
    s.finish();
}

ProtocolSpec read_protocol(const json& j) {
    Section s(j, "protocol");
    std::optional<std::string> kind;
    s.str("kind", kind);
    if (!kind) throw ValidationError("config: protocol.kind is required");
    ProtocolSpec spec;
    spec.kind = protocol_kind_from_string(*kind);
    spec.reps = spec.kind == ProtocolKind::window ? 1 : spec.reps;
    spec.compression_r = spec.kind == ProtocolKind::window ? 1.0 : spec.compression_r;
    s.integer("reps", spec.reps).num("rep_interval", spec.rep_interval).num("r", spec.compression_r);
    const json* pts = s.sub("points");
    s.finish();
    if (!pts || !pts->is_array()) throw ValidationError("config: protocol.points must be an array");
    for (std::size_t i = 0; i < pts->size(); ++i) {
        ProtocolPoint pt;
        Section ps((*pts)[i], fmt::format("protocol.points[{}]", i));
        ps.num("dt1", pt.dt1).num("dt2", pt.dt2).num("dt3", pt.dt3).num("T", pt.T).num("rho", pt.rho);
        ps.finish();
        spec.points.push_back(pt);
    }
    spec.validate();
    return spec;
}

} // namespace

void RunConfig::validate() const {
    device.validate();
    waveform.validate();
    amplitudes.validate();
    if (protocol) protocol->validate();
    if (output.dir.empty()) throw ValidationError("config: output.dir must not be empty");
}

RunConfig parse_config(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ValidationError(fmt::format("config: {}", e.what()));
    }
    RunConfig cfg;
    Section top(j, "config");
    if (const json* d = top.sub("device")) read_device(*d, cfg.device);
    if (const json* w = top.sub("waveform")) read_waveform(*w, cfg.waveform);
    if (const json* a = top.sub("amplitudes")) read_amplitudes(*a, cfg.amplitudes);
    if (const json* p = top.sub("protocol")) cfg.protocol = read_protocol(*p);
    if (const json* o = top.sub("output")) {
        Section s(*o, "output");
        std::optional<std::string> dir;
        s.str("dir", dir).boolean("plot", cfg.output.plot).boolean("trace", cfg.output.trace);
        s.finish();
        if (dir) cfg.output.dir = *dir;
    }
    top.boolean("seedless", cfg.seedless);
    top.finish();
    if (!cfg.seedless) throw ValidationError("config: the engine is deterministic; seedless must be true");
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot read config '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string device_to_json(const DeviceParams& p) {
    json d = json::object();
    d["I_s0"] = p.I_s0;
    d["kappa"] = p.kappa;
    d["U_T"] = p.U_T;
    d["I_inj0"] = p.I_inj0;
    d["V_inj"] = p.V_inj;
    d["I_tun0"] = p.I_tun0;
    d["V_ox"] = p.V_ox;
    d["C_T"] = p.C_T;
    d["C_g"] = p.C_g;
    d["C_tun"] = p.C_tun;
    d["V_dd"] = p.V_dd;
    d["V_fg_rest"] = p.V_fg_rest;
    d["exponent_cap"] = p.exponent_cap;
    json top;
    top["device"] = d;
    return top.dump(2) + "\n";
}

void ensure_writable_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError(fmt::format("cannot create output directory '{}'", dir.string()));
    }
    const auto probe = dir / ".write_probe";
    {
        std::ofstream out(probe);
        if (!out) throw IoError(fmt::format("output directory '{}' is not writable", dir.string()));
    }
    std::filesystem::remove(probe, ec);
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
}

} // namespace fgstdp
