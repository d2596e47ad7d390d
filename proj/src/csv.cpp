#include "fgstdp/csv.hpp"

#include <cmath>
#include <fmt/format.h>
#include <iterator>

namespace fgstdp {

namespace {

// Fixed format so reruns are byte-identical.
std::string num(double v) {
    if (std::isnan(v)) return {};
    return fmt::format("{:.10g}", v);
}

std::string ms(double seconds) { return std::isnan(seconds) ? std::string{} : num(seconds * 1e3); }

} // namespace

std::string protocol_csv_header() {
    return "protocol,point_label,dt1_ms,dt2_ms,dt3_ms,T_ms,rho_hz,dw_fg_pct,dw_dstdp_pct,dw_tstdp_pct\n";
}

std::string protocol_csv_rows(ProtocolKind kind, std::span<const ProtocolRow> rows) {
    std::string out;
    for (const auto& r : rows) {
        const auto& pt = r.point;
        // Labels contain commas, so they are quoted.
        fmt::format_to(std::back_inserter(out), "{},\"{}\",{},{},{},{},{},{},{},{}\n",
                       to_string(kind), pt.label(kind), ms(pt.dt1), ms(pt.dt2), ms(pt.dt3),
                       ms(pt.T), num(pt.rho), num(r.dw_fg_pct), num(r.dw_dstdp_pct),
                       num(r.dw_tstdp_pct));
    }
    return out;
}

std::string trace_csv(std::span<const TraceSample> samples, bool full) {
    std::string out = full ? "t_s,v_g_V,v_tun_eff_V,v_d_V,v_fg_V,I_d_A,I_inj_A,I_tun_A\n"
                           : "t_s,v_g_V,v_tun_eff_V,v_d_V\n";
    auto it = std::back_inserter(out);
    for (const auto& s : samples) {
        fmt::format_to(it, "{},{},{},{}", num(s.t), num(s.v_g), num(s.v_tun_eff), num(s.v_d));
        if (full) {
            fmt::format_to(it, ",{},{},{},{}", num(s.v_fg), num(s.i_d), num(s.i_inj), num(s.i_tun));
        }
        out.push_back('\n');
    }
    return out;
}

std::string circuit_csv(std::span<const GeneratorComparison> rows) {
    std::string out = "dt2_ms,ideal_V,emulated_V,error_V\n";
    for (const auto& r : rows) {
        fmt::format_to(std::back_inserter(out), "{},{},{},{}\n", ms(r.dt2), num(r.ideal),
                       num(r.emulated), num(r.error));
    }
    return out;
}

} // namespace fgstdp
