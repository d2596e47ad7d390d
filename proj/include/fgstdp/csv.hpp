#pragma once

#include "fgstdp/circuit.hpp"
#include "fgstdp/engine.hpp"
#include "fgstdp/protocols.hpp"

#include <span>
#include <string>

namespace fgstdp {

/// protocol,point_label,dt1_ms,dt2_ms,dt3_ms,T_ms,rho_hz,dw_fg_pct,dw_dstdp_pct,dw_tstdp_pct
/// Unused timing fields are left empty.
std::string protocol_csv_header();
std::string protocol_csv_rows(ProtocolKind kind, std::span<const ProtocolRow> rows);

/// t_s,v_g_V,v_tun_eff_V,v_d_V, followed by v_fg_V,I_d_A,I_inj_A,I_tun_A
/// when full is set.
std::string trace_csv(std::span<const TraceSample> samples, bool full = true);

/// dt2_ms,ideal_V,emulated_V,error_V
std::string circuit_csv(std::span<const GeneratorComparison> rows);

} // namespace fgstdp
