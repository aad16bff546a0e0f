#pragma once

#include <filesystem>

#include "nsap/monitor.hpp"

namespace nsap {

/// Diagnostic series CSV. Header layout:
///   t,l2,l3,lp,l3p,linf,D_<p>...,grad_l2,tail_mass,l6,l9,
///   then per configured p: lp_<p>,l3p_<p>[,ibp_lhs_<p>,ibp_cross_<p>,rhs_dot_<p>]
/// The leading lp/l3p columns carry the primary (first-configured) p. Doubles
/// are printed with %.17g so rewriting a parsed file is byte-stable.
void write_series_csv(const std::filesystem::path& path, const DiagnosticSeries& series);
DiagnosticSeries read_series_csv(const std::filesystem::path& path);

std::string series_header(const DiagnosticSeries& series);

}  // namespace nsap
