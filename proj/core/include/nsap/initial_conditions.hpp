#pragma once

#include <cstdint>
#include <string>

#include "nsap/field.hpp"

namespace nsap {

enum class IcKind {
    taylor_green,       // exact trigonometric vortex; amplitude is the literal coefficient
    random_solenoidal,  // E(k) ~ k^4 exp(-k^2/k0^2), random phases, RMS = amplitude
    localized_bump,     // compactly supported smooth curl field, RMS = amplitude
    critical_spectrum,  // deterministic |k|^{-(N-N/p)} borderline profile, RMS = amplitude
    shear,              // nonvanishing modulated shear; |u| >= amplitude everywhere
    from_checkpoint,    // load shared checkpoint format
};

struct IcParams {
    IcKind kind = IcKind::taylor_green;
    double amplitude = 1.0;
    double peak_k = 3.0;              // spectrum peak k0 in units of 2*pi/L
    std::uint64_t seed = 1;
    double bump_radius_frac = 0.25;   // bump support radius as fraction of L
    double critical_p = 4.0;          // p whose borderline profile critical_spectrum realizes
    std::string checkpoint_path;
};

IcKind ic_kind_from_string(const std::string& s);
std::string to_string(IcKind kind);

/// Builds the requested solenoidal mean-free initial field. Fixing the seed
/// fixes the field bit-for-bit.
VectorField make_initial(GridPtr grid, const IcParams& params);

}  // namespace nsap
