#include "nsap/rng.hpp"

#include <cmath>

namespace nsap {

std::pair<double, double> CounterRng::gaussian_pair(std::uint64_t counter) const {
    // u1 in (0,1] to keep the log finite
    const double u1 = 1.0 - uniform(counter);
    const double u2 = uniform(counter + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * M_PI * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace nsap
