#include "nsap/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nsap {

Grid::Grid(int dim, int n, double box_length)
    : dim_(dim), n_(n), box_length_(box_length) {
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("grid: dim must be 2 or 3, got " + std::to_string(dim));
    if (n < 8 || n % 2 != 0)
        throw std::invalid_argument("grid: n must be even and >= 8, got " + std::to_string(n));
    if (!(box_length > 0.0) || !std::isfinite(box_length))
        throw std::invalid_argument("grid: box_length must be positive and finite");

    point_count_ = 1;
    for (int d = 0; d < dim; ++d) point_count_ *= static_cast<std::size_t>(n);
    cell_volume_ = std::pow(box_length / n, dim);
    volume_ = std::pow(box_length, dim);
    k_unit_ = 2.0 * M_PI / box_length;

    dealias_cutoff_ = (n - 1) / 3;  // largest m with 3m < n

    modes_.resize(static_cast<std::size_t>(n));
    k1d_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int m = (i <= n / 2) ? i : i - n;
        modes_[static_cast<std::size_t>(i)] = m;
        k1d_[static_cast<std::size_t>(i)] = k_unit_ * m;
    }
}

GridPtr make_grid(int dim, int n, double box_length) {
    return std::make_shared<const Grid>(dim, n, box_length);
}

}  // namespace nsap
