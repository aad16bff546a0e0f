#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace nsap {

/// Uniform periodic box [0,L)^dim sampled at n points per axis.
///
/// Wavenumbers follow the usual DFT wrap: axis index i maps to the integer
/// mode m = i for i <= n/2 and m = i - n otherwise, so m ranges over
/// {-n/2+1, ..., n/2} and the physical wavenumber is (2*pi/L)*m. The
/// quadrature weight of every grid point is exactly (L/n)^dim.
class Grid {
  public:
    Grid(int dim, int n, double box_length);

    int dim() const { return dim_; }
    int n() const { return n_; }
    double box_length() const { return box_length_; }

    std::size_t point_count() const { return point_count_; }
    double spacing() const { return box_length_ / n_; }
    double cell_volume() const { return cell_volume_; }
    double volume() const { return volume_; }
    /// 2*pi/L, the wavenumber spacing.
    double k_unit() const { return k_unit_; }
    int nyquist_index() const { return n_ / 2; }

    /// Largest integer mode kept by the 2/3-rule mask. Chosen as the largest
    /// m with 3m < n so that triple products of retained modes never alias
    /// onto the mean mode; for n not divisible by 3 this equals floor(n/3).
    int dealias_cutoff() const { return dealias_cutoff_; }

    /// Integer mode for axis index i (same map on every axis).
    int mode(int i) const { return modes_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& modes() const { return modes_; }
    /// Physical wavenumber k_unit * mode(i).
    double wavenumber(int i) const { return k1d_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& wavenumbers() const { return k1d_; }

    /// Grid coordinate of axis index i (same on every axis).
    double coord(int i) const { return spacing() * i; }

    bool compatible(const Grid& other) const {
        return dim_ == other.dim_ && n_ == other.n_ && box_length_ == other.box_length_;
    }

  private:
    int dim_;
    int n_;
    double box_length_;
    std::size_t point_count_;
    double cell_volume_;
    double volume_;
    double k_unit_;
    int dealias_cutoff_;
    std::vector<int> modes_;
    std::vector<double> k1d_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Validates arguments (dim in {2,3}, n even and >= 8, L > 0) and builds the
/// shared immutable grid object.
GridPtr make_grid(int dim, int n, double box_length);

}  // namespace nsap
