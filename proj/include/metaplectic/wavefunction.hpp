#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "metaplectic/errors.hpp"

namespace metaplectic {

using Complex = std::complex<double>;

/// Uniform one-axis sampling grid: points x_j = x0 + j*dx, j = 0..count-1.
struct AxisGrid {
    double x0 = 0.0;
    double dx = 1.0;
    int count = 0;

    double point(int j) const { return x0 + j * dx; }
    double last() const { return x0 + (count - 1) * dx; }
    /// Largest |x| over the axis.
    double abs_max() const;

    bool operator==(const AxisGrid& other) const;
};

/// Product grid in up to two dimensions; axis 0 is the slowest index.
struct Grid {
    std::vector<AxisGrid> axes;

    int n() const { return static_cast<int>(axes.size()); }
    std::size_t size() const;
    /// Product of the axis steps (the quadrature cell volume).
    double cell_volume() const;
    double abs_max() const;

    bool operator==(const Grid& other) const;
};

/// Uniform grid over [lo, hi] with `count` points, both endpoints included.
Grid make_grid(double lo, double hi, int count);
Grid make_grid_2d(double lo, double hi, int count);

/// Complex samples of a wavefunction on a uniform grid, with the hbar they
/// were sampled for. Index layout is row-major in axis 0.
struct SampledWavefunction {
    Grid grid;
    Eigen::VectorXcd values;
    double hbar = 1.0;

    SampledWavefunction() = default;
    SampledWavefunction(Grid g, Eigen::VectorXcd v, double hb);

    int n() const { return grid.n(); }
    double l2_norm() const;
};

/// Hermitian inner product <a, b> = sum conj(a_j) b_j * cell volume.
Complex inner_product(const SampledWavefunction& a, const SampledWavefunction& b);

/// ||a - b||_2 on a shared grid.
double l2_distance(const SampledWavefunction& a, const SampledWavefunction& b);

/// a scaled to unit L^2 norm.
SampledWavefunction normalized(const SampledWavefunction& a);

/// Gaussian exp(-a x^2 / (2 hbar)) sampled on a 1-D grid (unnormalized; Re a > 0).
/// In two dimensions the same radial profile exp(-a |x|^2 / (2 hbar)) is used.
SampledWavefunction make_gaussian(const Grid& grid, Complex a, double hbar = 1.0);

}  // namespace metaplectic
