#include "metaplectic/wavefunction.hpp"

#include <cmath>
#include <sstream>

namespace metaplectic {

namespace {

void validate_axis(const AxisGrid& axis) {
    if (axis.count < 8) {
        throw InvalidInputError("grid needs at least 8 points per axis");
    }
    if (!(axis.dx > 0.0)) {
        throw InvalidInputError("grid step must be positive");
    }
}

}  // namespace

double AxisGrid::abs_max() const { return std::max(std::abs(x0), std::abs(last())); }

bool AxisGrid::operator==(const AxisGrid& other) const {
    return x0 == other.x0 && dx == other.dx && count == other.count;
}

std::size_t Grid::size() const {
    std::size_t total = 1;
    for (const auto& axis : axes) total *= static_cast<std::size_t>(axis.count);
    return total;
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (const auto& axis : axes) v *= axis.dx;
    return v;
}

double Grid::abs_max() const {
    double m = 0.0;
    for (const auto& axis : axes) m = std::max(m, axis.abs_max());
    return m;
}

bool Grid::operator==(const Grid& other) const { return axes == other.axes; }

Grid make_grid(double lo, double hi, int count) {
    if (count < 2 || !(hi > lo)) {
        throw InvalidInputError("make_grid: need hi > lo and count >= 2");
    }
    return Grid{{AxisGrid{lo, (hi - lo) / (count - 1), count}}};
}

Grid make_grid_2d(double lo, double hi, int count) {
    Grid g = make_grid(lo, hi, count);
    g.axes.push_back(g.axes[0]);
    return g;
}

SampledWavefunction::SampledWavefunction(Grid g, Eigen::VectorXcd v, double hb)
    : grid(std::move(g)), values(std::move(v)), hbar(hb) {
    if (grid.n() < 1 || grid.n() > 2) {
        throw InvalidInputError("wavefunctions support 1 or 2 dimensions");
    }
    for (const auto& axis : grid.axes) validate_axis(axis);
    if (!(hbar > 0.0)) {
        throw InvalidInputError("hbar must be positive");
    }
    if (static_cast<std::size_t>(values.size()) != grid.size()) {
        std::ostringstream msg;
        msg << "value count " << values.size() << " does not match grid size " << grid.size();
        throw InvalidInputError(msg.str());
    }
    if (!values.allFinite()) {
        throw InvalidInputError("wavefunction samples must be finite");
    }
}

double SampledWavefunction::l2_norm() const {
    return std::sqrt(values.squaredNorm() * grid.cell_volume());
}

Complex inner_product(const SampledWavefunction& a, const SampledWavefunction& b) {
    if (!(a.grid == b.grid)) {
        throw InvalidComparisonError("inner_product: grids differ");
    }
    return a.values.dot(b.values) * a.grid.cell_volume();
}

double l2_distance(const SampledWavefunction& a, const SampledWavefunction& b) {
    if (!(a.grid == b.grid)) {
        throw InvalidComparisonError("l2_distance: grids differ");
    }
    return std::sqrt((a.values - b.values).squaredNorm() * a.grid.cell_volume());
}

SampledWavefunction normalized(const SampledWavefunction& a) {
    const double norm = a.l2_norm();
    if (norm == 0.0) {
        throw InvalidInputError("cannot normalize the zero function");
    }
    return SampledWavefunction(a.grid, a.values / norm, a.hbar);
}

SampledWavefunction make_gaussian(const Grid& grid, Complex a, double hbar) {
    if (!(a.real() > 0.0)) {
        throw DivergentGaussianError("make_gaussian: Re a must be positive");
    }
    Eigen::VectorXcd values(grid.size());
    if (grid.n() == 1) {
        const auto& ax = grid.axes[0];
        for (int j = 0; j < ax.count; ++j) {
            const double x = ax.point(j);
            values[j] = std::exp(-a * (x * x) / (2.0 * hbar));
        }
    } else {
        const auto& ax0 = grid.axes[0];
        const auto& ax1 = grid.axes[1];
        for (int j0 = 0; j0 < ax0.count; ++j0) {
            const double x0 = ax0.point(j0);
            for (int j1 = 0; j1 < ax1.count; ++j1) {
                const double x1 = ax1.point(j1);
                values[static_cast<Eigen::Index>(j0) * ax1.count + j1] =
                    std::exp(-a * (x0 * x0 + x1 * x1) / (2.0 * hbar));
            }
        }
    }
    return SampledWavefunction(grid, std::move(values), hbar);
}

}  // namespace metaplectic
