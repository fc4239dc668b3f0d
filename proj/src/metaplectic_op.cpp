#include "metaplectic/metaplectic_op.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "fft_internal.hpp"

namespace metaplectic {

namespace {

constexpr double kPi = std::numbers::pi;

double inf_norm(const Eigen::MatrixXd& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

/// Trapezoid weight along one axis: 1/2 at the ends, 1 in the interior.
double trapezoid_weight(int j, int count) { return (j == 0 || j == count - 1) ? 0.5 : 1.0; }

void check_hbar(const FreeMetaplecticOp& op, const SampledWavefunction& psi) {
    if (op.hbar != psi.hbar) {
        std::ostringstream msg;
        msg << "hbar mismatch: operator has " << op.hbar << ", wavefunction has " << psi.hbar;
        throw InvalidInputError(msg.str());
    }
}

void check_aliasing(const FreeMetaplecticOp& op, const SampledWavefunction& psi,
                    bool allow_aliasing) {
    double dx_min = psi.grid.axes[0].dx;
    for (const auto& axis : psi.grid.axes) dx_min = std::min(dx_min, axis.dx);
    const double x_max = psi.grid.abs_max();
    const double chirp_rate = inf_norm(op.gen.p) + inf_norm(op.gen.l);
    const double bound = kPi * op.hbar / dx_min;
    if (chirp_rate * x_max > bound && !allow_aliasing) {
        std::ostringstream msg;
        msg << "aliasing risk: (|P| + |L|) * x_max = " << chirp_rate * x_max
            << " exceeds pi*hbar/dx = " << bound
            << "; refine the grid or pass allow_aliasing to override";
        throw AliasingRiskError(msg.str());
    }
}

Complex overall_prefactor(const FreeMetaplecticOp& op) {
    const int n = op.gen.dof();
    // |det B|^{-1/2} = |det L|^{+1/2} since L = B^{-1}.
    const double det_l = op.gen.l.determinant();
    return std::pow(2.0 * kPi * op.hbar, -0.5 * n) * maslov_phase(op.gen.m, n) *
           std::sqrt(std::abs(det_l));
}

SampledWavefunction apply_free_fast_1d(const FreeMetaplecticOp& op,
                                       const SampledWavefunction& psi) {
    const AxisGrid& ax = psi.grid.axes[0];
    const double hbar = op.hbar;
    const double p = op.gen.p(0, 0);
    const double l = op.gen.l(0, 0);
    const double q = op.gen.q(0, 0);

    // Kernel splitting over x_k x_j = x0 x_j + k dx x0 + k j dx^2: the j- and
    // k-linear parts become chirp multiplies, the bilinear part a chirp-Z sum.
    Eigen::VectorXcd pre(ax.count);
    for (int j = 0; j < ax.count; ++j) {
        const double x = ax.point(j);
        const double phase = (0.5 * q * x * x - l * ax.x0 * x) / hbar;
        pre[j] = psi.values[j] * trapezoid_weight(j, ax.count) * ax.dx * std::polar(1.0, phase);
    }

    const double theta = l * ax.dx * ax.dx / hbar;
    Eigen::VectorXcd sums = detail::quadratic_phase_sum(pre, theta);

    const Complex c0 = overall_prefactor(op);
    Eigen::VectorXcd out(ax.count);
    for (int k = 0; k < ax.count; ++k) {
        const double x = ax.point(k);
        const double phase = 0.5 * p * x * x / hbar - l * ax.dx * ax.x0 * k / hbar;
        out[k] = c0 * std::polar(1.0, phase) * sums[k];
    }
    return SampledWavefunction(psi.grid, std::move(out), psi.hbar);
}

SampledWavefunction apply_free_direct(const FreeMetaplecticOp& op,
                                      const SampledWavefunction& psi) {
    const int n = psi.n();
    const double hbar = op.hbar;
    const std::size_t total = psi.grid.size();

    // Grid points as coordinate vectors and per-point quadrature weights.
    std::vector<Eigen::VectorXd> points(total);
    Eigen::VectorXd weights(total);
    if (n == 1) {
        const AxisGrid& ax = psi.grid.axes[0];
        for (int j = 0; j < ax.count; ++j) {
            points[j] = Eigen::VectorXd::Constant(1, ax.point(j));
            weights[j] = trapezoid_weight(j, ax.count);
        }
    } else {
        const AxisGrid& ax0 = psi.grid.axes[0];
        const AxisGrid& ax1 = psi.grid.axes[1];
        for (int j0 = 0; j0 < ax0.count; ++j0) {
            for (int j1 = 0; j1 < ax1.count; ++j1) {
                const std::size_t idx = static_cast<std::size_t>(j0) * ax1.count + j1;
                Eigen::VectorXd x(2);
                x << ax0.point(j0), ax1.point(j1);
                points[idx] = std::move(x);
                weights[idx] =
                    trapezoid_weight(j0, ax0.count) * trapezoid_weight(j1, ax1.count);
            }
        }
    }

    const double cell = psi.grid.cell_volume();
    Eigen::VectorXcd source(total);
    for (std::size_t j = 0; j < total; ++j) {
        const double qx = points[j].dot(op.gen.q * points[j]);
        source[j] =
            psi.values[static_cast<Eigen::Index>(j)] * weights[j] * cell *
            std::polar(1.0, 0.5 * qx / hbar);
    }

    const Complex c0 = overall_prefactor(op);
    Eigen::VectorXcd out(total);
    for (std::size_t k = 0; k < total; ++k) {
        const Eigen::VectorXd lx = op.gen.l * points[k];
        Complex acc(0.0, 0.0);
        for (std::size_t j = 0; j < total; ++j) {
            acc += std::polar(1.0, -lx.dot(points[j]) / hbar) * source[j];
        }
        const double px = points[k].dot(op.gen.p * points[k]);
        out[k] = c0 * std::polar(1.0, 0.5 * px / hbar) * acc;
    }
    return SampledWavefunction(psi.grid, std::move(out), psi.hbar);
}

}  // namespace

Complex maslov_phase(int m, int n) {
    return std::polar(1.0, 0.5 * kPi * (m - 0.5 * n));
}

FreeMetaplecticOp FreeMetaplecticOp::lift(const SymplecticMatrix& s, int sheet, double hbar,
                                          double tol_free) {
    const int m = (parity_minimal_maslov(s) + 2 * (((sheet % 2) + 2) % 2)) % 4;
    return FreeMetaplecticOp{generating_function(s, m, tol_free), s, hbar};
}

FreeMetaplecticOp FreeMetaplecticOp::with_maslov(const SymplecticMatrix& s, int m, double hbar,
                                                 double tol_free) {
    const int canonical = parity_minimal_maslov(s);
    QuadraticGeneratingFunction gen = generating_function(s, canonical, tol_free);
    gen.m = ((m % 4) + 4) % 4;
    return FreeMetaplecticOp{std::move(gen), s, hbar};
}

SampledWavefunction apply_free(const FreeMetaplecticOp& op, const SampledWavefunction& psi,
                               ApplyMethod method, bool allow_aliasing) {
    check_hbar(op, psi);
    if (op.gen.dof() != psi.n()) {
        throw InvalidDimensionError("apply_free: operator and wavefunction dimensions differ");
    }
    check_aliasing(op, psi, allow_aliasing);
    if (method == ApplyMethod::fast) {
        if (psi.n() != 1) {
            throw InvalidInputError("apply_free: the fast method supports n = 1 only");
        }
        return apply_free_fast_1d(op, psi);
    }
    return apply_free_direct(op, psi);
}

SampledWavefunction apply(const SymplecticMatrix& s, int m_choice, const SampledWavefunction& psi,
                          const ApplyOptions& options, double tol_free) {
    const ApplyMethod method = psi.n() == 1 ? options.method : ApplyMethod::direct;
    if (is_free(s, tol_free)) {
        const auto op = FreeMetaplecticOp::lift(s, m_choice, psi.hbar, tol_free);
        return apply_free(op, psi, method, options.allow_aliasing);
    }
    const FreeFactorization split = factor_free(s, tol_free);
    const auto op2 = FreeMetaplecticOp::lift(split.second, 0, psi.hbar, tol_free);
    const auto op1 = FreeMetaplecticOp::lift(split.first, m_choice, psi.hbar, tol_free);
    SampledWavefunction mid = apply_free(op2, psi, method, options.allow_aliasing);
    return apply_free(op1, mid, method, options.allow_aliasing);
}

GaussianImage gaussian_oracle(const FreeMetaplecticOp& op, Complex a) {
    if (op.gen.dof() != 1) {
        throw InvalidInputError("gaussian_oracle supports n = 1 only");
    }
    if (!(a.real() > 0.0)) {
        throw DivergentGaussianError("gaussian_oracle: Re a must be positive");
    }
    const double p = op.gen.p(0, 0);
    const double l = op.gen.l(0, 0);
    const double q = op.gen.q(0, 0);
    const Complex gamma = a - Complex(0.0, 1.0) * q;
    const Complex b = l * l / gamma - Complex(0.0, 1.0) * p;
    const Complex c =
        maslov_phase(op.gen.m, 1) * std::sqrt(std::abs(l)) / std::sqrt(gamma);
    return GaussianImage{b, c};
}

Complex compose_and_compare(const SymplecticMatrix& s1, const SymplecticMatrix& s2,
                            const SampledWavefunction& psi, ApplyMethod method,
                            double tol_free) {
    const SymplecticMatrix product = s1 * s2;
    if (!is_free(s1, tol_free) || !is_free(s2, tol_free) || !is_free(product, tol_free)) {
        throw NotFreeError("compose_and_compare requires S1, S2 and S1*S2 all free");
    }
    const double hbar = psi.hbar;
    const auto op1 = FreeMetaplecticOp::lift(s1, 0, hbar, tol_free);
    const auto op2 = FreeMetaplecticOp::lift(s2, 0, hbar, tol_free);
    const auto op12 = FreeMetaplecticOp::lift(product, 0, hbar, tol_free);

    const SampledWavefunction chained = apply_free(op1, apply_free(op2, psi, method), method);
    const SampledWavefunction direct = apply_free(op12, psi, method);

    const double denom = direct.values.squaredNorm() * direct.grid.cell_volume();
    if (denom == 0.0) {
        throw InvalidInputError("compose_and_compare: direct route produced the zero function");
    }
    return inner_product(direct, chained) / denom;
}

}  // namespace metaplectic
