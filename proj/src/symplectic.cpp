#include "metaplectic/symplectic.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace metaplectic {

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

void require_even_square(const Eigen::MatrixXd& s) {
    if (s.rows() == 0 || s.rows() != s.cols() || s.rows() % 2 != 0) {
        std::ostringstream msg;
        msg << "expected a nonempty square matrix of even dimension, got " << s.rows() << "x"
            << s.cols();
        throw InvalidDimensionError(msg.str());
    }
}

}  // namespace

Eigen::MatrixXd standard_symplectic_form(int n) {
    if (n < 1) {
        throw InvalidDimensionError("standard_symplectic_form: n must be >= 1");
    }
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    j.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    return j;
}

bool is_symplectic(const Eigen::MatrixXd& s, double tol) {
    require_even_square(s);
    const int n = static_cast<int>(s.rows()) / 2;
    const Eigen::MatrixXd j = standard_symplectic_form(n);
    return max_abs(s.transpose() * j * s - j) <= tol;
}

SymplecticMatrix::SymplecticMatrix(Eigen::MatrixXd entries, double tol)
    : n_(0), entries_(std::move(entries)) {
    require_even_square(entries_);
    n_ = static_cast<int>(entries_.rows()) / 2;
    const Eigen::MatrixXd j = standard_symplectic_form(n_);
    const double defect = max_abs(entries_.transpose() * j * entries_ - j);
    if (defect > tol) {
        std::ostringstream msg;
        msg << "matrix is not symplectic: ||S^T J S - J||_max = " << defect << " > " << tol;
        throw InvalidInputError(msg.str());
    }
}

SymplecticMatrix SymplecticMatrix::inverse() const {
    const Eigen::MatrixXd j = standard_symplectic_form(n_);
    return SymplecticMatrix(-j * entries_.transpose() * j);
}

SymplecticMatrix operator*(const SymplecticMatrix& lhs, const SymplecticMatrix& rhs) {
    if (lhs.dof() != rhs.dof()) {
        throw InvalidDimensionError("symplectic product: dimension mismatch");
    }
    // Products of symplectic matrices drift only by roundoff; allow for it.
    const double scale = max_abs(lhs.entries_) * max_abs(rhs.entries_);
    return SymplecticMatrix(lhs.entries_ * rhs.entries_,
                            kDefaultSymTol * std::max(1.0, scale * scale));
}

QuadraticHamiltonian::QuadraticHamiltonian(Eigen::MatrixXd m, double tol)
    : n_(0), m_(std::move(m)) {
    require_even_square(m_);
    n_ = static_cast<int>(m_.rows()) / 2;
    const double skew = max_abs(m_ - m_.transpose());
    if (skew > tol) {
        std::ostringstream msg;
        msg << "Hamiltonian matrix must be symmetric: ||M - M^T||_max = " << skew;
        throw InvalidInputError(msg.str());
    }
    m_ = 0.5 * (m_ + m_.transpose().eval());
}

SymplecticMatrix QuadraticGeneratingFunction::to_matrix(double tol) const {
    const int n = dof();
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(l);
    const Eigen::MatrixXd b = lu.inverse();
    Eigen::MatrixXd s(2 * n, 2 * n);
    s.topLeftCorner(n, n) = b * q;
    s.topRightCorner(n, n) = b;
    s.bottomLeftCorner(n, n) = p * b * q - l.transpose();
    s.bottomRightCorner(n, n) = p * b;
    return SymplecticMatrix(std::move(s), tol);
}

bool is_free(const SymplecticMatrix& s, double tol_free) {
    return std::abs(s.det_b()) > tol_free;
}

SymplecticMatrix hamiltonian_flow(const QuadraticHamiltonian& h, double t) {
    const Eigen::MatrixXd j = standard_symplectic_form(h.dof());
    const Eigen::MatrixXd generator = t * (j * h.matrix());
    return SymplecticMatrix(generator.exp());
}

SymplecticMatrix fractional_rotation(int n, double alpha) {
    if (n < 1) {
        throw InvalidDimensionError("fractional_rotation: n must be >= 1");
    }
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd f(2 * n, 2 * n);
    f.topLeftCorner(n, n) = std::cos(alpha) * eye;
    f.topRightCorner(n, n) = std::sin(alpha) * eye;
    f.bottomLeftCorner(n, n) = -std::sin(alpha) * eye;
    f.bottomRightCorner(n, n) = std::cos(alpha) * eye;
    return SymplecticMatrix(std::move(f));
}

FreeFactorization factor_free(const SymplecticMatrix& s, double tol_free) {
    constexpr int kAngleCount = 64;
    const int n = s.dof();
    const Eigen::MatrixXd a = s.block_a();
    const Eigen::MatrixXd b = s.block_b();

    // det(B cos a - A sin a) is a nonzero trigonometric polynomial, so it can
    // vanish at only finitely many angles; pick the best-conditioned split.
    double best_alpha = 0.0;
    double best_score = -1.0;
    for (int k = 1; k <= kAngleCount; ++k) {
        const double alpha = std::numbers::pi * k / (kAngleCount + 1);
        const Eigen::MatrixXd b1 = b * std::cos(alpha) - a * std::sin(alpha);
        const double score = std::min(std::abs(b1.determinant()), std::sin(alpha));
        if (score > best_score) {
            best_score = score;
            best_alpha = alpha;
        }
    }

    const SymplecticMatrix rot = fractional_rotation(n, best_alpha);
    const SymplecticMatrix first = s * rot.inverse();
    if (!is_free(first, tol_free) || !is_free(rot, tol_free)) {
        std::ostringstream msg;
        msg << "factor_free: no admissible angle; best alpha = " << best_alpha
            << ", |det B1| = " << std::abs(first.det_b()) << ", tol_free = " << tol_free;
        throw FactorizationError(msg.str());
    }
    const double residual =
        (first.matrix() * rot.matrix() - s.matrix()).cwiseAbs().maxCoeff();
    return FreeFactorization{first, rot, best_alpha, residual};
}

QuadraticGeneratingFunction generating_function(const SymplecticMatrix& s, int m,
                                                double tol_free) {
    if (!is_free(s, tol_free)) {
        std::ostringstream msg;
        msg << "generating_function requires a free matrix; |det B| = " << std::abs(s.det_b());
        throw NotFreeError(msg.str());
    }
    const int reduced = ((m % 4) + 4) % 4;
    const bool want_even = s.det_b() > 0.0;
    if ((reduced % 2 == 0) != want_even) {
        std::ostringstream msg;
        msg << "Maslov index m = " << reduced << " violates the parity convention (det B = "
            << s.det_b() << " wants " << (want_even ? "even" : "odd") << " m)";
        throw MaslovParityError(msg.str());
    }

    const int n = s.dof();
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(s.block_b());
    const Eigen::MatrixXd l = lu.inverse();
    Eigen::MatrixXd p = s.block_d() * l;
    Eigen::MatrixXd q = l * s.block_a();
    p = 0.5 * (p + p.transpose().eval());
    q = 0.5 * (q + q.transpose().eval());
    return QuadraticGeneratingFunction{std::move(p), l, std::move(q), reduced};
}

int parity_minimal_maslov(const SymplecticMatrix& s) { return s.det_b() > 0.0 ? 0 : 1; }

Eigen::MatrixXd random_symmetric(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto draw = [&rng]() {
        // Top 53 bits -> [0, 1); affine map to [-1, 1]. Bit-stable across
        // standard libraries, unlike uniform_real_distribution.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return 2.0 * u - 1.0;
    };
    Eigen::MatrixXd m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            const double v = draw();
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return m;
}

SymplecticMatrix random_symplectic(int n, std::uint64_t seed) {
    if (n < 1) {
        throw InvalidDimensionError("random_symplectic: n must be >= 1");
    }
    return hamiltonian_flow(QuadraticHamiltonian(random_symmetric(2 * n, seed)), 1.0);
}

}  // namespace metaplectic
