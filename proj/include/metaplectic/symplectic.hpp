#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "metaplectic/errors.hpp"

namespace metaplectic {

/// Default tolerance for symplecticity / symmetry validation.
inline constexpr double kDefaultSymTol = 1e-9;
/// Default tolerance below which an upper-right block determinant counts as singular.
inline constexpr double kDefaultFreeTol = 1e-6;

/// The standard symplectic form J = [[0, I_n], [-I_n, 0]] on R^{2n}.
Eigen::MatrixXd standard_symplectic_form(int n);

/// True iff ||S^T J S - J||_max <= tol. Throws on odd or non-square input.
bool is_symplectic(const Eigen::MatrixXd& s, double tol = kDefaultSymTol);

/// Real 2n x 2n matrix S with S^T J S = J, in block form [[A, B], [C, D]].
/// Validated at construction; immutable afterwards.
class SymplecticMatrix {
  public:
    explicit SymplecticMatrix(Eigen::MatrixXd entries, double tol = kDefaultSymTol);

    int dof() const { return n_; }
    int dim() const { return 2 * n_; }
    const Eigen::MatrixXd& matrix() const { return entries_; }

    Eigen::MatrixXd block_a() const { return entries_.topLeftCorner(n_, n_); }
    Eigen::MatrixXd block_b() const { return entries_.topRightCorner(n_, n_); }
    Eigen::MatrixXd block_c() const { return entries_.bottomLeftCorner(n_, n_); }
    Eigen::MatrixXd block_d() const { return entries_.bottomRightCorner(n_, n_); }

    double det_b() const { return entries_.topRightCorner(n_, n_).determinant(); }

    /// Inverse via the symplectic identity S^{-1} = -J S^T J (no factorization).
    SymplecticMatrix inverse() const;

    friend SymplecticMatrix operator*(const SymplecticMatrix& lhs, const SymplecticMatrix& rhs);

  private:
    int n_;
    Eigen::MatrixXd entries_;
};

/// Quadratic Hamiltonian H(z) = 1/2 z^T M z with z = (x, p) and M real symmetric.
class QuadraticHamiltonian {
  public:
    QuadraticHamiltonian(Eigen::MatrixXd m, double tol = kDefaultSymTol);

    int dof() const { return n_; }
    const Eigen::MatrixXd& matrix() const { return m_; }

    Eigen::MatrixXd block_xx() const { return m_.topLeftCorner(n_, n_); }
    Eigen::MatrixXd block_xp() const { return m_.topRightCorner(n_, n_); }
    Eigen::MatrixXd block_pp() const { return m_.bottomRightCorner(n_, n_); }

  private:
    int n_;
    Eigen::MatrixXd m_;
};

/// Coefficients of the quadratic form W(x, x') = 1/2 P x.x - L x.x' + 1/2 Q x'.x'
/// generating a free symplectic matrix, plus the Maslov index m (mod 4).
struct QuadraticGeneratingFunction {
    Eigen::MatrixXd p;  ///< D B^{-1}, symmetric
    Eigen::MatrixXd l;  ///< B^{-1}, invertible
    Eigen::MatrixXd q;  ///< B^{-1} A, symmetric
    int m = 0;          ///< Maslov index, reduced mod 4

    int dof() const { return static_cast<int>(l.rows()); }

    /// Rebuild the generated matrix: B = L^{-1}, A = L^{-1} Q, D = P L^{-1},
    /// C = P L^{-1} Q - L^T (the last forced by symplecticity).
    SymplecticMatrix to_matrix(double tol = kDefaultSymTol) const;
};

/// True iff |det B| > tol_free, i.e. S admits the quadratic-form kernel directly.
bool is_free(const SymplecticMatrix& s, double tol_free = kDefaultFreeTol);

/// A_t = exp(t J M), the linear Hamiltonian flow of H(z) = 1/2 z^T M z.
SymplecticMatrix hamiltonian_flow(const QuadraticHamiltonian& h, double t);

/// Rotation-type free symplectic matrix [[cos(a) I, sin(a) I], [-sin(a) I, cos(a) I]].
SymplecticMatrix fractional_rotation(int n, double alpha);

/// Two-free-factor decomposition returned by factor_free.
struct FreeFactorization {
    SymplecticMatrix first;   ///< S * F_alpha^{-1}
    SymplecticMatrix second;  ///< F_alpha
    double alpha;             ///< selected rotation angle
    double residual;          ///< ||first * second - S||_max
};

/// Split S into two free factors S = S1 * S2 with S2 a fractional rotation.
/// Scans 64 evenly spaced angles in (0, pi) and keeps the best-conditioned split.
FreeFactorization factor_free(const SymplecticMatrix& s, double tol_free = kDefaultFreeTol);

/// Extract (P, L, Q, m) from a free matrix; m must match the parity of det B
/// (even iff det B > 0). P and Q are symmetrized to remove roundoff skew.
QuadraticGeneratingFunction generating_function(const SymplecticMatrix& s, int m,
                                                double tol_free = kDefaultFreeTol);

/// Smallest Maslov index admissible for S under the parity convention (0 or 1).
int parity_minimal_maslov(const SymplecticMatrix& s);

/// exp(J M) for a seeded random symmetric M with entries in [-1, 1].
/// Deterministic per seed; always passes is_symplectic up to roundoff.
SymplecticMatrix random_symplectic(int n, std::uint64_t seed);

/// Seeded random symmetric matrix with entries in [-1, 1] (row-major upper fill).
Eigen::MatrixXd random_symmetric(int dim, std::uint64_t seed);

}  // namespace metaplectic
