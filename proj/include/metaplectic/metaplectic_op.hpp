#pragma once

#include <complex>

#include "metaplectic/symplectic.hpp"
#include "metaplectic/wavefunction.hpp"

namespace metaplectic {

/// i^{m - n/2} on the principal branch, i.e. exp(i pi (m - n/2) / 2).
Complex maslov_phase(int m, int n);

/// Quadratic Fourier integral operator
///   (mu f)(x) = (2 pi hbar)^{-n/2} i^{m-n/2} |det B|^{-1/2}
///               Int exp(i W(x,x') / hbar) f(x') d^n x'
/// attached to a free symplectic matrix.
struct FreeMetaplecticOp {
    QuadraticGeneratingFunction gen;
    SymplecticMatrix source;
    double hbar = 1.0;

    /// Canonical lift: Maslov index fixed by the parity convention
    /// (m even iff det B > 0), with `sheet` in {0, 1} selecting +/-.
    static FreeMetaplecticOp lift(const SymplecticMatrix& s, int sheet = 0, double hbar = 1.0,
                                  double tol_free = kDefaultFreeTol);

    /// Raw operator with an explicit Maslov index; no parity constraint.
    /// Use for exploring both sheets or non-canonical phase choices.
    static FreeMetaplecticOp with_maslov(const SymplecticMatrix& s, int m, double hbar = 1.0,
                                         double tol_free = kDefaultFreeTol);
};

enum class ApplyMethod {
    direct,  ///< trapezoid-weighted dense quadrature, O(N^{2n}); the oracle
    fast,    ///< chirp - scaled Fourier (chirp-Z) - chirp; n = 1 only
};

struct ApplyOptions {
    ApplyMethod method = ApplyMethod::fast;
    bool allow_aliasing = false;  ///< override the chirp Nyquist guard
};

/// Apply a free metaplectic operator to sampled data. Output lives on the
/// input grid. Both methods evaluate the same trapezoid-weighted sum; `fast`
/// does it in O(N log N) via a chirp-Z transform.
SampledWavefunction apply_free(const FreeMetaplecticOp& op, const SampledWavefunction& psi,
                               ApplyMethod method = ApplyMethod::fast,
                               bool allow_aliasing = false);

/// Apply the metaplectic lift of an arbitrary symplectic matrix. Free matrices
/// go through the kernel directly; otherwise S is split into two free factors
/// and the factors are applied in sequence. `m_choice` in {0, 1} flips the
/// overall sign (the two sheets of the double cover).
SampledWavefunction apply(const SymplecticMatrix& s, int m_choice, const SampledWavefunction& psi,
                          const ApplyOptions& options = {},
                          double tol_free = kDefaultFreeTol);

/// Closed-form image of the Gaussian exp(-a x^2 / (2 hbar)) under a 1-D free
/// operator: the output is c * exp(-b x^2 / (2 hbar)).
struct GaussianImage {
    Complex b;
    Complex c;
};

/// Exact complex Gaussian integral for the sw-kernel (n = 1, Re a > 0):
/// with gamma = a - iQ, b = L^2 / gamma - i P and
/// c = i^{m-1/2} |L|^{1/2} gamma^{-1/2}.
GaussianImage gaussian_oracle(const FreeMetaplecticOp& op, Complex a);

/// Best-fit scalar between the two routes mu(S1) mu(S2) psi and mu(S1 S2) psi;
/// requires S1, S2 and S1*S2 all free. Contract: |c| = 1 and c = +/-1 up to
/// discretization under the parity convention.
Complex compose_and_compare(const SymplecticMatrix& s1, const SymplecticMatrix& s2,
                            const SampledWavefunction& psi,
                            ApplyMethod method = ApplyMethod::fast,
                            double tol_free = kDefaultFreeTol);

}  // namespace metaplectic
