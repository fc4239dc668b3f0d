#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "metaplectic/metaplectic_op.hpp"
#include "metaplectic/schrodinger.hpp"
#include "metaplectic/symplectic.hpp"
#include "metaplectic/wavefunction.hpp"

namespace metaplectic {

/// Discretization of the windowed-Fourier lattice: a unit-L^2 Gaussian window,
/// shift step `hop` (the lattice is hop * Z intersected with the grid span) and
/// `freq_count` uniform frequency bins covering the grid's Nyquist band.
struct AmalgamLattice {
    double window_width = 1.0;
    double hop = 0.0;       ///< 0 means "4 grid steps" at evaluation time
    int freq_count = 0;     ///< 0 means "N / 4" at evaluation time

    double hop_for(const Grid& grid) const;
    int freq_count_for(const Grid& grid) const;
};

/// Mixed-norm specification: inner frequency l^p, outer shift l^q.
struct AmalgamNormSpec {
    double p = 2.0;  ///< in [1, inf]
    double q = 2.0;  ///< in [1, inf]
    AmalgamLattice lattice;
};

/// Sampled short-time Fourier transform V_g psi on the shift/frequency lattice.
struct StftResult {
    Eigen::MatrixXcd values;       ///< rows: shifts, cols: frequency bins
    std::vector<double> shifts;    ///< window centers (multiples of hop)
    std::vector<double> omegas;    ///< frequency bin values of omega
    double hop = 0.0;              ///< shift lattice spacing
    double domega = 0.0;           ///< frequency bin spacing
    double hbar = 1.0;
};

/// V_g psi(x, w) = Int psi(x') g(x' - x) exp(-i w x' / hbar) dx' sampled on the
/// lattice; computed by a folded windowed FFT per shift. 1-D only.
StftResult stft(const SampledWavefunction& psi, const AmalgamLattice& lattice);

/// Mixed norm ( Sum_x ( Sum_w |V|^p dw )^{q/p} dx )^{1/q} with exact max
/// reductions at p or q = inf.
double amalgam_norm(const SampledWavefunction& psi, const AmalgamNormSpec& spec);

/// Same norm from a precomputed STFT (so one transform can serve many (p,q)).
double amalgam_norm_from_stft(const StftResult& v, double p, double q);

/// Discrete Moyal ratio  Sum |V|^2 hop dw / (2 pi hbar ||psi||^2); equals 1 for
/// an adequately sampled lattice and unit-L^2 window.
double moyal_ratio(const SampledWavefunction& psi, const AmalgamLattice& lattice);

/// A named test function for the estimate experiments.
struct FamilyMember {
    std::string label;
    SampledWavefunction psi;
};

/// Default experiment family: Hermite states k <= 5, centered Gaussians of
/// widths 2^{-2}..2^2 and one chirped Gaussian.
std::vector<FamilyMember> default_test_family(const Grid& grid, double hbar = 1.0);

/// Measured norm ratios for one operator over one family. The maxima are
/// empirical stand-ins for the continuity constants: they lower-bound the true
/// operator norms and are relative to this window and lattice.
struct NormEstimateReport {
    Eigen::MatrixXd matrix;
    double p = 2.0;
    double q = 2.0;
    std::string numerator_space;    ///< norm applied to mu(S) f
    std::string denominator_space;  ///< norm applied to f
    AmalgamLattice lattice;
    std::vector<std::string> family;
    std::vector<double> ratios;
    double max_ratio = 0.0;
    /// Product of the two single-factor empirical constants measured on the
    /// recorded intermediates (same-space experiment only).
    std::optional<double> factor_bound;
    std::vector<std::string> warnings;
};

/// Ratios ||mu(S) f||_{p,q} / ||f||_{q,p} over the family (note the swapped
/// exponents in the denominator); S must be free.
NormEstimateReport cross_estimate_experiment(const SymplecticMatrix& s, double p, double q,
                                             const std::vector<FamilyMember>& family,
                                             const AmalgamLattice& lattice,
                                             double tol_free = kDefaultFreeTol);

/// Same-space ratios ||mu(S) f||_{p,q} / ||f||_{p,q}, with mu(S) realized
/// through the two-free-factor route. Also measures the per-factor constants
/// on the recorded intermediates and reports their product as `factor_bound`.
NormEstimateReport same_space_estimate_experiment(const SymplecticMatrix& s, double p, double q,
                                                  const std::vector<FamilyMember>& family,
                                                  const AmalgamLattice& lattice,
                                                  double tol_free = kDefaultFreeTol);

struct NormTimeSeries {
    std::vector<double> times;
    std::vector<double> norms;
    double p = 2.0;
    double q = 2.0;
};

/// ||f(., t)||_{W} along the exact quadratic-Hamiltonian evolution of f0.
NormTimeSeries regularity_experiment(const QuadraticHamiltonian& h, const SampledWavefunction& f0,
                                     double p, double q, const std::vector<double>& times,
                                     const AmalgamLattice& lattice);

}  // namespace metaplectic
