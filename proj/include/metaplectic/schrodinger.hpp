#pragma once

#include <string>
#include <vector>

#include "metaplectic/metaplectic_op.hpp"
#include "metaplectic/symplectic.hpp"
#include "metaplectic/wavefunction.hpp"

namespace metaplectic {

enum class PropagationMethod {
    metaplectic,  ///< exact: lift of the Hamiltonian flow at each output time
    splitstep,    ///< Strang-split FFT reference integrator (separable M only)
};

/// One propagation request: evolve `initial` under H(z) = 1/2 z^T M z and
/// record snapshots at the requested instants.
struct PropagationJob {
    QuadraticHamiltonian hamiltonian;
    SampledWavefunction initial;
    std::vector<double> times;  ///< strictly increasing output instants
    PropagationMethod method = PropagationMethod::metaplectic;
    double splitstep_dt = 1e-3;     ///< used only by splitstep
    bool allow_aliasing = false;    ///< forwarded to the metaplectic kernel
};

struct Snapshot {
    double t;
    SampledWavefunction state;
    double l2_norm;
};

struct PropagationResult {
    std::vector<Snapshot> snapshots;
    std::string method;
    double initial_norm = 0.0;
};

/// Solve by applying the metaplectic lift of A_t = exp(t J M) at each output
/// time; falls back to the two-free-factor route at non-free instants.
/// A_t within tol of the identity returns the initial data unchanged
/// (the + sheet is pinned at t = 0).
PropagationResult propagate_metaplectic(const PropagationJob& job);

/// Independent reference: Strang splitting exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2)
/// with an FFT kinetic step. Requires M block-diagonal (no xp cross terms)
/// and nonnegative, nondecreasing times; global error O(dt^2).
PropagationResult propagate_splitstep(const PropagationJob& job);

/// Normalized Hermite function h_k(x / sqrt(hbar)) * hbar^{-1/4} on a 1-D grid,
/// via the stable normalized three-term recurrence. k <= 40; the grid must
/// extend past the classical turning point on both sides.
SampledWavefunction hermite_state(int k, const Grid& grid, double hbar = 1.0);

enum class CompareMode {
    l2,                 ///< plain per-snapshot L^2 distance
    up_to_global_phase  ///< distance after removing the best unimodular factor
};

struct ComparisonEntry {
    double t;
    double l2_error;
    double phase;  ///< argument of the removed unimodular factor (0 in l2 mode)
};

struct ComparisonReport {
    std::vector<ComparisonEntry> entries;
    double max_error = 0.0;
};

/// Per-snapshot distance between two results on identical grids and times.
ComparisonReport compare_results(const PropagationResult& a, const PropagationResult& b,
                                 CompareMode mode);

}  // namespace metaplectic
