#include "metaplectic/schrodinger.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fft_internal.hpp"

namespace metaplectic {

namespace {

constexpr double kPi = std::numbers::pi;

void validate_times(const std::vector<double>& times) {
    if (times.empty()) {
        throw InvalidInputError("propagation needs at least one output time");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw InvalidInputError("output times must be strictly increasing");
        }
    }
}

/// FFT angular frequency for bin l of an n-point transform with step dx.
double fft_frequency(int l, int count, double dx) {
    const int signed_l = (l <= count / 2) ? l : l - count;
    return 2.0 * kPi * signed_l / (count * dx);
}

int steps_for_gap(double gap, double dt) {
    const double raw = gap / dt;
    const long long steps = std::llround(raw);
    if (steps < 0 || std::abs(steps * dt - gap) > 1e-12 * std::max(1.0, std::abs(gap))) {
        std::ostringstream msg;
        msg << "splitstep_dt = " << dt << " does not divide the snapshot gap " << gap;
        throw InvalidInputError(msg.str());
    }
    return static_cast<int>(steps);
}

}  // namespace

PropagationResult propagate_metaplectic(const PropagationJob& job) {
    validate_times(job.times);
    if (job.hamiltonian.dof() != job.initial.n()) {
        throw InvalidDimensionError("hamiltonian and initial state dimensions differ");
    }

    PropagationResult result;
    result.method = "metaplectic";
    result.initial_norm = job.initial.l2_norm();

    const int dim = 2 * job.hamiltonian.dof();
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(dim, dim);
    for (const double t : job.times) {
        const SymplecticMatrix flow = hamiltonian_flow(job.hamiltonian, t);
        SampledWavefunction state = job.initial;
        if ((flow.matrix() - eye).cwiseAbs().maxCoeff() > kDefaultSymTol) {
            try {
                ApplyOptions options;
                options.allow_aliasing = job.allow_aliasing;
                state = apply(flow, 0, job.initial, options);
            } catch (const AliasingRiskError& e) {
                throw AliasingRiskError(std::string(e.what()) + " (at t = " + std::to_string(t) +
                                        ")");
            } catch (const FactorizationError& e) {
                throw FactorizationError(std::string(e.what()) + " (at t = " + std::to_string(t) +
                                         ")");
            }
        }
        const double norm = state.l2_norm();
        result.snapshots.push_back(Snapshot{t, std::move(state), norm});
    }
    return result;
}

PropagationResult propagate_splitstep(const PropagationJob& job) {
    validate_times(job.times);
    const int n = job.initial.n();
    if (job.hamiltonian.dof() != n) {
        throw InvalidDimensionError("hamiltonian and initial state dimensions differ");
    }
    const Eigen::MatrixXd cross = job.hamiltonian.block_xp();
    if (cross.cwiseAbs().maxCoeff() > 1e-12) {
        throw UnsupportedHamiltonianError(
            "splitstep handles only block-diagonal M (no Weyl-ordered xp cross terms)");
    }
    if (job.times.front() < 0.0) {
        throw InvalidInputError("splitstep requires nonnegative times");
    }
    if (!(job.splitstep_dt > 0.0)) {
        throw InvalidInputError("splitstep_dt must be positive");
    }

    const double hbar = job.initial.hbar;
    const double dt = job.splitstep_dt;
    const Eigen::MatrixXd v_mat = job.hamiltonian.block_xx();
    const Eigen::MatrixXd k_mat = job.hamiltonian.block_pp();
    const Grid& grid = job.initial.grid;
    const std::size_t total = grid.size();

    // Half-step potential phases and full-step kinetic phases are diagonal in
    // x and p respectively; precompute both multiplier tables.
    Eigen::VectorXcd half_potential(total);
    Eigen::VectorXcd kinetic(total);
    if (n == 1) {
        const AxisGrid& ax = grid.axes[0];
        for (int j = 0; j < ax.count; ++j) {
            const double x = ax.point(j);
            half_potential[j] = std::polar(1.0, -0.25 * v_mat(0, 0) * x * x * dt / hbar);
            const double p = hbar * fft_frequency(j, ax.count, ax.dx);
            kinetic[j] = std::polar(1.0, -0.5 * k_mat(0, 0) * p * p * dt / hbar);
        }
    } else {
        const AxisGrid& ax0 = grid.axes[0];
        const AxisGrid& ax1 = grid.axes[1];
        for (int j0 = 0; j0 < ax0.count; ++j0) {
            for (int j1 = 0; j1 < ax1.count; ++j1) {
                const std::size_t idx = static_cast<std::size_t>(j0) * ax1.count + j1;
                Eigen::Vector2d x(ax0.point(j0), ax1.point(j1));
                half_potential[idx] = std::polar(1.0, -0.25 * x.dot(v_mat * x) * dt / hbar);
                Eigen::Vector2d p(hbar * fft_frequency(j0, ax0.count, ax0.dx),
                                  hbar * fft_frequency(j1, ax1.count, ax1.dx));
                kinetic[idx] = std::polar(1.0, -0.5 * p.dot(k_mat * p) * dt / hbar);
            }
        }
    }

    auto kinetic_step = [&](Eigen::VectorXcd& values) {
        if (n == 1) {
            detail::fft_inplace(values, false);
            values.array() *= kinetic.array();
            detail::fft_inplace(values, true);
        } else {
            detail::fft2_inplace(values, grid.axes[0].count, grid.axes[1].count, false);
            values.array() *= kinetic.array();
            detail::fft2_inplace(values, grid.axes[0].count, grid.axes[1].count, true);
        }
    };

    PropagationResult result;
    result.method = "splitstep";
    result.initial_norm = job.initial.l2_norm();

    Eigen::VectorXcd values = job.initial.values;
    double t_now = 0.0;
    for (const double t : job.times) {
        const int steps = steps_for_gap(t - t_now, dt);
        for (int s = 0; s < steps; ++s) {
            values.array() *= half_potential.array();
            kinetic_step(values);
            values.array() *= half_potential.array();
        }
        t_now = t;
        SampledWavefunction state(grid, values, hbar);
        const double norm = state.l2_norm();
        result.snapshots.push_back(Snapshot{t, std::move(state), norm});
    }
    return result;
}

SampledWavefunction hermite_state(int k, const Grid& grid, double hbar) {
    if (grid.n() != 1) {
        throw InvalidInputError("hermite_state supports 1-D grids only");
    }
    if (k < 0 || k > 40) {
        throw StabilityError("hermite_state: k must be in [0, 40]");
    }
    const AxisGrid& ax = grid.axes[0];
    const double sqrt_hbar = std::sqrt(hbar);
    // Both grid ends must clear the classical turning point plus a decay margin.
    const double needed = sqrt_hbar * (std::sqrt(2.0 * k + 1.0) + 4.0);
    if (-ax.x0 < needed || ax.last() < needed) {
        std::ostringstream msg;
        msg << "hermite_state: grid must extend past +/-" << needed << " for k = " << k;
        throw StabilityError(msg.str());
    }

    Eigen::VectorXcd values(ax.count);
    const double norm0 = std::pow(kPi, -0.25) / std::sqrt(sqrt_hbar);
    for (int j = 0; j < ax.count; ++j) {
        const double xi = ax.point(j) / sqrt_hbar;
        // Normalized recurrence h_k = sqrt(2/k) xi h_{k-1} - sqrt((k-1)/k) h_{k-2}.
        double prev = 0.0;
        double cur = norm0 * std::exp(-0.5 * xi * xi);
        for (int level = 1; level <= k; ++level) {
            const double next =
                std::sqrt(2.0 / level) * xi * cur - std::sqrt((level - 1.0) / level) * prev;
            prev = cur;
            cur = next;
        }
        values[j] = cur;
    }
    return SampledWavefunction(grid, std::move(values), hbar);
}

ComparisonReport compare_results(const PropagationResult& a, const PropagationResult& b,
                                 CompareMode mode) {
    if (a.snapshots.size() != b.snapshots.size()) {
        throw InvalidComparisonError("compare_results: snapshot counts differ");
    }
    ComparisonReport report;
    for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
        const Snapshot& sa = a.snapshots[i];
        const Snapshot& sb = b.snapshots[i];
        if (std::abs(sa.t - sb.t) > 1e-12) {
            throw InvalidComparisonError("compare_results: time lists differ");
        }
        if (!(sa.state.grid == sb.state.grid)) {
            throw InvalidComparisonError("compare_results: grids differ");
        }
        double phase = 0.0;
        Complex factor(1.0, 0.0);
        if (mode == CompareMode::up_to_global_phase) {
            const Complex overlap = inner_product(sb.state, sa.state);
            if (std::abs(overlap) > 0.0) {
                factor = overlap / std::abs(overlap);
                phase = std::arg(factor);
            }
        }
        const double err = std::sqrt((sa.state.values - factor * sb.state.values).squaredNorm() *
                                     sa.state.grid.cell_volume());
        report.entries.push_back(ComparisonEntry{sa.t, err, phase});
        report.max_error = std::max(report.max_error, err);
    }
    return report;
}

}  // namespace metaplectic
