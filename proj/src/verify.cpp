#include "metaplectic/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "metaplectic/amalgam.hpp"
#include "metaplectic/metaplectic_op.hpp"
#include "metaplectic/schrodinger.hpp"
#include "metaplectic/symplectic.hpp"
#include "metaplectic/wavefunction.hpp"

namespace metaplectic::verify {

namespace {

constexpr double kPi = std::numbers::pi;

struct CheckContext {
    bool passed = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << what;
        }
    }

    void note(const std::string& what) {
        if (detail.tellp() > 0) detail << "; ";
        detail << what;
    }
};

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(3);
    out << v;
    return out.str();
}

/// Test matrices are kept "moderate": away from caustics, bounded entries,
/// chirp rates inside the grid Nyquist budget and Gaussian images that stay
/// well inside |x| <= 12 (so quadrature tails are negligible).
bool moderate_free_1d(const SymplecticMatrix& s, double chirp_budget) {
    if (std::abs(s.det_b()) < 0.1) return false;
    if (s.matrix().cwiseAbs().maxCoeff() > 3.0) return false;
    const auto op = FreeMetaplecticOp::lift(s, 0, 1.0);
    const double rate = std::abs(op.gen.p(0, 0)) + std::abs(op.gen.l(0, 0));
    if (rate * 12.0 > chirp_budget) return false;
    const GaussianImage img = gaussian_oracle(op, Complex(1.0, 0.0));
    return img.b.real() >= 0.25 && img.b.real() <= 8.0;
}

std::vector<SymplecticMatrix> collect_moderate_free(int count, std::uint64_t seed0,
                                                    double chirp_budget) {
    std::vector<SymplecticMatrix> out;
    std::uint64_t seed = seed0;
    while (static_cast<int>(out.size()) < count) {
        const SymplecticMatrix s = random_symplectic(1, seed++);
        if (moderate_free_1d(s, chirp_budget)) out.push_back(s);
    }
    return out;
}

CheckResult timed(const std::string& name, double runtime_limit,
                  const std::function<void(CheckContext&)>& body) {
    CheckContext ctx;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(ctx);
    } catch (const std::exception& e) {
        ctx.require(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - start).count();
    if (runtime_limit > 0.0) {
        ctx.require(seconds < runtime_limit,
                    "runtime " + fmt(seconds) + "s over limit " + fmt(runtime_limit) + "s");
    }
    std::string detail = ctx.detail.str();
    if (ctx.passed && detail.empty()) detail = "ok";
    return CheckResult{name, ctx.passed, detail, seconds};
}

// --- individual checks -----------------------------------------------------

void check_symplectic_suite(CheckContext& ctx) {
    double worst_residual = 0.0;
    double worst_det = 1e300;
    for (const int n : {1, 2}) {
        for (int i = 0; i < 50; ++i) {
            const std::uint64_t seed = static_cast<std::uint64_t>(n) * 1000 + i;
            const SymplecticMatrix s = random_symplectic(n, seed);
            ctx.require(is_symplectic(s.matrix(), 1e-9),
                        "random_symplectic(" + std::to_string(n) + ", " + std::to_string(seed) +
                            ") fails is_symplectic at 1e-9");
            const FreeFactorization split = factor_free(s);
            worst_residual = std::max(worst_residual, split.residual);
            worst_det = std::min({worst_det, std::abs(split.first.det_b()),
                                  std::abs(split.second.det_b())});
        }
    }
    ctx.require(worst_residual <= 1e-9,
                "factorization residual " + fmt(worst_residual) + " > 1e-9");
    ctx.require(worst_det >= 1e-6, "factor |det B| " + fmt(worst_det) + " < 1e-6");
    ctx.note("100 matrices, max residual " + fmt(worst_residual) + ", min factor |det B| " +
             fmt(worst_det));
}

void check_sw1_realization(CheckContext& ctx) {
    const Grid coarse = make_grid(-12.0, 12.0, 256);
    const Grid fine = make_grid(-12.0, 12.0, 1024);
    const SampledWavefunction psi_coarse = normalized(make_gaussian(coarse, 1.0));
    const SampledWavefunction psi_fine = normalized(make_gaussian(fine, 1.0));

    // Chirp budget from the coarser grid so the same suite serves both parts.
    const double budget = 0.8 * kPi / coarse.axes[0].dx;
    const auto suite = collect_moderate_free(50, 1, budget);

    double worst_gap = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto op = FreeMetaplecticOp::lift(suite[i], 0, 1.0);
        const SampledWavefunction fast = apply_free(op, psi_coarse, ApplyMethod::fast);
        const SampledWavefunction direct = apply_free(op, psi_coarse, ApplyMethod::direct);
        worst_gap = std::max(worst_gap, l2_distance(fast, direct));
    }
    ctx.require(worst_gap <= 1e-8, "fast vs direct L2 gap " + fmt(worst_gap) + " > 1e-8");

    double worst_unitarity = 0.0;
    for (const SymplecticMatrix& s : suite) {
        const auto op = FreeMetaplecticOp::lift(s, 0, 1.0);
        const double ratio = apply_free(op, psi_fine).l2_norm() / psi_fine.l2_norm();
        worst_unitarity = std::max(worst_unitarity, std::abs(ratio - 1.0));
    }
    ctx.require(worst_unitarity <= 1e-5,
                "norm ratio drift " + fmt(worst_unitarity) + " > 1e-5");
    ctx.note("20 oracle pairs (max gap " + fmt(worst_gap) + "), 50 unitarity cases (max drift " +
             fmt(worst_unitarity) + ")");
}

void check_double_cover(CheckContext& ctx) {
    const Grid grid = make_grid(-12.0, 12.0, 1024);
    const SampledWavefunction psi = normalized(make_gaussian(grid, 1.0));
    const double budget = 0.6 * kPi / grid.axes[0].dx;

    int found = 0;
    std::uint64_t seed = 1;
    double worst = 0.0;
    while (found < 20) {
        const SymplecticMatrix s1 = random_symplectic(1, seed);
        const SymplecticMatrix s2 = random_symplectic(1, seed + 100000);
        seed++;
        if (!moderate_free_1d(s1, budget) || !moderate_free_1d(s2, budget)) continue;
        const SymplecticMatrix s12 = s1 * s2;
        if (!is_free(s12, 0.1) || !moderate_free_1d(s12, budget)) continue;
        // The intermediate state must stay contained and under-Nyquist too.
        const auto op1 = FreeMetaplecticOp::lift(s1, 0, 1.0);
        const auto op2 = FreeMetaplecticOp::lift(s2, 0, 1.0);
        const GaussianImage mid = gaussian_oracle(op2, Complex(1.0, 0.0));
        if (mid.b.real() < 0.25 || mid.b.real() > 8.0) continue;
        const GaussianImage fin = gaussian_oracle(op1, mid.b);
        if (fin.b.real() < 0.25 || fin.b.real() > 8.0) continue;
        const double eff_chirp = std::abs(op1.gen.q(0, 0) - mid.b.imag()) +
                                 std::abs(op1.gen.l(0, 0));
        if (eff_chirp * 12.0 > budget) continue;

        const Complex c = compose_and_compare(s1, s2, psi);
        const double err = std::min(std::abs(c - 1.0), std::abs(c + 1.0));
        worst = std::max(worst, err);
        found++;
    }
    ctx.require(worst <= 1e-5, "scalar off +/-1 by " + fmt(worst) + " > 1e-5");
    ctx.note("20 free triples, max deviation from a sign " + fmt(worst));
}

void check_quadratic_propagation(CheckContext& ctx) {
    const Grid grid = make_grid(-12.0, 12.0, 1024);
    const QuadraticHamiltonian oscillator(Eigen::MatrixXd::Identity(2, 2));
    const std::vector<double> times = {kPi / 8.0, kPi / 4.0, kPi / 2.0};

    double worst_pointwise = 0.0;
    double worst_cross = 0.0;
    for (int k = 0; k <= 3; ++k) {
        const SampledWavefunction hk = hermite_state(k, grid);
        PropagationJob job{oscillator, hk, times, PropagationMethod::metaplectic, kPi / 2000.0,
                           false};
        const PropagationResult met = propagate_metaplectic(job);
        for (std::size_t i = 0; i < times.size(); ++i) {
            const Complex phase = std::polar(1.0, -(k + 0.5) * times[i]);
            const Eigen::VectorXcd expected = phase * hk.values;
            const auto& got = met.snapshots[i].state.values;
            const double err = std::min((got - expected).cwiseAbs().maxCoeff(),
                                        (got + expected).cwiseAbs().maxCoeff());
            worst_pointwise = std::max(worst_pointwise, err);
        }
        job.method = PropagationMethod::splitstep;
        const PropagationResult split = propagate_splitstep(job);
        const ComparisonReport cmp =
            compare_results(met, split, CompareMode::up_to_global_phase);
        worst_cross = std::max(worst_cross, cmp.max_error);
    }
    ctx.require(worst_pointwise <= 1e-4,
                "eigenstate pointwise error " + fmt(worst_pointwise) + " > 1e-4");
    ctx.require(worst_cross <= 1e-4, "split-step cross error " + fmt(worst_cross) + " > 1e-4");

    // Self-convergence of the reference integrator (k = 2, t = pi/2).
    const SampledWavefunction h2 = hermite_state(2, grid);
    auto splitstep_error = [&](double dt) {
        PropagationJob job{oscillator, h2, {kPi / 2.0}, PropagationMethod::splitstep, dt, false};
        const PropagationResult r = propagate_splitstep(job);
        const Eigen::VectorXcd expected =
            std::polar(1.0, -2.5 * kPi / 2.0) * h2.values;
        return std::sqrt((r.snapshots[0].state.values - expected).squaredNorm() *
                         grid.cell_volume());
    };
    const double e1 = splitstep_error(kPi / 100.0);
    const double e2 = splitstep_error(kPi / 200.0);
    const double order = std::log2(e1 / e2);
    ctx.require(std::abs(order - 2.0) <= 0.2,
                "split-step order " + fmt(order) + " outside 2.0 +/- 0.2");
    ctx.note("pointwise " + fmt(worst_pointwise) + ", cross " + fmt(worst_cross) + ", order " +
             fmt(order));
}

void check_caustic_parity(CheckContext& ctx) {
    const Grid grid = make_grid(-12.0, 12.0, 1024);
    const QuadraticHamiltonian oscillator(Eigen::MatrixXd::Identity(2, 2));
    const SampledWavefunction h0 = hermite_state(0, grid);
    const SampledWavefunction h1 = hermite_state(1, grid);
    SampledWavefunction f0(grid, (h0.values + h1.values) / std::sqrt(2.0), 1.0);

    PropagationJob job{oscillator, f0, {kPi}, PropagationMethod::metaplectic, 1e-3, false};
    const PropagationResult result = propagate_metaplectic(job);
    const Eigen::VectorXcd parity = f0.values.reverse();
    const auto& got = result.snapshots[0].state.values;
    // The realized scalar is i^m for some m: in one dimension the lift of -I
    // carries the caustic phase -/+ i on top of the +/- sheet.
    double err = 1e300;
    int phase_m = 0;
    for (int m = 0; m < 4; ++m) {
        const Complex c = std::polar(1.0, 0.5 * kPi * m);
        const double e = (got - c * parity).cwiseAbs().maxCoeff();
        if (e < err) {
            err = e;
            phase_m = m;
        }
    }
    ctx.require(err <= 1e-4, "parity error at the caustic " + fmt(err) + " > 1e-4");
    ctx.note("t = pi handled via factorization, parity realized with scalar i^" +
             std::to_string(phase_m) + ", error " + fmt(err));
}

void check_amalgam_moyal(CheckContext& ctx) {
    const Grid grid = make_grid(-12.0, 12.0, 1024);
    const AmalgamLattice lattice;  // defaults: width 1, hop 4 dx, N/4 bins
    std::vector<SampledWavefunction> cases = {
        hermite_state(0, grid),
        normalized(make_gaussian(grid, 0.25)),
        normalized(make_gaussian(grid, Complex(1.0, -0.5))),
    };

    double worst_moyal = 0.0;
    double worst_calibration = 0.0;
    double worst_refinement = 0.0;
    for (const auto& psi : cases) {
        worst_moyal = std::max(worst_moyal, std::abs(moyal_ratio(psi, lattice) - 1.0));

        const double norm22 = amalgam_norm(psi, AmalgamNormSpec{2.0, 2.0, lattice});
        const double expected = std::sqrt(2.0 * kPi * psi.hbar) * psi.l2_norm();
        worst_calibration =
            std::max(worst_calibration, std::abs(norm22 / expected - 1.0));

        AmalgamLattice refined = lattice;
        refined.hop = 2.0 * grid.axes[0].dx;
        const double refined22 = amalgam_norm(psi, AmalgamNormSpec{2.0, 2.0, refined});
        worst_refinement =
            std::max(worst_refinement, std::abs(refined22 / norm22 - 1.0));
    }
    ctx.require(worst_moyal <= 1e-4, "Moyal defect " + fmt(worst_moyal) + " > 1e-4");
    ctx.require(worst_calibration <= 1e-3,
                "p=q=2 calibration defect " + fmt(worst_calibration) + " > 1e-3");
    ctx.require(worst_refinement < 5e-3,
                "hop refinement moved the norm by " + fmt(worst_refinement) + " >= 0.5%");
    ctx.note("moyal " + fmt(worst_moyal) + ", calibration " + fmt(worst_calibration) +
             ", refinement " + fmt(worst_refinement));
}

void check_estimate_experiments(CheckContext& ctx) {
    const Grid grid = make_grid(-12.0, 12.0, 1024);
    const AmalgamLattice lattice;
    const auto family = default_test_family(grid);

    std::vector<std::pair<std::string, SymplecticMatrix>> matrices;
    matrices.emplace_back("J", SymplecticMatrix(standard_symplectic_form(1)));
    matrices.emplace_back("rotation(pi/4)", fractional_rotation(1, kPi / 4.0));
    Eigen::MatrixXd shear(2, 2);
    shear << 1.0, 1.0, 0.0, 1.0;
    matrices.emplace_back("shear", SymplecticMatrix(shear));
    // One seeded random free matrix, kept gentle enough that every family
    // member's image stays inside the grid.
    {
        std::uint64_t seed = 1;
        for (;; ++seed) {
            const SymplecticMatrix s = random_symplectic(1, seed);
            if (!moderate_free_1d(s, 0.5 * kPi / grid.axes[0].dx)) continue;
            if (s.matrix().cwiseAbs().maxCoeff() > 1.6) continue;
            const auto op = FreeMetaplecticOp::lift(s, 0, 1.0);
            bool contained = true;
            for (const double a : {0.0625, 1.0, 16.0}) {
                const GaussianImage img = gaussian_oracle(op, Complex(a, 0.0));
                contained = contained && img.b.real() >= 0.05 && img.b.real() <= 25.0;
            }
            if (contained) break;
        }
        matrices.emplace_back("random seed=" + std::to_string(seed), random_symplectic(1, seed));
    }

    const std::vector<std::pair<double, double>> exponents = {
        {1.0, std::numeric_limits<double>::infinity()},
        {2.0, 2.0},
        {std::numeric_limits<double>::infinity(), 1.0},
        {1.0, 2.0},
    };

    double worst_unitary = 0.0;
    double worst_bound_excess = -1e300;
    for (const auto& [label, s] : matrices) {
        for (const auto& [p, q] : exponents) {
            const NormEstimateReport cross =
                cross_estimate_experiment(s, p, q, family, lattice);
            const NormEstimateReport same =
                same_space_estimate_experiment(s, p, q, family, lattice);
            for (const double r : cross.ratios) {
                ctx.require(std::isfinite(r) && r > 0.0,
                            label + " cross ratio not finite/positive");
            }
            for (const double r : same.ratios) {
                ctx.require(std::isfinite(r) && r > 0.0,
                            label + " same-space ratio not finite/positive");
            }
            if (p == 2.0 && q == 2.0) {
                for (const double r : cross.ratios) {
                    worst_unitary = std::max(worst_unitary, std::abs(r - 1.0));
                }
                for (const double r : same.ratios) {
                    worst_unitary = std::max(worst_unitary, std::abs(r - 1.0));
                }
            }
            ctx.require(same.factor_bound.has_value(), label + " missing factor bound");
            if (same.factor_bound) {
                worst_bound_excess = std::max(
                    worst_bound_excess, same.max_ratio / (*same.factor_bound) - 1.0);
            }
        }
    }
    ctx.require(worst_unitary <= 1e-3, "(2,2) ratio off unity by " + fmt(worst_unitary));
    ctx.require(worst_bound_excess <= 0.05,
                "empirical C exceeds the factor bound by " + fmt(100.0 * worst_bound_excess) +
                    "%");
    ctx.note("4 matrices x 4 exponent pairs; (2,2) drift " + fmt(worst_unitary) +
             ", worst bound excess " + fmt(worst_bound_excess));
}

void check_regularity_series(CheckContext& ctx) {
    const Grid grid = make_grid(-12.0, 12.0, 1024);
    const QuadraticHamiltonian oscillator(Eigen::MatrixXd::Identity(2, 2));
    const SampledWavefunction h0 = hermite_state(0, grid);
    std::vector<double> times;
    for (int k = 0; k <= 8; ++k) times.push_back(k * kPi / 4.0);

    const AmalgamLattice lattice;
    double worst_period = 0.0;
    for (const auto& [p, q] : std::vector<std::pair<double, double>>{
             {2.0, 2.0}, {1.0, std::numeric_limits<double>::infinity()}}) {
        const NormTimeSeries series =
            regularity_experiment(oscillator, h0, p, q, times, lattice);
        for (const double v : series.norms) {
            ctx.require(std::isfinite(v) && v > 0.0, "non-finite amalgam norm in the series");
        }
        const double rel =
            std::abs(series.norms.back() - series.norms.front()) / series.norms.front();
        worst_period = std::max(worst_period, rel);
    }
    ctx.require(worst_period <= 1e-3,
                "2 pi periodicity defect " + fmt(worst_period) + " > 1e-3");
    ctx.note("9 instants over one oscillator period, periodicity defect " + fmt(worst_period));
}

struct CheckSpec {
    std::string name;
    double runtime_limit;
    void (*body)(CheckContext&);
};

const std::vector<CheckSpec>& registry() {
    static const std::vector<CheckSpec> checks = {
        {"symplectic-suite", 5.0, check_symplectic_suite},
        {"sw1-realization", 30.0, check_sw1_realization},
        {"double-cover", 30.0, check_double_cover},
        {"quadratic-propagation", 60.0, check_quadratic_propagation},
        {"caustic-parity", 30.0, check_caustic_parity},
        {"amalgam-moyal", 30.0, check_amalgam_moyal},
        {"estimate-experiments", 120.0, check_estimate_experiments},
        {"regularity-series", 60.0, check_regularity_series},
    };
    return checks;
}

}  // namespace

std::vector<CheckResult> run_all_checks() {
    std::vector<CheckResult> results;
    for (const auto& spec : registry()) {
        results.push_back(timed(spec.name, spec.runtime_limit, spec.body));
    }
    return results;
}

std::vector<std::string> check_names() {
    std::vector<std::string> names;
    for (const auto& spec : registry()) names.push_back(spec.name);
    return names;
}

CheckResult run_check(const std::string& name) {
    for (const auto& spec : registry()) {
        if (spec.name == name) return timed(spec.name, spec.runtime_limit, spec.body);
    }
    throw InvalidInputError("unknown check: " + name);
}

}  // namespace metaplectic::verify
