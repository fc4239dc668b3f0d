#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "metaplectic/amalgam.hpp"

using namespace metaplectic;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

Grid test_grid() { return make_grid(-12.0, 12.0, 1025); }  // odd: 0 sits on the lattice

/// Unweighted inner l^p norm of a vector of magnitudes.
double raw_lp(const Eigen::VectorXd& v, double p) {
    if (std::isinf(p)) return v.maxCoeff();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(v[i], p);
    return std::pow(acc, 1.0 / p);
}
}  // namespace

TEST_CASE("stft of the window peaks at the phase-space origin") {
    const Grid grid = test_grid();
    // The unit-width window is exactly the oscillator ground state.
    const SampledWavefunction g = hermite_state(0, grid);
    const AmalgamLattice lattice;
    const StftResult v = stft(g, lattice);

    // Locate x = 0 and omega = 0 on the lattice.
    int s0 = -1;
    for (std::size_t s = 0; s < v.shifts.size(); ++s) {
        if (std::abs(v.shifts[s]) < 1e-12) s0 = static_cast<int>(s);
    }
    REQUIRE(s0 >= 0);
    int l0 = -1;
    for (std::size_t l = 0; l < v.omegas.size(); ++l) {
        if (std::abs(v.omegas[l]) < 1e-12) l0 = static_cast<int>(l);
    }
    REQUIRE(l0 >= 0);

    CHECK(std::abs(v.values(s0, l0) - Complex(1.0, 0.0)) < 1e-8);
    CHECK(v.values.cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-8));

    // And the discrete window norm itself is unit.
    CHECK(std::abs(g.l2_norm() - 1.0) < 1e-10);
}

TEST_CASE("stft of zero is the zero matrix") {
    const Grid grid = test_grid();
    SampledWavefunction zero(grid, Eigen::VectorXcd::Zero(1025), 1.0);
    const StftResult v = stft(zero, AmalgamLattice{});
    CHECK(v.values.cwiseAbs().maxCoeff() == 0.0);
    CHECK(amalgam_norm(zero, AmalgamNormSpec{}) == 0.0);
}

TEST_CASE("stft validation") {
    const Grid grid = test_grid();
    const SampledWavefunction psi = hermite_state(0, grid);

    AmalgamLattice wide_hop;
    wide_hop.hop = 2.0;  // exceeds the unit window width
    CHECK_THROWS_AS(stft(psi, wide_hop), InvalidInputError);

    const Grid plane = make_grid_2d(-6.0, 6.0, 32);
    const SampledWavefunction psi2 = make_gaussian(plane, 1.0);
    CHECK_THROWS_AS(stft(psi2, AmalgamLattice{}), InvalidInputError);
}

TEST_CASE("discrete Moyal identity") {
    const Grid grid = test_grid();
    const AmalgamLattice lattice;
    const std::vector<SampledWavefunction> cases = {
        hermite_state(0, grid),
        hermite_state(4, grid),
        normalized(make_gaussian(grid, 0.25)),
        normalized(make_gaussian(grid, 4.0)),
        normalized(make_gaussian(grid, Complex(1.0, -0.5))),
    };
    for (const auto& psi : cases) {
        CHECK(std::abs(moyal_ratio(psi, lattice) - 1.0) < 1e-4);
    }
}

TEST_CASE("p=q=2 amalgam norm is sqrt(2 pi hbar) times the L2 norm") {
    const Grid grid = test_grid();
    for (const double hbar : {1.0, 0.5}) {
        const SampledWavefunction psi = normalized(make_gaussian(grid, Complex(1.2, 0.3), hbar));
        const double norm = amalgam_norm(psi, AmalgamNormSpec{});
        const double expected = std::sqrt(2.0 * kPi * hbar) * psi.l2_norm();
        CHECK(std::abs(norm / expected - 1.0) < 1e-3);
    }
}

TEST_CASE("norm axioms on the lattice") {
    const Grid grid = test_grid();
    const SampledWavefunction psi = hermite_state(2, grid);
    const SampledWavefunction phi = normalized(make_gaussian(grid, Complex(0.7, 0.4)));

    SUBCASE("homogeneity is exact at the power-of-two exponents") {
        for (const auto& [p, q] : std::vector<std::pair<double, double>>{
                 {1.0, 1.0}, {2.0, 2.0}, {kInf, 1.0}, {1.0, kInf}, {2.0, kInf}}) {
            AmalgamNormSpec spec;
            spec.p = p;
            spec.q = q;
            SampledWavefunction doubled(grid, 2.0 * psi.values, 1.0);
            CHECK(amalgam_norm(doubled, spec) == 2.0 * amalgam_norm(psi, spec));
        }
    }

    SUBCASE("triangle inequality") {
        for (const auto& [p, q] : std::vector<std::pair<double, double>>{
                 {1.0, kInf}, {2.0, 2.0}, {kInf, 1.0}, {1.5, 3.0}}) {
            AmalgamNormSpec spec;
            spec.p = p;
            spec.q = q;
            SampledWavefunction sum(grid, psi.values + phi.values, 1.0);
            CHECK(amalgam_norm(sum, spec) <=
                  amalgam_norm(psi, spec) + amalgam_norm(phi, spec) + 1e-12);
        }
    }

    SUBCASE("inner lattice norms decrease as p grows") {
        const StftResult v = stft(psi, AmalgamLattice{});
        const Eigen::VectorXd row = v.values.row(v.values.rows() / 2).cwiseAbs().transpose();
        const std::vector<double> ps = {1.0, 1.5, 2.0, 4.0, kInf};
        for (std::size_t i = 1; i < ps.size(); ++i) {
            CHECK(raw_lp(row, ps[i]) <= raw_lp(row, ps[i - 1]) * (1.0 + 1e-12));
        }
    }

    SUBCASE("exponents outside [1, inf] are rejected") {
        AmalgamNormSpec spec;
        spec.p = 0.5;
        CHECK_THROWS_AS(amalgam_norm(psi, spec), InvalidExponentError);
        spec.p = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(amalgam_norm(psi, spec), InvalidExponentError);
    }
}

TEST_CASE("cross-space estimate experiment") {
    const Grid grid = test_grid();
    const AmalgamLattice lattice;
    const SymplecticMatrix j(standard_symplectic_form(1));

    SUBCASE("self-dual case is unitary") {
        std::vector<FamilyMember> gaussians;
        for (const double w : {0.5, 1.0, 2.0}) {
            gaussians.push_back({"g", normalized(make_gaussian(grid, 1.0 / (w * w)))});
        }
        const NormEstimateReport report =
            cross_estimate_experiment(j, 2.0, 2.0, gaussians, lattice);
        for (const double r : report.ratios) {
            CHECK(std::abs(r - 1.0) < 1e-3);
        }
    }

    SUBCASE("(1, inf) over a width family is finite") {
        std::vector<FamilyMember> gaussians;
        for (const double w : {0.25, 0.5, 1.0, 2.0, 4.0}) {
            gaussians.push_back({"g", normalized(make_gaussian(grid, 1.0 / (w * w)))});
        }
        const NormEstimateReport report =
            cross_estimate_experiment(j, 1.0, kInf, gaussians, lattice);
        CHECK(report.ratios.size() == 5);
        for (const double r : report.ratios) {
            CHECK(std::isfinite(r));
            CHECK(r > 0.0);
        }
        CHECK(report.max_ratio == *std::max_element(report.ratios.begin(), report.ratios.end()));
    }

    SUBCASE("single-member bookkeeping") {
        const std::vector<FamilyMember> one = {{"h0", hermite_state(0, grid)}};
        const NormEstimateReport report = cross_estimate_experiment(j, 1.0, 2.0, one, lattice);
        CHECK(report.ratios.size() == 1);
        CHECK(report.family.size() == 1);
    }

    SUBCASE("zero members are skipped with a warning") {
        std::vector<FamilyMember> family = {{"h0", hermite_state(0, grid)}};
        family.push_back({"zero", SampledWavefunction(grid, Eigen::VectorXcd::Zero(1025), 1.0)});
        const NormEstimateReport report = cross_estimate_experiment(j, 2.0, 2.0, family, lattice);
        CHECK(report.ratios.size() == 1);
        CHECK(report.warnings.size() == 1);
    }

    SUBCASE("non-free matrices are rejected") {
        const SymplecticMatrix identity(Eigen::MatrixXd::Identity(2, 2));
        const std::vector<FamilyMember> one = {{"h0", hermite_state(0, grid)}};
        CHECK_THROWS_AS(cross_estimate_experiment(identity, 2.0, 2.0, one, lattice),
                        NotFreeError);
    }
}

TEST_CASE("same-space estimate experiment") {
    const Grid grid = test_grid();
    const AmalgamLattice lattice;

    SUBCASE("identity is neutral") {
        const SymplecticMatrix identity(Eigen::MatrixXd::Identity(2, 2));
        const std::vector<FamilyMember> family = {
            {"h0", hermite_state(0, grid)},
            {"h3", hermite_state(3, grid)},
            {"g", normalized(make_gaussian(grid, 2.0))},
        };
        const NormEstimateReport report =
            same_space_estimate_experiment(identity, 1.0, kInf, family, lattice);
        for (const double r : report.ratios) {
            CHECK(std::abs(r - 1.0) < 1e-6);
        }
        REQUIRE(report.factor_bound.has_value());
        CHECK(report.max_ratio <= *report.factor_bound * 1.05);
    }

    SUBCASE("rotations are unitary on the self-dual space") {
        const NormEstimateReport report = same_space_estimate_experiment(
            fractional_rotation(1, kPi / 4.0), 2.0, 2.0, default_test_family(grid), lattice);
        for (const double r : report.ratios) {
            CHECK(std::abs(r - 1.0) < 1e-3);
        }
        CHECK(report.max_ratio <= *report.factor_bound * 1.05);
    }

    SUBCASE("the parity instant preserves every mixed norm") {
        std::vector<FamilyMember> hermites;
        for (int k = 0; k <= 5; ++k) {
            hermites.push_back({"h" + std::to_string(k), hermite_state(k, grid)});
        }
        const NormEstimateReport report = same_space_estimate_experiment(
            fractional_rotation(1, kPi), 1.0, kInf, hermites, lattice);
        for (const double r : report.ratios) {
            CHECK(std::abs(r - 1.0) < 1e-3);
        }
    }
}

TEST_CASE("regularity experiment") {
    const Grid grid = test_grid();
    const AmalgamLattice lattice;
    const QuadraticHamiltonian oscillator(Eigen::MatrixXd::Identity(2, 2));
    const SampledWavefunction h0 = hermite_state(0, grid);

    SUBCASE("oscillator on the self-dual space is constant") {
        std::vector<double> times;
        for (int k = 0; k <= 8; ++k) times.push_back(k * kPi / 4.0);
        const NormTimeSeries series =
            regularity_experiment(oscillator, h0, 2.0, 2.0, times, lattice);
        REQUIRE(series.norms.size() == times.size());
        for (const double v : series.norms) {
            CHECK(std::abs(v / series.norms.front() - 1.0) < 1e-3);
        }
    }

    SUBCASE("oscillator (1, inf) series is 2 pi periodic") {
        std::vector<double> times;
        for (int k = 0; k <= 8; ++k) times.push_back(k * kPi / 4.0);
        const NormTimeSeries series =
            regularity_experiment(oscillator, h0, 1.0, kInf, times, lattice);
        for (const double v : series.norms) {
            CHECK(std::isfinite(v));
            CHECK(v > 0.0);
        }
        CHECK(std::abs(series.norms.back() / series.norms.front() - 1.0) < 1e-3);
    }

    SUBCASE("free particle norms stay finite while growing") {
        Eigen::MatrixXd m(2, 2);
        m << 0, 0, 0, 1;
        const QuadraticHamiltonian free_particle(m);
        const SampledWavefunction f0 = normalized(make_gaussian(grid, 1.0));
        const NormTimeSeries series = regularity_experiment(
            free_particle, f0, kInf, 1.0, {0.5, 1.0, 1.5}, lattice);
        for (const double v : series.norms) {
            CHECK(std::isfinite(v));
            CHECK(v > 0.0);
        }
    }
}
