#include <doctest.h>

#include <cmath>
#include <random>

#include "qakin/boltzmann.hpp"
#include "qakin/kernel.hpp"
#include "test_util.hpp"

using namespace qakin;

namespace {

ModelParams make_params(double alpha, double beta, int n) {
    ModelParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.n_sites = n;
    return p;
}

double fermi_kl_divergence(const Eigen::VectorXd& rho, const Eigen::VectorXd& ref) {
    double kl = 0.0;
    for (int i = 0; i < rho.size(); ++i) {
        const double r = std::min(std::max(rho[i], 0.0), 1.0);
        const double f = ref[i];
        if (r > 0.0) kl += r * std::log(r / f);
        if (r < 1.0) kl += (1.0 - r) * std::log((1.0 - r) / (1.0 - f));
    }
    return kl;
}

}  // namespace

TEST_CASE("Fermi-Dirac occupations are stationary under the collision integral") {
    const struct { double g, beta; } points[] = {
        {0.5, 5.0}, {0.8, 25.0}, {1.0, 12.0}, {1.2, 50.0}, {1.5, 8.0}};
    for (const auto& pt : points) {
        const auto p = make_params(0.06, pt.beta, 512);
        const auto grid = MomentumGrid::make(512);
        const auto fd = fermi_dirac_state(pt.g, pt.beta, grid);
        const auto rhs = qbe_rhs(fd, p, grid);
        CHECK(rhs.cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("empty and full bands: pure generation / pure recombination") {
    const auto p = make_params(0.06, 25.0, 128);
    const auto grid = MomentumGrid::make(128);
    PopulationState state;
    state.g = 0.9;
    state.rho = Eigen::VectorXd::Zero(128);
    auto rhs = qbe_rhs(state, p, grid);
    for (int i = 0; i < 128; ++i) CHECK(rhs[i] > 0.0);

    state.rho = Eigen::VectorXd::Ones(128);
    rhs = qbe_rhs(state, p, grid);
    for (int i = 0; i < 128; ++i) CHECK(rhs[i] < 0.0);
}

TEST_CASE("mean density bounds and the thermal value") {
    const auto grid = MomentumGrid::make(256);
    PopulationState s;
    s.rho = Eigen::VectorXd::Zero(256);
    CHECK(mean_density(s) == 0.0);
    s.rho = Eigen::VectorXd::Ones(256);
    CHECK(mean_density(s) == doctest::Approx(1.0).epsilon(1e-15));

    const double g = 0.9, beta = 25.0;
    const auto fd = fermi_dirac_state(g, beta, grid);
    const double n_fd = mean_density(fd);
    const double n_th = thermal_density_exact(g, beta, grid);
    // Boltzmann vs Fermi statistics differ at relative order e^{-beta(1-g)}
    CHECK(std::abs(n_fd / n_th - 1.0) < 2.0 * std::exp(-beta * (1.0 - g)));
}

TEST_CASE("fixed-field relaxation reaches the stationary density from any start") {
    const auto p = make_params(0.06, 25.0, 512);
    const auto grid = MomentumGrid::make(512);
    const double g = 0.9;
    const auto fd = fermi_dirac_state(g, p.beta, grid);
    const double n_target = mean_density(fd);
    const double rate = 2.0 * recombination_rate_exact(g, p, grid) *
                        thermal_density_exact(g, p.beta, grid);
    const double horizon = 16.0 / rate;

    PopulationState empty;
    empty.g = g;
    empty.rho = Eigen::VectorXd::Zero(512);
    const auto from_empty = evolve_at_fixed_g(empty, horizon, p, grid);
    CHECK(std::abs(mean_density(from_empty.state) - n_target) < 1e-6);

    auto hot = fermi_dirac_state(1.05, p.beta, grid);  // overpopulated start
    hot.g = g;
    const auto from_hot = evolve_at_fixed_g(hot, horizon, p, grid);
    CHECK(std::abs(mean_density(from_hot.state) - n_target) < 1e-6);
    CHECK(from_empty.clip_events == 0);
    CHECK(from_hot.clip_events == 0);
}

TEST_CASE("shape relaxation rate equals the kernel gap over tau_r") {
    const auto p = make_params(0.06, 50.0, 512);
    const auto grid = MomentumGrid::make(512);
    const double g = 0.5;
    const int n = grid.size();
    const double k_th = std::sqrt((1.0 - g) / (p.beta * g));

    // Maxwell background with an even shape distortion, zero net density change
    Eigen::VectorXd maxwell(n), rho(n);
    for (int i = 0; i < n; ++i)
        maxwell[i] = std::exp(-p.beta * (dispersion(g, grid.momenta[i]) - (1.0 - g)));
    for (int i = 0; i < n; ++i) {
        const double u = std::pow(grid.momenta[i] / k_th, 2);
        // smooth even distortion at small amplitude: the spectrum above the
        // gap is continuous, so the fit must start late and stay above the
        // recombination-slaved floor
        rho[i] = 1e-5 * maxwell[i] * (1.0 + 0.3 * (1.0 - u) * std::exp(-0.25 * u));
    }
    PopulationState state;
    state.g = g;
    state.rho = rho;

    auto shape_norm = [&](const Eigen::VectorXd& r) {
        const double c = r.sum() / maxwell.sum();
        return (r - c * maxwell).norm();
    };

    const double tau_r_inv = momentum_relaxation_rate(g, p);
    const double gap_time = 1.0 / (3.27 * tau_r_inv);
    const double t_settle = 4.0 * gap_time, t_fit = 2.7 * gap_time;
    auto mid = evolve_at_fixed_g(state, t_settle, p, grid);
    const double a0 = shape_norm(mid.state.rho);
    const auto end = evolve_at_fixed_g(mid.state, t_fit, p, grid);
    const double a1 = shape_norm(end.state.rho);
    const double measured = std::log(a0 / a1) / t_fit;

    const auto spec = kernel_spectrum(400, 6.0);
    const double predicted = -spec.eigenvalues[1] * tau_r_inv;
    CHECK(measured == doctest::Approx(predicted).epsilon(0.10));
}

TEST_CASE("annealing run preserves bounds and the momentum symmetry") {
    const auto p = make_params(0.06, 25.0, 256);
    const auto grid = MomentumGrid::make(256);
    Schedule schedule{1.1, 2e-5, 0.95};
    const auto result = evolve(fermi_dirac_state(1.1, p.beta, grid), schedule, p, grid);
    CHECK(result.clip_events == 0);
    CHECK(result.steps > 0);
    result.trajectory.validate();
    const auto& rho = result.state.rho;
    for (int i = 0; i < 128; ++i) {
        CHECK(rho[i] == rho[255 - i]);  // exact mirror symmetry
        CHECK(rho[i] >= 0.0);
        CHECK(rho[i] <= 1.0);
    }
    CHECK(result.state.g == doctest::Approx(0.95).epsilon(1e-9));
}

TEST_CASE("an asymmetric initial state takes the general path and still relaxes") {
    const auto p = make_params(0.06, 20.0, 128);
    const auto grid = MomentumGrid::make(128);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(0.0, 6e-3);
    PopulationState state;
    state.g = 0.9;
    state.rho = Eigen::VectorXd::Zero(128);
    for (int i = 0; i < 128; ++i) state.rho[i] = dist(rng);

    const auto out = evolve_at_fixed_g(state, 3e5, p, grid);
    const auto fd = fermi_dirac_state(0.9, p.beta, grid);
    CHECK((out.state.rho - fd.rho).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("relative entropy against the stationary state never increases") {
    const auto p = make_params(0.06, 25.0, 256);
    const auto grid = MomentumGrid::make(256);
    const auto fd = fermi_dirac_state(0.9, p.beta, grid);
    PopulationState state;
    state.g = 0.9;
    state.rho = Eigen::VectorXd::Constant(256, 5e-3);

    double kl_prev = fermi_kl_divergence(state.rho, fd.rho);
    for (int seg = 0; seg < 6; ++seg) {
        const auto out = evolve_at_fixed_g(state, 2e4, p, grid);
        state = out.state;
        const double kl = fermi_kl_divergence(state.rho, fd.rho);
        CHECK(kl <= kl_prev * (1.0 + 1e-10) + 1e-15);
        kl_prev = kl;
    }
}

TEST_CASE("collision-integral mean reduces to the generation-recombination law") {
    const auto p = make_params(0.06, 25.0, 512);
    const auto grid = MomentumGrid::make(512);
    const double g = 0.88;  // beta(1-g) = 3
    const double n_th = thermal_density_exact(g, p.beta, grid);
    const double w = recombination_rate_exact(g, p, grid);
    const auto table = build_rate_table(g, p, grid);

    for (double scale : {0.3, 2.0, 3.0}) {
        PopulationState state;
        state.g = g;
        state.rho.resize(512);
        for (int i = 0; i < 512; ++i)
            state.rho[i] = scale * std::exp(-p.beta * dispersion(g, grid.momenta[i]));
        const double n = mean_density(state);
        const double dn_dt = qbe_rhs(state, table).mean();
        const double reduced = -w * (n * n - n_th * n_th);
        CHECK(dn_dt == doctest::Approx(reduced).epsilon(0.2));
    }
}

TEST_CASE("schedule validation and the collision-duration warning") {
    Schedule bad{0.9, 1e-5, 1.0};
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    Schedule zero{1.2, 0.0, 0.8};
    CHECK_THROWS_AS(zero.validate(), std::domain_error);

    const auto p = make_params(0.06, 25.0, 64);
    const auto grid = MomentumGrid::make(64);
    qakin_test::WarningCapture warnings;
    Schedule fast{1.05, 0.5, 1.0};  // v > 2/beta
    evolve(fermi_dirac_state(1.05, p.beta, grid), fast, p, grid);
    CHECK(warnings.any_contains("collision-duration"));
}
