#pragma once

#include <optional>
#include <vector>

#include "qakin/model.hpp"
#include "qakin/rates.hpp"
#include "qakin/trajectory.hpp"

namespace qakin {

/// Selects exact band sums or the closed-form asymptotics for w(g), n_th(g).
enum class RateSource { exact, asymptotic };

struct IntegrateOptions {
    double rtol = 1e-10;
    double atol = 1e-18;
    double sample_dg = 1e-3;   ///< trajectory sampling interval in g
    double mesh_dg = 2e-3;     ///< g mesh for the exact-source tabulation
    double k_order = 1.0;      ///< order-unity constant in the crossover condition
    bool locate_crossover = true;
};

struct IntegrationResult {
    DensityTrajectory trajectory;
    std::optional<double> g_star_event;  ///< root of n = k w/D on the trajectory
};

/// Solves the generation-recombination equation dn/dt = -w(g)(n^2 - n_th(g)^2)
/// along g(t) = g_initial - v t, starting from n(0) = n_th(g_initial).
IntegrationResult integrate_density(const Schedule& schedule, const ModelParams& params,
                                    RateSource source, const MomentumGrid* grid = nullptr,
                                    const IntegrateOptions& options = {});

/// Onset field g0 from beta^{-1} w(g0) n_th(g0) = v.  Throws solver_error with
/// bracketing diagnostics when no root exists.
double solve_g0(double v, const ModelParams& params, RateSource source = RateSource::asymptotic,
                const MomentumGrid* grid = nullptr);

/// Frozen-density law n(g) = n_th(g0) / (beta log(g0/g)) for g < g0.
double log_law_density(double g, double g0, const ModelParams& params);

/// mu = c_D beta^2 / (8 alpha^2 k sqrt(2 pi^3)).
double mu_parameter(const ModelParams& params, double k_order = 1.0,
                    double c_d = diffusion_constant_cd);

// Scaled crossover system (distances x = beta(1-g) from the critical point):
//   v_scaled = sqrt(x0) e^{-x0}            (freeze-out condition)
//   mu sqrt(x0) e^{-x0} = x*^{3/2}(x*-x0)  (diffusion-limited crossover)
//   n_scaled = x*^{3/2}
double scaled_rate_from_x0(double x0);
double x0_from_scaled_rate(double v_scaled);
double x_star_from_x0(double x0, double mu);

/// Conversion between the physical annealing rate and the scaled rate
/// v_scaled = beta^3 v / (4 sqrt(2 pi) alpha).
double scale_rate(double v, const ModelParams& params);
double unscale_rate(double v_scaled, const ModelParams& params);

struct CrossoverReport {
    double g0 = 0.0;               ///< onset field (scaled route)
    double g_star = 0.0;           ///< crossover field
    double x0 = 0.0;
    double x_star = 0.0;
    double n_star = 0.0;           ///< k w(g*)/D(g*)
    double n_star_log_route = 0.0; ///< frozen-density law evaluated at g*
    double mu = 0.0;
    double k_order = 1.0;
    bool valid = false;            ///< x*-x0 >= 1 and beta > x*
};

/// Solves the freeze-out and crossover conditions for a given annealing rate.
/// Throws solver_error when the scaled equations have no root.
CrossoverReport solve_crossover(double v, const ModelParams& params, double k_order = 1.0);

struct OptimumReport {
    double x_opt = 0.0;
    double n_opt = 0.0;
    double v_opt = 0.0;          ///< freeze-out condition at x0 = x_opt - 1
    double v_opt_closed = 0.0;   ///< closed-form cross-check
    double mu = 0.0;
    double x_star_minimized = 0.0;  ///< argmin of the numerically swept n*(v)
    double v_opt_minimized = 0.0;
};

OptimumReport optimum(const ModelParams& params, double k_order = 1.0);

struct ScaledPoint {
    double v_scaled, n_scaled, x0, x_star;
    bool valid;
};
struct ScaledCurve {
    double log_mu;
    std::vector<ScaledPoint> points;
};

/// Families of scaled crossover curves n*(v) for the given values of ln(mu).
/// With an empty grid each curve is sampled over two decades around its
/// own minimum.
std::vector<ScaledCurve> scaled_curves(const std::vector<double>& log_mu_values,
                                       const std::vector<double>& v_scaled_grid = {});

struct KzComparison {
    double v_kz = 0.0;   ///< 8 pi n_target^2
    double ratio = 0.0;  ///< v_opt / v_kz
    bool regime_ok = false;
};

/// Compares the optimal rate with the closed-system Kibble-Zurek rate that
/// would yield the same density.  Warns when the ratio is not > 1.
KzComparison kz_comparison(const ModelParams& params, double n_target, double k_order = 1.0);

/// Classical Glauber annealing time 1/(8 pi w_G n^2) to reach density n.
double glauber_time(double n, double w_g);

}  // namespace qakin
