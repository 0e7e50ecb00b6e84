#pragma once

#include <Eigen/Dense>

#include "qakin/model.hpp"

namespace qakin {

/// Band index for interband/intraband processes.
enum class Band : int { minus = -1, plus = +1 };

/// Bose occupation 1/(e^{beta*omega} - 1); omega is a scaled frequency in
/// units 2J/hbar so that hbar*omega/k_BT = beta*omega.  Defined for
/// omega < 0 by analytic continuation, singular at omega = 0.
double bose_occupation(double omega, double beta);

/// Continuous emission/absorption weight h(W) = W (nbar(W)+1) = W/(1-e^{-beta W}),
/// extended with h(0) = 1/beta.  Strictly positive; h(-W) = e^{-beta W} h(W).
double emission_weight(double omega, double beta);

struct CouplingCoeffs {
    double c;  ///< 2 cos[(theta_k + theta_k')/2]
    double s;  ///< sin[(theta_k + theta_k')/2] (phase dropped)
};

/// Spin-boson coupling matrix elements before the 1/sqrt(N) factor.
CouplingCoeffs coupling_coeffs(double g, double k, double kp);

/// Golden-rule transition rate W^{mu nu}_{kq}, in units J/hbar per mode pair:
///   W = (4 pi alpha / N) h(mu eps_k + nu eps_q) [1 - mu nu cos(mu theta_k - nu theta_q)]
/// The physical frequency is 2J(mu eps_k + nu eps_q)/hbar; its 2J/hbar scale
/// is absorbed into the prefactor so that rates, the recombination rate w(g)
/// and the relaxation rate 1/tau_r all live in the same J/hbar unit system.
double transition_rate(Band mu, Band nu, double g, double k, double q, const ModelParams& params);

/// Full-grid rate tables W[k][q] for the three channels (+-, --, ++).
struct RateTable {
    double g = 0.0;
    Eigen::MatrixXd intra;     ///< W^{+-}_{kq}: scattering k -> q
    Eigen::MatrixXd pair_gen;  ///< W^{--}_{kq}: pair creation
    Eigen::MatrixXd pair_rec;  ///< W^{++}_{kq}: pair annihilation
};

RateTable build_rate_table(double g, const ModelParams& params, const MomentumGrid& grid);

/// Momentum relaxation rate 1/tau_r = (4 alpha / beta) sqrt((1-g)/(beta g)), units J/hbar.
double momentum_relaxation_rate(double g, const ModelParams& params);

/// Recombination rate w(g) = sum_{kq} W^{++}_{kq} e^{-beta(eps_k+eps_q)} / (N n_th^2).
double recombination_rate_exact(double g, const ModelParams& params, const MomentumGrid& grid);

/// Closed form w(g) = 8 pi alpha / (beta g), valid for beta >> 1-g, 1/g.
double recombination_rate_asymptotic(double g, const ModelParams& params);

/// Reference diffusion constant from the closed-form coefficient.
inline constexpr double diffusion_constant_cd = 0.17;

/// Closed-form diffusion coefficient D = c_D (sqrt(beta)/alpha) (g/(1-g))^{3/2}.
double diffusion_closed(double g, const ModelParams& params, double c_d = diffusion_constant_cd);

struct DiffusionQuadrature {
    double d = 0.0;          ///< diffusion coefficient
    double c_d = 0.0;        ///< extracted constant D * alpha (1-g)^{3/2} / (sqrt(beta) g^{3/2})
    double abs_error = 0.0;  ///< quadrature error estimate on D
};

/// First-principles D from the nested quadrature over the semiclassical band:
/// inner 1/tau_s(k) = int dq w0(k->q), outer Maxwell-weighted average of
/// tau_s(k) (dE/dk)^2.  Throws solver_error if the quadrature fails to meet
/// the requested tolerances.
DiffusionQuadrature diffusion_quadrature(double g, const ModelParams& params,
                                         double inner_tol = 1e-9, double outer_tol = 1e-8);

}  // namespace qakin
