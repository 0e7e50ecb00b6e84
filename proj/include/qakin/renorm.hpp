#pragma once

#include <vector>

#include "qakin/model.hpp"

namespace qakin {

struct RenormFactor {
    double w = 0.0;       ///< W = 2 alpha log(omega_c/omega_cutoff), 0 outside the broadband case
    double factor = 1.0;  ///< e^{-W}, multiplies the Ising energy J
};

/// High-frequency polaron bookkeeping: renormalization of the Ising coupling
/// by bosons above the cutoff.  Warns when W is not small.
RenormFactor ising_renorm_factor(double alpha, double omega_c, double omega_cutoff);

struct PrincipalValueOptions {
    double abs_tol = 1e-11;
    double rel_tol = 1e-10;
    /// Half-width (in the scaled frequency w/omega_c) of the interval split
    /// out around each pole; the subtracted integrand is regular, so results
    /// are insensitive to this choice.
    double exclusion_halfwidth = 0.05;
};

/// Second-order polaronic shift Sigma_k (scaled energy; physical shift 2J Sigma_k),
/// principal-value frequency integral with zero-temperature bosons.
double polaron_shift(double g, double k, const ModelParams& params, const MomentumGrid& grid,
                     const PrincipalValueOptions& options = {});

/// Coupling-induced pair-mixing amplitude Sigma^{(c)}_k (magnitude; the pure
/// phase from the coupling is dropped).
double mixing_term(double g, double k, const ModelParams& params, const MomentumGrid& grid,
                   const PrincipalValueOptions& options = {});

struct LinearSpectrumFit {
    double sigma0 = 0.0;        ///< extrapolated Sigma_{k->0}
    double slope_c = 0.0;       ///< coefficient of eps_k
    double max_residual = 0.0;  ///< worst absolute deviation from the fit
    double range = 0.0;         ///< spread of Sigma over the window
    int n_points = 0;
};

/// Least-squares fit Sigma_k ~ sigma0 + C eps_k over momenta with eps_k below
/// the window.  Throws when fewer than 8 grid points fall in the window.
LinearSpectrumFit linear_spectrum_fit(double g, const ModelParams& params,
                                      const MomentumGrid& grid, double eps_window,
                                      const PrincipalValueOptions& options = {});

struct RenormResult {
    std::vector<double> k, eps, sigma, sigma_mix;
    double sigma0 = 0.0;
    double slope_c = 0.0;
};

/// Sigma_k and Sigma^{(c)}_k sampled over n_k positive momenta (for export).
RenormResult renorm_scan(double g, const ModelParams& params, const MomentumGrid& grid,
                         int n_k, const PrincipalValueOptions& options = {});

namespace detail {
/// v.p. integral_0^Lambda  w e^{-w/omega_c} / (a - w) dw evaluated by
/// singularity subtraction + adaptive quadrature (lambda_cut <= 0 means the
/// upper limit is infinite).  Exposed for cross-checking against the
/// closed-form route in tests.
double pv_frequency_integral(double a, double omega_c, double lambda_cut,
                             const PrincipalValueOptions& options);
/// Same integral through exponential-integral identities (independent route).
double pv_frequency_integral_closed(double a, double omega_c, double lambda_cut);
}  // namespace detail

}  // namespace qakin
