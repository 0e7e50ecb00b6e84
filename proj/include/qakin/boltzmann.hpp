#pragma once

#include <Eigen/Dense>

#include "qakin/model.hpp"
#include "qakin/rates.hpp"
#include "qakin/trajectory.hpp"

namespace qakin {

/// Per-momentum occupations rho_k aligned with a MomentumGrid.
struct PopulationState {
    Eigen::VectorXd rho;
    double t = 0.0;
    double g = 1.0;
};

/// Thermal Fermi-Dirac occupations 1/(e^{beta eps_k} + 1) at field g.
PopulationState fermi_dirac_state(double g, double beta, const MomentumGrid& grid);

double mean_density(const PopulationState& state);

/// Collision integral of the uniform quantum Boltzmann equation:
///   drho_k/dt = sum_q [W^{+-}_{qk}(1-rho_k)rho_q - W^{+-}_{kq}rho_k(1-rho_q)]
///             + sum_q [W^{--}_{kq}(1-rho_k)(1-rho_q) - W^{++}_{kq}rho_k rho_q]
Eigen::VectorXd qbe_rhs(const PopulationState& state, const RateTable& table);
Eigen::VectorXd qbe_rhs(const PopulationState& state, const ModelParams& params,
                        const MomentumGrid& grid);

struct EvolveOptions {
    double rtol = 1e-8;
    double atol = 1e-16;
    int output_stride = 25;       ///< record every Nth accepted step
    double table_spacing = 3e-3;  ///< g mesh for rate-table interpolation
    double initial_step = 0.0;    ///< 0 -> automatic
};

struct EvolveResult {
    DensityTrajectory trajectory;
    PopulationState state;   ///< final state
    long clip_events = 0;    ///< excursions beyond [0,1] by more than 1e-12
    long steps = 0;
    long rejected = 0;
};

/// Integrates the QBE along a linear schedule.  The stiff collision operator
/// is handled by a linearly implicit two-stage Rosenbrock step with the
/// analytic Jacobian; rate tables are interpolated from a precomputed g mesh.
/// States symmetric under k -> -k take an exactly symmetry-preserving folded
/// path.  Throws solver_error on step-size underflow.
EvolveResult evolve(const PopulationState& initial, const Schedule& schedule,
                    const ModelParams& params, const MomentumGrid& grid,
                    const EvolveOptions& options = {});

/// Same integrator at fixed transverse field, for relaxation studies.
EvolveResult evolve_at_fixed_g(const PopulationState& initial, double duration,
                               const ModelParams& params, const MomentumGrid& grid,
                               const EvolveOptions& options = {});

}  // namespace qakin
