#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qakin/model.hpp"
#include "qakin/trajectory.hpp"

namespace qakin {

/// Time-dependent rates for the lattice simulations.  hop_rate(t) is the total
/// per-particle jump rate Gamma(t) (half to each neighbor), so the walker
/// diffusion coefficient is D(t) = Gamma(t)/2 at lattice spacing 1.
/// reaction_rate(t) is the pair-annihilation rate of an adjacent pair; on a
/// hop attempt into an occupied site the pair annihilates with probability
/// reaction_rate/hop_rate.  The declared bounds are envelopes over the
/// simulated horizon; a hook exceeding its bound is a hard error.
struct RateHooks {
    std::function<double(double)> hop_rate;
    std::function<double(double)> reaction_rate;
    double hop_bound = 0.0;
    double reaction_bound = 0.0;
};

RateHooks constant_hooks(double hop, double reaction);

/// Hooks mimicking the annealing model on the ferromagnetic side: the hop
/// rate tracks 2 D(g(t)) with D from the closed-form diffusion coefficient
/// (a (t0+t)^{-3/2}-type falloff) and the reaction rate tracks the
/// recombination rate w(g(t)).
RateHooks model_schedule_hooks(const ModelParams& params, double g_start, double v,
                               double horizon);

struct SeriesPoint {
    double t;
    double n_mean;
    double n_stderr;
    int n_replicas;
};

/// Continuous-time kinetic Monte Carlo for hard-core walkers with pairwise
/// annihilation, time-dependent rates handled by thinning against the
/// declared envelopes.  Returns the ensemble-averaged density at the given
/// sample times.  Identical (seed, length, hooks) give bitwise-identical
/// per-replica event sequences.
std::vector<SeriesPoint> kmc_time_dependent(int length, double initial_density,
                                            const RateHooks& hooks, std::uint64_t seed,
                                            double horizon, int n_replicas,
                                            const std::vector<double>& sample_times);

/// Classical Glauber kink dynamics: random walkers at hop rate w_g per
/// neighbor annihilating on collision.  Thin wrapper over the KMC engine with
/// constant rates and unit contact probability.
std::vector<SeriesPoint> glauber_kink_mc(int length, double initial_density, double w_g,
                                         std::uint64_t seed, double horizon, int n_replicas,
                                         const std::vector<double>& sample_times);

/// Diffusion length l_D(t, tau) = sqrt(4 int_tau^t D(t') dt').
double diffusion_length(double t, double tau, const RateHooks& hooks);

struct TouchingResult {
    double tau_star = 0.0;  ///< last instant from which diffusion still covers the gap
    double t_touch = 0.0;   ///< time where the curves touch
    double n_star = 0.0;    ///< density_law(tau_star)
};

/// Solves the tangency condition d(l_D^2)/dt = d(l^2)/dt, l(t) = 1/n(t),
/// for the critical starting instant.  Throws solver_error when diffusion
/// stays fast over the whole horizon (no tangency).
TouchingResult touching_crossover(const RateHooks& hooks,
                                  const std::function<double(double)>& density_law,
                                  double horizon);

}  // namespace qakin
