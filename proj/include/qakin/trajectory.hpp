#pragma once

#include <vector>

namespace qakin {

/// Linear annealing schedule g(t) = g_initial - v t down to g_final.
struct Schedule {
    double g_initial = 1.2;
    double v = 2.85e-7;   ///< |dg/dt|, units J/hbar
    double g_final = 0.8;

    void validate() const;
    double g_at(double t) const { return g_initial - v * t; }
    double duration() const { return (g_initial - g_final) / v; }
};

struct TrajectorySample {
    double t;          ///< time, units hbar/J
    double g;          ///< transverse field
    double n_mean;     ///< mean excitation density
    double n_th;       ///< thermal density from the active rate source
    double n_th_asym;  ///< closed-form thermal density
};

/// Time series of an annealing run; t strictly increasing, g strictly
/// decreasing, n_mean >= 0.
struct DensityTrajectory {
    std::vector<TrajectorySample> samples;
    Schedule schedule;

    void validate() const;
};

}  // namespace qakin
