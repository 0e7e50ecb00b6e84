#include "qakin/trajectory.hpp"

#include <stdexcept>

namespace qakin {

void Schedule::validate() const {
    if (!(v > 0.0)) throw std::domain_error("Schedule: annealing rate v must be > 0");
    if (!(g_initial > g_final)) throw std::domain_error("Schedule: g_initial must exceed g_final");
    if (!(g_final >= 0.0)) throw std::domain_error("Schedule: g_final must be >= 0");
}

void DensityTrajectory::validate() const {
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].n_mean < 0.0)
            throw std::domain_error("DensityTrajectory: negative density sample");
        if (i > 0) {
            if (!(samples[i].t > samples[i - 1].t))
                throw std::domain_error("DensityTrajectory: time not strictly increasing");
            if (!(samples[i].g < samples[i - 1].g))
                throw std::domain_error("DensityTrajectory: field not strictly decreasing");
        }
    }
}

}  // namespace qakin
