#include "qakin/stochastic.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qakin/rates.hpp"
#include "qakin/rng.hpp"
#include "qakin/threads.hpp"

namespace qakin {

RateHooks constant_hooks(double hop, double reaction) {
    if (!(hop > 0.0) || reaction < 0.0)
        throw std::domain_error("constant_hooks: need hop > 0 and reaction >= 0");
    RateHooks hooks;
    hooks.hop_rate = [hop](double) { return hop; };
    hooks.reaction_rate = [reaction](double) { return reaction; };
    hooks.hop_bound = hop;
    hooks.reaction_bound = reaction;
    return hooks;
}

RateHooks model_schedule_hooks(const ModelParams& params, double g_start, double v,
                               double horizon) {
    if (!(g_start > 0.0 && g_start < 1.0))
        throw std::domain_error("model_schedule_hooks: g_start must lie in (0,1)");
    if (!(g_start - v * horizon > 0.0))
        throw std::domain_error("model_schedule_hooks: schedule reaches g <= 0 inside the horizon");
    RateHooks hooks;
    hooks.hop_rate = [params, g_start, v](double t) {
        return 2.0 * diffusion_closed(g_start - v * t, params);
    };
    hooks.reaction_rate = [params, g_start, v](double t) {
        return 8.0 * std::numbers::pi * params.alpha / (params.beta * (g_start - v * t));
    };
    hooks.hop_bound = hooks.hop_rate(0.0);              // D decreases as g falls
    hooks.reaction_bound = hooks.reaction_rate(horizon);  // w grows as g falls
    return hooks;
}

namespace {

struct Replica {
    std::vector<double> density_at_sample;
};

// One independent continuous-time realization; all randomness comes from a
// single per-replica stream, so the event sequence is reproducible bit for bit.
Replica run_replica(int length, double initial_density, const RateHooks& hooks,
                    std::uint64_t seed, std::uint64_t stream, double horizon,
                    const std::vector<double>& sample_times) {
    Xoshiro256 rng(seed, stream);
    std::vector<std::int32_t> site(length, -1);
    std::vector<std::int32_t> pos;
    const int target = static_cast<int>(std::lround(initial_density * length));
    pos.reserve(target);
    while (static_cast<int>(pos.size()) < target) {
        const auto s = static_cast<std::int32_t>(rng.below(length));
        if (site[s] >= 0) continue;
        site[s] = static_cast<std::int32_t>(pos.size());
        pos.push_back(s);
    }

    Replica rep;
    rep.density_at_sample.resize(sample_times.size());
    std::size_t next_sample = 0;
    double t = 0.0;
    auto flush_samples = [&](double up_to) {
        while (next_sample < sample_times.size() && sample_times[next_sample] <= up_to) {
            rep.density_at_sample[next_sample] =
                static_cast<double>(pos.size()) / static_cast<double>(length);
            ++next_sample;
        }
    };

    auto remove_particle = [&](std::int32_t index) {
        const std::int32_t last = static_cast<std::int32_t>(pos.size()) - 1;
        site[pos[index]] = -1;
        if (index != last) {
            pos[index] = pos[last];
            site[pos[index]] = index;
        }
        pos.pop_back();
    };

    while (!pos.empty()) {
        const double envelope = static_cast<double>(pos.size()) * hooks.hop_bound;
        t += rng.exponential(envelope);
        if (t >= horizon) break;
        flush_samples(t);

        const double hop = hooks.hop_rate(t);
        if (hop > hooks.hop_bound * (1.0 + 1e-12))
            throw solver_error("kmc: hop_rate exceeded its declared bound at t = " + std::to_string(t));
        if (rng.uniform() * hooks.hop_bound >= hop) continue;  // thinning

        const auto index = static_cast<std::int32_t>(rng.below(pos.size()));
        const std::int32_t from = pos[index];
        const int dir = (rng.next() & 1ull) ? 1 : -1;
        std::int32_t to = from + dir;
        if (to < 0) to += length;
        if (to >= length) to -= length;

        if (site[to] < 0) {
            site[from] = -1;
            site[to] = index;
            pos[index] = to;
            continue;
        }
        const double reaction = hooks.reaction_rate(t);
        if (reaction > hooks.reaction_bound * (1.0 + 1e-12))
            throw solver_error("kmc: reaction_rate exceeded its declared bound at t = " +
                               std::to_string(t));
        if (reaction > hop * (1.0 + 1e-12))
            throw solver_error("kmc: reaction_rate exceeds hop_rate; contact probability > 1");
        if (rng.uniform() * hop < reaction) {
            const std::int32_t other = site[to];
            // remove the higher slot first so the other index stays valid
            remove_particle(std::max(index, other));
            remove_particle(std::min(index, other));
        }
    }
    flush_samples(horizon);
    return rep;
}

}  // namespace

std::vector<SeriesPoint> kmc_time_dependent(int length, double initial_density,
                                            const RateHooks& hooks, std::uint64_t seed,
                                            double horizon, int n_replicas,
                                            const std::vector<double>& sample_times) {
    if (length < 8) throw std::domain_error("kmc: length too small");
    if (!(initial_density > 0.0 && initial_density <= 0.5))
        throw std::domain_error("kmc: initial_density must lie in (0, 0.5]");
    if (n_replicas < 1) throw std::domain_error("kmc: need at least one replica");
    if (!hooks.hop_rate || !hooks.reaction_rate || !(hooks.hop_bound > 0.0))
        throw std::domain_error("kmc: incomplete rate hooks");
    if (sample_times.empty() || !std::is_sorted(sample_times.begin(), sample_times.end()))
        throw std::domain_error("kmc: sample times must be sorted and nonempty");

    std::vector<Replica> replicas(n_replicas);
    parallel_for(n_replicas, [&](int r) {
        replicas[r] = run_replica(length, initial_density, hooks, seed,
                                  static_cast<std::uint64_t>(r), horizon, sample_times);
    });

    std::vector<SeriesPoint> series(sample_times.size());
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        double mean = 0.0;
        for (const auto& rep : replicas) mean += rep.density_at_sample[i];
        mean /= n_replicas;
        double var = 0.0;
        for (const auto& rep : replicas) {
            const double d = rep.density_at_sample[i] - mean;
            var += d * d;
        }
        const double stderr_n =
            n_replicas > 1 ? std::sqrt(var / (static_cast<double>(n_replicas) *
                                              (n_replicas - 1)))
                           : 0.0;
        series[i] = SeriesPoint{sample_times[i], mean, stderr_n, n_replicas};
    }
    return series;
}

std::vector<SeriesPoint> glauber_kink_mc(int length, double initial_density, double w_g,
                                         std::uint64_t seed, double horizon, int n_replicas,
                                         const std::vector<double>& sample_times) {
    if (!(w_g > 0.0)) throw std::domain_error("glauber_kink_mc: w_g must be > 0");
    // hop rate w_g to each neighbor; collisions always annihilate
    return kmc_time_dependent(length, initial_density, constant_hooks(2.0 * w_g, 2.0 * w_g),
                              seed, horizon, n_replicas, sample_times);
}

double diffusion_length(double t, double tau, const RateHooks& hooks) {
    if (!(t >= tau)) throw std::domain_error("diffusion_length: requires t >= tau");
    if (t == tau) return 0.0;
    double err = 0.0;
    const double integral = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        [&](double s) { return 0.5 * hooks.hop_rate(s); }, tau, t, 12, 1e-10, &err);
    return std::sqrt(4.0 * integral);
}

TouchingResult touching_crossover(const RateHooks& hooks,
                                  const std::function<double(double)>& density_law,
                                  double horizon) {
    auto d_of = [&](double t) { return 0.5 * hooks.hop_rate(t); };
    auto dl2_dt = [&](double t) {
        const double h = 1e-5 * std::max(1.0, t);
        const double nl = density_law(std::max(t - h, 0.0));
        const double nr = density_law(t + h);
        const double tl = std::max(t - h, 0.0);
        return (1.0 / (nr * nr) - 1.0 / (nl * nl)) / (t + h - tl);
    };
    auto slope_gap = [&](double t) { return 4.0 * d_of(t) - dl2_dt(t); };

    // locate the touching time: diffusion outruns the gap early, loses later
    const int scan = 400;
    double t_prev = horizon * 1e-6;
    double f_prev = slope_gap(t_prev);
    if (f_prev <= 0.0)
        throw solver_error("touching_crossover: diffusion is already slower than the gap growth "
                           "at the start of the horizon");
    double t_touch = -1.0;
    for (int i = 1; i <= scan; ++i) {
        const double t = horizon * i / scan;
        const double f = slope_gap(t);
        if (f_prev > 0.0 && f <= 0.0) {
            auto tol = [](double a, double b) { return std::abs(b - a) < 1e-12 * std::max(1.0, b); };
            std::uintmax_t it = 100;
            auto r = boost::math::tools::toms748_solve(slope_gap, t_prev, t, tol, it);
            t_touch = 0.5 * (r.first + r.second);
            break;
        }
        t_prev = t;
        f_prev = f;
    }
    if (t_touch < 0.0) {
        // With a frozen gap the slope condition is only met asymptotically;
        // accept the horizon end as the touching time once the diffusion rate
        // has genuinely decayed, otherwise diffusion stayed fast throughout.
        if (d_of(horizon) > 0.02 * d_of(horizon * 1e-6))
            throw solver_error("touching_crossover: no tangency; diffusion stays fast over the horizon");
        t_touch = horizon;
    }

    const double n_touch = density_law(t_touch);
    const double gap2 = 1.0 / (n_touch * n_touch);
    auto area = [&](double tau) {
        const double ld = diffusion_length(t_touch, tau, hooks);
        return ld * ld - gap2;
    };
    if (area(0.0) < 0.0)
        throw solver_error("touching_crossover: diffusion never covers the inter-particle gap");
    auto tol = [](double a, double b) { return std::abs(b - a) < 1e-12 * std::max(1.0, b); };
    std::uintmax_t it = 100;
    auto r = boost::math::tools::toms748_solve(area, 0.0, t_touch, tol, it);

    TouchingResult res;
    res.tau_star = 0.5 * (r.first + r.second);
    res.t_touch = t_touch;
    res.n_star = density_law(res.tau_star);
    return res;
}

}  // namespace qakin
