#include "qakin/boltzmann.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <string>

namespace qakin {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double ros_gamma = 1.7071067811865476;  // 1 + 1/sqrt(2), L-stable

double stable_fermi(double x) {
    // 1/(e^x + 1) without overflow
    if (x >= 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    const double e = std::exp(x);
    return 1.0 / (1.0 + e);
}

// Rate tables reduced to the matvec form used by the integrator:
//   u  = gain*rho + gen*(1-rho)         -> u = (gain - gen)*rho + gen_row
//   w  = loss*(1-rho) + rec*rho         -> w = loss_row - (loss - rec)*rho
//   drho/dt = (1-rho) u - rho w
struct SystemTables {
    Eigen::MatrixXd u1;       // gain - gen
    Eigen::MatrixXd u2;       // loss - rec
    Eigen::VectorXd gen_row;  // gen * 1
    Eigen::VectorXd loss_row; // loss * 1
};

void fill_tables(SystemTables& out, double g, const ModelParams& params,
                 const std::vector<double>& momenta, bool folded) {
    const int m = static_cast<int>(momenta.size());
    const int n_sites = params.n_sites;
    Eigen::VectorXd eps(m), cth(m), sth(m);
    for (int i = 0; i < m; ++i) {
        eps[i] = dispersion(g, momenta[i]);
        const double th = bogoliubov_angle(g, momenta[i]);
        cth[i] = std::cos(th);
        sth[i] = std::sin(th);
    }
    const double pref = 4.0 * pi * params.alpha / n_sites;
    Eigen::MatrixXd gain(m, m), loss(m, m), gen(m, m), rec(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            double intra_ang, inter_ang;
            if (folded) {
                // sum over q = +-k_j collapses the angular factors
                intra_ang = 2.0 * (1.0 + cth[i] * cth[j]);
                inter_ang = 2.0 * (1.0 - cth[i] * cth[j]);
            } else {
                intra_ang = 1.0 + (cth[i] * cth[j] - sth[i] * sth[j]);
                inter_ang = 1.0 - (cth[i] * cth[j] + sth[i] * sth[j]);
            }
            loss(i, j) = pref * emission_weight(eps[i] - eps[j], params.beta) * intra_ang;
            gain(i, j) = pref * emission_weight(eps[j] - eps[i], params.beta) * intra_ang;
            rec(i, j) = pref * emission_weight(eps[i] + eps[j], params.beta) * inter_ang;
            gen(i, j) = pref * emission_weight(-eps[i] - eps[j], params.beta) * inter_ang;
        }
    }
    out.u1 = gain - gen;
    out.u2 = loss - rec;
    out.gen_row = gen.rowwise().sum();
    out.loss_row = loss.rowwise().sum();
}

class QbeIntegrator {
public:
    QbeIntegrator(const ModelParams& params, const MomentumGrid& grid,
                  std::vector<double> momenta, bool folded, const EvolveOptions& opt)
        : params_(params), grid_(grid), momenta_(std::move(momenta)), folded_(folded), opt_(opt) {
        const int m = static_cast<int>(momenta_.size());
        blend_.u1.resize(m, m);
        blend_.u2.resize(m, m);
        spacing_ = opt.table_spacing > 0.0 ? opt.table_spacing : 0.089 / params.beta;
    }

    // g(t) = g0 - v t; v = 0 runs at fixed field with an exact table.
    EvolveResult run(Eigen::VectorXd y, double g0, double v, double t_end,
                     const Schedule& schedule) {
        const int m = static_cast<int>(y.size());
        EvolveResult res;
        res.trajectory.schedule = schedule;

        double t = 0.0;
        double h = opt_.initial_step > 0.0 ? opt_.initial_step : 1.0;
        const double h_cap = v > 0.0 ? 0.5 * spacing_ / v : t_end / 4.0;
        h = std::min(h, h_cap);

        Eigen::VectorXd f0(m), f1(m), k1(m), k2(m), ytmp(m), ynew(m), err(m);
        Eigen::MatrixXd jac(m, m), iter(m, m);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu;
        double h_lu = -1.0, g_jac = -10.0;
        long steps_since_jac = 1000;

        record(res, t, g0, y);
        int rejects_in_row = 0;
        while (t < t_end) {
            h = std::min(h, t_end - t);
            const double g_now = g0 - v * t;
            blend_to(g_now);
            rhs(y, f0);

            const bool fresh_lu = (h != h_lu) || steps_since_jac >= 20 ||
                                  std::abs(g_now - g_jac) > 0.5 * spacing_ || rejects_in_row > 0;
            if (fresh_lu) {
                jacobian(y, f0, jac);
                iter = -ros_gamma * h * jac;
                iter.diagonal().array() += 1.0;
                lu.compute(iter);
                h_lu = h;
                g_jac = g_now;
                steps_since_jac = 0;
            }

            k1 = lu.solve(f0);
            ytmp = y + h * k1;
            if (v > 0.0) blend_to(g0 - v * (t + h));
            rhs(ytmp, f1);
            k2 = lu.solve(f1 - 2.0 * k1);
            ynew = y + h * (1.5 * k1 + 0.5 * k2);
            err = 0.5 * h * (k1 + k2);

            double norm = 0.0;
            for (int i = 0; i < m; ++i) {
                const double scale = opt_.atol + opt_.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                const double r = err[i] / scale;
                norm += r * r;
            }
            norm = std::sqrt(norm / m);

            if (norm <= 1.0) {
                t += h;
                y = ynew;
                for (int i = 0; i < m; ++i) {
                    if (y[i] < 0.0) {
                        if (y[i] < -1e-12) ++res.clip_events;
                        y[i] = 0.0;
                    } else if (y[i] > 1.0) {
                        if (y[i] > 1.0 + 1e-12) ++res.clip_events;
                        y[i] = 1.0;
                    }
                }
                ++res.steps;
                ++steps_since_jac;
                rejects_in_row = 0;
                if (res.steps % opt_.output_stride == 0 || t >= t_end)
                    record(res, t, g0 - v * t, y);
                const double fac = std::clamp(0.9 / std::sqrt(norm + 1e-14), 0.25, 4.0);
                if (fac < 0.95 || fac > 1.3) h = std::min(h * fac, h_cap);
            } else {
                ++res.rejected;
                if (++rejects_in_row > 60)
                    throw solver_error("evolve: step repeatedly rejected at t = " + std::to_string(t));
                h *= std::clamp(0.9 / std::sqrt(norm), 0.1, 0.5);
            }
            if (h < 1e-12 * std::max(1.0, t))
                throw solver_error("evolve: step-size underflow at t = " + std::to_string(t));
        }

        res.state.t = t;
        res.state.g = g0 - v * t;
        res.state.rho = unfold(y);
        return res;
    }

private:
    void rhs(const Eigen::VectorXd& y, Eigen::VectorXd& out) {
        u_ = blend_.u1 * y + blend_.gen_row;
        w_ = blend_.loss_row - blend_.u2 * y;
        out = ((1.0 - y.array()) * u_.array() - y.array() * w_.array()).matrix();
    }

    void jacobian(const Eigen::VectorXd& y, const Eigen::VectorXd&, Eigen::MatrixXd& jac) {
        // d rhs_i / d y_j = (1-y_i) u1_ij + y_i u2_ij - delta_ij (u_i + w_i)
        u_ = blend_.u1 * y + blend_.gen_row;
        w_ = blend_.loss_row - blend_.u2 * y;
        jac = (blend_.u1.array().colwise() * (1.0 - y.array())).matrix();
        jac += (blend_.u2.array().colwise() * y.array()).matrix();
        jac.diagonal() -= (u_ + w_);
    }

    const SystemTables& node(double g_node) {
        const long long key = std::llround(g_node / spacing_);
        auto it = nodes_.find(key);
        if (it == nodes_.end()) {
            auto tab = std::make_unique<SystemTables>();
            fill_tables(*tab, g_node, params_, momenta_, folded_);
            it = nodes_.emplace(key, std::move(tab)).first;
        }
        return *it->second;
    }

    void blend_to(double g) {
        if (g == g_blend_) return;
        if (fixed_g_) {
            fill_tables(blend_, g, params_, momenta_, folded_);
            g_blend_ = g;
            return;
        }
        const double lo = std::floor(g / spacing_) * spacing_;
        const SystemTables& a = node(lo);
        const SystemTables& b = node(lo + spacing_);
        const double s = (g - lo) / spacing_;
        blend_.u1 = (1.0 - s) * a.u1 + s * b.u1;
        blend_.u2 = (1.0 - s) * a.u2 + s * b.u2;
        blend_.gen_row = (1.0 - s) * a.gen_row + s * b.gen_row;
        blend_.loss_row = (1.0 - s) * a.loss_row + s * b.loss_row;
        g_blend_ = g;
    }

    Eigen::VectorXd unfold(const Eigen::VectorXd& y) const {
        if (!folded_) return y;
        const int m = static_cast<int>(y.size());
        Eigen::VectorXd full(2 * m);
        for (int i = 0; i < m; ++i) {
            full[m + i] = y[i];
            full[m - 1 - i] = y[i];
        }
        return full;
    }

    void record(EvolveResult& res, double t, double g, const Eigen::VectorXd& y) {
        const double factor = folded_ ? 2.0 : 1.0;
        TrajectorySample s;
        s.t = t;
        s.g = g;
        s.n_mean = factor * y.sum() / params_.n_sites;
        s.n_th = thermal_density_exact(g, params_.beta, grid_);
        s.n_th_asym = detail::thermal_density_closed(g, params_.beta);
        res.trajectory.samples.push_back(s);
    }

public:
    bool fixed_g_ = false;

private:
    const ModelParams& params_;
    const MomentumGrid& grid_;
    std::vector<double> momenta_;
    bool folded_;
    EvolveOptions opt_;
    double spacing_;
    double g_blend_ = -1e300;
    SystemTables blend_;
    Eigen::VectorXd u_, w_;
    std::map<long long, std::unique_ptr<SystemTables>> nodes_;
};

bool exactly_symmetric(const Eigen::VectorXd& rho) {
    const int n = static_cast<int>(rho.size());
    for (int i = 0; i < n / 2; ++i)
        if (rho[i] != rho[n - 1 - i]) return false;
    return true;
}

EvolveResult run_evolution(const PopulationState& initial, double g0, double v, double t_end,
                           const Schedule& schedule, const ModelParams& params,
                           const MomentumGrid& grid, const EvolveOptions& options, bool fixed_g) {
    if (initial.rho.size() != grid.size())
        throw std::domain_error("evolve: state size does not match the grid");
    if ((initial.rho.array() < 0.0).any() || (initial.rho.array() > 1.0).any())
        throw std::domain_error("evolve: occupations must lie in [0,1]");

    const int n = grid.size();
    const bool folded = exactly_symmetric(initial.rho);
    std::vector<double> momenta;
    Eigen::VectorXd y;
    if (folded) {
        momenta.assign(grid.momenta.begin() + n / 2, grid.momenta.end());
        y = initial.rho.segment(n / 2, n / 2);
    } else {
        momenta = grid.momenta;
        y = initial.rho;
    }
    QbeIntegrator integrator(params, grid, std::move(momenta), folded, options);
    integrator.fixed_g_ = fixed_g;
    return integrator.run(std::move(y), g0, v, t_end, schedule);
}

}  // namespace

PopulationState fermi_dirac_state(double g, double beta, const MomentumGrid& grid) {
    const int n = grid.size();
    PopulationState state;
    state.g = g;
    state.rho.resize(n);
    // fill positive momenta and mirror so the state is symmetric to the bit
    for (int i = n / 2; i < n; ++i) {
        const double f = stable_fermi(beta * dispersion(g, grid.momenta[i]));
        state.rho[i] = f;
        state.rho[n - 1 - i] = f;
    }
    return state;
}

double mean_density(const PopulationState& state) {
    return state.rho.sum() / static_cast<double>(state.rho.size());
}

Eigen::VectorXd qbe_rhs(const PopulationState& state, const RateTable& table) {
    const Eigen::VectorXd& rho = state.rho;
    const int n = static_cast<int>(rho.size());
    if (table.intra.rows() != n)
        throw std::domain_error("qbe_rhs: table and state sizes differ");
    Eigen::VectorXd one_minus = Eigen::VectorXd::Ones(n) - rho;
    Eigen::VectorXd gain = table.intra.transpose() * rho;          // sum_q W_{qk} rho_q
    Eigen::VectorXd loss = table.intra * one_minus;                // sum_q W_{kq} (1-rho_q)
    Eigen::VectorXd gen = table.pair_gen * one_minus;              // sum_q W^{--}_{kq}(1-rho_q)
    Eigen::VectorXd rec = table.pair_rec * rho;                    // sum_q W^{++}_{kq} rho_q
    return (one_minus.array() * (gain + gen).array() - rho.array() * (loss + rec).array()).matrix();
}

Eigen::VectorXd qbe_rhs(const PopulationState& state, const ModelParams& params,
                        const MomentumGrid& grid) {
    return qbe_rhs(state, build_rate_table(state.g, params, grid));
}

EvolveResult evolve(const PopulationState& initial, const Schedule& schedule,
                    const ModelParams& params, const MomentumGrid& grid,
                    const EvolveOptions& options) {
    schedule.validate();
    if (schedule.v >= 2.0 / params.beta)
        warn("evolve: annealing rate v exceeds the collision-duration bound 2/beta; "
             "the Boltzmann description is marginal");
    return run_evolution(initial, schedule.g_initial, schedule.v, schedule.duration(),
                         schedule, params, grid, options, false);
}

EvolveResult evolve_at_fixed_g(const PopulationState& initial, double duration,
                               const ModelParams& params, const MomentumGrid& grid,
                               const EvolveOptions& options) {
    if (!(duration > 0.0)) throw std::domain_error("evolve_at_fixed_g: duration must be > 0");
    Schedule pseudo;
    pseudo.g_initial = initial.g;
    pseudo.g_final = initial.g;
    pseudo.v = 0.0;
    return run_evolution(initial, initial.g, 0.0, duration, pseudo, params, grid, options, true);
}

}  // namespace qakin
