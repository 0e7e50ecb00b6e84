// Command-line driver: parameter sweeps and figure-data reproduction for the
// environment-mediated annealing kinetics library.  All quantities are in
// reduced units (hbar = J = 1, beta = 2J/k_BT, rates and times in J/hbar).

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "qakin/analysis.hpp"
#include "qakin/boltzmann.hpp"
#include "qakin/csv.hpp"
#include "qakin/model.hpp"
#include "qakin/renorm.hpp"
#include "qakin/stochastic.hpp"

namespace {

namespace fs = std::filesystem;
using namespace qakin;

struct CliConfig {
    ModelParams params;
    double v = 2.85e-7;
    std::vector<double> v_list;
    double g_init = 1.2;
    double g_final = 0.4;
    double g = 0.95;
    double k_order = 1.0;
    std::string rate_source = "exact";
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    std::vector<double> log_mu = {8.0, 9.0, 10.0, 11.0};
    // kmc
    std::string hooks = "constant";
    double hop = 1.0;
    double react = 1.0;
    int length = 4096;
    double density = 0.5;
    double horizon = 400.0;
    int replicas = 32;
    int n_k = 48;
};

RateSource parse_source(const std::string& name) {
    if (name == "exact") return RateSource::exact;
    if (name == "asymptotic") return RateSource::asymptotic;
    throw CLI::ValidationError("--rate-source must be 'exact' or 'asymptotic'");
}

fs::path ensure_out_dir(const CliConfig& cfg) {
    fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory " + dir.string());
    return dir;
}

void print_kv(const std::string& key, double value) {
    std::cout << key << "=" << format_double(value) << "\n";
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return out;
}

int cmd_fig1a(const CliConfig& cfg) {
    const fs::path dir = ensure_out_dir(cfg);
    Schedule schedule{cfg.g_init, cfg.v, cfg.g_final};
    schedule.validate();
    const RateSource source = parse_source(cfg.rate_source);
    const MomentumGrid grid = MomentumGrid::make(cfg.params.n_sites);

    IntegrateOptions opt;
    opt.k_order = cfg.k_order;
    const auto run = integrate_density(schedule, cfg.params, source,
                                       source == RateSource::exact ? &grid : nullptr, opt);
    CsvFile csv("fig1a/1", {"g", "n_mean", "n_th"});
    for (const auto& s : run.trajectory.samples) csv.add_row({s.g, s.n_mean, s.n_th});
    csv.write(dir / "fig1a.csv");

    const double g0 = solve_g0(cfg.v, cfg.params, source,
                               source == RateSource::exact ? &grid : nullptr);
    const auto report = solve_crossover(cfg.v, cfg.params, cfg.k_order);
    print_kv("g0", g0);
    print_kv("g_star", report.g_star);
    if (run.g_star_event) print_kv("g_star_event", *run.g_star_event);
    print_kv("x0", report.x0);
    print_kv("x_star", report.x_star);
    print_kv("n_star", report.n_star);
    print_kv("mu", report.mu);
    print_kv("valid", report.valid ? 1.0 : 0.0);
    std::cout << "csv=" << (dir / "fig1a.csv").string() << "\n";
    return 0;
}

int cmd_fig1b(const CliConfig& cfg) {
    const fs::path dir = ensure_out_dir(cfg);
    const auto curves = scaled_curves(cfg.log_mu);
    CsvFile csv("fig1b/1", {"log_mu", "v_scaled", "n_scaled", "valid_flag"});
    for (const auto& curve : curves)
        for (const auto& p : curve.points)
            csv.add_row({curve.log_mu, p.v_scaled, p.n_scaled, p.valid ? 1.0 : 0.0});
    csv.write(dir / "fig1b.csv");
    for (const auto& curve : curves) {
        double best = 1e300, v_at = 0.0;
        for (const auto& p : curve.points)
            if (p.n_scaled < best) { best = p.n_scaled; v_at = p.v_scaled; }
        std::cout << "log_mu=" << format_double(curve.log_mu)
                  << " n_scaled_min=" << format_double(best)
                  << " v_scaled_at_min=" << format_double(v_at) << "\n";
    }
    std::cout << "csv=" << (dir / "fig1b.csv").string() << "\n";
    return 0;
}

int cmd_sweep(const CliConfig& cfg) {
    const fs::path dir = ensure_out_dir(cfg);
    std::vector<double> rates = cfg.v_list;
    if (rates.empty()) {
        const auto opt = optimum(cfg.params, cfg.k_order);
        rates = log_spaced(opt.v_opt / 10.0, opt.v_opt * 10.0, 25);
    }
    CsvFile csv("sweep/1", {"v", "v_scaled", "g0", "g_star", "x0", "x_star", "n_star", "valid"});
    for (double v : rates) {
        const auto rep = solve_crossover(v, cfg.params, cfg.k_order);
        csv.add_row({v, scale_rate(v, cfg.params), rep.g0, rep.g_star, rep.x0, rep.x_star,
                     rep.n_star, rep.valid ? 1.0 : 0.0});
    }
    csv.write(dir / "sweep.csv");
    print_kv("n_rates", static_cast<double>(rates.size()));
    std::cout << "csv=" << (dir / "sweep.csv").string() << "\n";
    return 0;
}

int cmd_qbe(const CliConfig& cfg) {
    const fs::path dir = ensure_out_dir(cfg);
    Schedule schedule{cfg.g_init, cfg.v, cfg.g_final};
    schedule.validate();
    const MomentumGrid grid = MomentumGrid::make(cfg.params.n_sites);
    const auto result = evolve(fermi_dirac_state(cfg.g_init, cfg.params.beta, grid),
                               schedule, cfg.params, grid);
    CsvFile csv("qbe/1", {"t", "g", "n_mean", "n_th_exact", "n_th_asym"});
    for (const auto& s : result.trajectory.samples)
        csv.add_row({s.t, s.g, s.n_mean, s.n_th, s.n_th_asym});
    csv.write(dir / "qbe.csv");

    double g_depart = 0.0;  // first g < 1 where the density exceeds twice n_th
    for (const auto& s : result.trajectory.samples)
        if (s.g < 1.0 && s.n_mean > 2.0 * s.n_th) { g_depart = s.g; break; }
    print_kv("n_final", mean_density(result.state));
    print_kv("g_depart", g_depart);
    print_kv("g0_reference", solve_g0(cfg.v, cfg.params));
    print_kv("clip_events", static_cast<double>(result.clip_events));
    print_kv("steps", static_cast<double>(result.steps));
    std::cout << "csv=" << (dir / "qbe.csv").string() << "\n";
    return 0;
}

int cmd_kmc(const CliConfig& cfg) {
    const fs::path dir = ensure_out_dir(cfg);
    RateHooks hooks;
    if (cfg.hooks == "constant") {
        hooks = constant_hooks(cfg.hop, cfg.react);
    } else if (cfg.hooks == "model_g_schedule") {
        hooks = model_schedule_hooks(cfg.params, cfg.g, cfg.v, cfg.horizon);
    } else {
        throw CLI::ValidationError("--hooks must be 'constant' or 'model_g_schedule'");
    }
    const auto times = log_spaced(std::max(1e-3 * cfg.horizon, 1e-6), cfg.horizon, 60);
    const auto series = kmc_time_dependent(cfg.length, cfg.density, hooks, cfg.seed,
                                           cfg.horizon, cfg.replicas, times);
    CsvFile csv("kmc/1", {"t", "n_mean", "n_stderr", "n_replicas"});
    for (const auto& p : series)
        csv.add_row({p.t, p.n_mean, p.n_stderr, static_cast<double>(p.n_replicas)});
    csv.write(dir / "kmc.csv");
    print_kv("n_final", series.back().n_mean);
    std::cout << "csv=" << (dir / "kmc.csv").string() << "\n";
    return 0;
}

int cmd_renorm(const CliConfig& cfg) {
    const fs::path dir = ensure_out_dir(cfg);
    const MomentumGrid grid = MomentumGrid::make(cfg.params.n_sites);
    const auto scan = renorm_scan(cfg.g, cfg.params, grid, cfg.n_k);
    CsvFile csv("renorm/1", {"k", "eps_k", "sigma", "sigma_mix"});
    for (std::size_t i = 0; i < scan.k.size(); ++i)
        csv.add_row({scan.k[i], scan.eps[i], scan.sigma[i], scan.sigma_mix[i]});
    csv.write(dir / "renorm.csv");
    print_kv("sigma0", scan.sigma0);
    print_kv("slope_C", scan.slope_c);
    const auto rf = ising_renorm_factor(cfg.params.alpha, cfg.params.omega_c, cfg.params.omega_cutoff);
    print_kv("polaron_W", rf.w);
    print_kv("ising_factor", rf.factor);
    std::cout << "csv=" << (dir / "renorm.csv").string() << "\n";
    return 0;
}

int cmd_optimum(const CliConfig& cfg) {
    const auto opt = optimum(cfg.params, cfg.k_order);
    print_kv("mu", opt.mu);
    print_kv("x_opt", opt.x_opt);
    print_kv("n_opt", opt.n_opt);
    print_kv("v_opt", opt.v_opt);
    print_kv("v_opt_closed", opt.v_opt_closed);
    print_kv("v_opt_minimized", opt.v_opt_minimized);
    print_kv("x_star_minimized", opt.x_star_minimized);
    const auto kz = kz_comparison(cfg.params, opt.n_opt, cfg.k_order);
    print_kv("v_kz", kz.v_kz);
    print_kv("ratio_v_kz", kz.ratio);
    print_kv("t_class_times_v_opt", glauber_time(opt.n_opt, 1.0) * opt.v_opt);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kinetics of environment-mediated quantum annealing in the transverse-field "
                 "Ising chain (reduced units: hbar = J = 1, beta = 2J/k_BT)"};
    app.require_subcommand(1);
    app.set_config("--config", "", "plain key = value configuration file");

    CliConfig cfg;
    auto add_common = [&](CLI::App* sub, bool with_schedule) {
        sub->add_option("--alpha", cfg.params.alpha, "Ohmic coupling strength (dimensionless)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--beta", cfg.params.beta, "inverse temperature 2J/k_BT")
            ->check(CLI::PositiveNumber);
        sub->add_option("--n-sites", cfg.params.n_sites, "momentum grid size N (even)");
        sub->add_option("--omega-c", cfg.params.omega_c, "bath cutoff frequency (units 2J/hbar)");
        sub->add_option("--omega-cutoff", cfg.params.omega_cutoff,
                        "polaron cutoff frequency (units 2J/hbar)");
        sub->add_option("--k-order", cfg.k_order, "order-unity crossover constant k");
        sub->add_option("--seed", cfg.seed, "64-bit RNG seed");
        sub->add_option("--out", cfg.out_dir, "output directory");
        if (with_schedule) {
            sub->add_option("--v", cfg.v, "annealing rate |dg/dt| (units J/hbar)")
                ->check(CLI::PositiveNumber);
            sub->add_option("--g-init", cfg.g_init, "initial transverse field");
            sub->add_option("--g-final", cfg.g_final, "final transverse field");
            sub->add_option("--rate-source", cfg.rate_source,
                            "'exact' band sums or 'asymptotic' closed forms");
        }
    };

    auto* fig1a = app.add_subcommand("fig1a", "density vs field for the default annealing run");
    add_common(fig1a, true);
    auto* fig1b = app.add_subcommand("fig1b", "scaled crossover-density curves");
    add_common(fig1b, false);
    fig1b->add_option("--log-mu", cfg.log_mu, "ln(mu) values (repeatable)");
    auto* sweep = app.add_subcommand("sweep", "crossover reports over a set of annealing rates");
    add_common(sweep, false);
    sweep->add_option("--v", cfg.v_list, "annealing rates (units J/hbar, repeatable)");
    auto* qbe = app.add_subcommand("qbe", "momentum-resolved Boltzmann evolution");
    add_common(qbe, true);
    auto* kmc = app.add_subcommand("kmc", "stochastic lattice annihilation");
    add_common(kmc, false);
    kmc->add_option("--hooks", cfg.hooks, "'constant' or 'model_g_schedule'");
    kmc->add_option("--hop", cfg.hop, "total per-particle hop rate (constant hooks)");
    kmc->add_option("--react", cfg.react, "pair annihilation rate on contact (constant hooks)");
    kmc->add_option("--g", cfg.g, "starting field g < 1 (model hooks)");
    kmc->add_option("--v", cfg.v, "annealing rate (model hooks)");
    kmc->add_option("--length", cfg.length, "lattice length L");
    kmc->add_option("--density", cfg.density, "initial walker density");
    kmc->add_option("--horizon", cfg.horizon, "simulated time horizon (units hbar/J)");
    kmc->add_option("--replicas", cfg.replicas, "independent seeds to average");
    auto* renorm = app.add_subcommand("renorm", "polaronic spectrum renormalization scan");
    add_common(renorm, false);
    renorm->add_option("--g", cfg.g, "transverse field for the scan");
    renorm->add_option("--n-k", cfg.n_k, "number of sampled momenta");
    auto* opt_cmd = app.add_subcommand("optimum", "optimal annealing rate and density");
    add_common(opt_cmd, false);

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.params.validate();
        if (fig1a->parsed()) return cmd_fig1a(cfg);
        if (fig1b->parsed()) return cmd_fig1b(cfg);
        if (sweep->parsed()) return cmd_sweep(cfg);
        if (qbe->parsed()) return cmd_qbe(cfg);
        if (kmc->parsed()) return cmd_kmc(cfg);
        if (renorm->parsed()) return cmd_renorm(cfg);
        if (opt_cmd->parsed()) return cmd_optimum(cfg);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const solver_error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
