// Command-line front end. Talks to the library exclusively through the
// C interface in poolsim.h; vendored CLI11/json headers are used for
// argument parsing and report assembly only.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "poolsim.h"

using nlohmann::json;

namespace {

struct GlobalOptions {
    std::uint64_t seed = 42;
    std::uint32_t workers = 1;
    std::string out_dir;
    std::string format = "csv";
    bool strict = false;
};

int exit_for(ps_status st) {
    switch (st) {
        case PS_OK: return 0;
        case PS_ERR_INVALID_ARGUMENT:
        case PS_ERR_DOMAIN:
        case PS_ERR_PARSE: return 3;
        case PS_ERR_NO_CONVERGE: return 4;
        default: return 1;
    }
}

int report_error(ps_status st) {
    std::cerr << "error: " << ps_last_error() << "\n";
    return exit_for(st);
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Owns one run's file outputs and the manifest describing them.
struct OutputSink {
    std::string dir;
    std::vector<std::string> files;

    bool enabled() const { return !dir.empty(); }

    bool write(const std::string& name, const std::string& content) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) {
            std::cerr << "error: cannot create " << dir << ": " << ec.message() << "\n";
            return false;
        }
        std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
        out << content;
        if (!out) {
            std::cerr << "error: cannot write " << name << " in " << dir << "\n";
            return false;
        }
        files.push_back(name);
        return true;
    }

    bool finish(const std::string& command, const json& parameters) {
        if (!enabled()) return true;
        json manifest = {
            {"tool", "poolsim"},
            {"version", ps_version()},
            {"command", command},
            {"parameters", parameters},
            {"outputs", files},
        };
        json copy = manifest;  // manifest lists itself
        copy["outputs"].push_back("manifest.json");
        return write("manifest.json", copy.dump(2) + "\n");
    }
};

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

// Prints to stdout and optionally persists; returns the process exit code.
int deliver(OutputSink& sink, const std::string& command, const json& params,
            const std::string& name, const std::string& content, int code) {
    std::cout << content;
    if (sink.enabled()) {
        if (!sink.write(name, content)) return 1;
        if (!sink.finish(command, params)) return 1;
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mining-pool payout machines: closed forms, Monte Carlo, and strategy solver"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand name

    GlobalOptions g;
    app.add_option("--seed", g.seed, "Master RNG seed")->capture_default_str();
    app.add_option("--workers", g.workers, "Worker threads (affects speed, never results)")
        ->capture_default_str();
    app.add_option("--out-dir", g.out_dir, "Directory for result files plus manifest.json");
    app.add_option("--format", g.format, "Stdout format for tabular results")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_flag("--strict", g.strict, "Exit 4 when a solve misses its convergence tolerance");

    // Shared population/pool parameters.
    double alpha = 0.2, beta = 0.5, gamma = 0.3, D = 25.0;
    std::uint32_t N = 50, miners = 2, k = 0;

    auto add_population = [&](CLI::App* cmd) {
        cmd->add_option("--alpha", alpha, "Observed miner's hash share")->capture_default_str();
        cmd->add_option("--beta", beta, "Rest-of-pool hash share")->capture_default_str();
        cmd->add_option("--gamma", gamma, "Non-pool hash share")->capture_default_str();
        cmd->add_option("-D,--difficulty", D, "Expected shares per block")->capture_default_str();
        cmd->add_option("-N,--capacity", N, "Payout window capacity")->capture_default_str();
    };

    CLI::App* analyze = app.add_subcommand("analyze", "Closed-form report for one parameter set");
    add_population(analyze);
    analyze->add_option("--miners", miners, "Pool miner count for state-space tallies")
        ->capture_default_str();

    CLI::App* threshold =
        app.add_subcommand("threshold", "Two-turn hoard-vs-honest revenue comparison");
    add_population(threshold);
    threshold->add_option("-k,--own-shares", k, "Shares already held in the unordered window")
        ->capture_default_str();

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo experiments");
    simulate->require_subcommand(1);
    std::string protocol = "rpplns";
    std::uint32_t queue_capacity = 0;
    std::uint64_t turns = 200000, burn_in = 1000;
    std::uint32_t trials = 8;
    auto add_sim = [&](CLI::App* cmd) {
        add_population(cmd);
        cmd->add_option("--protocol", protocol, "pplns, rpplns, or queuebag")
            ->check(CLI::IsMember({"pplns", "rpplns", "queuebag"}))
            ->capture_default_str();
        cmd->add_option("--queue-capacity", queue_capacity,
                        "Ordered prefix size for the queuebag protocol")
            ->capture_default_str();
        cmd->add_option("--turns", turns, "Turns per trial, burn-in included")
            ->capture_default_str();
        cmd->add_option("--burn-in", burn_in, "Warm-up turns excluded from measurement")
            ->capture_default_str();
        cmd->add_option("--trials", trials, "Independent repetitions")->capture_default_str();
    };
    CLI::App* sim_honest =
        simulate->add_subcommand("honest", "Per-share reward mean and variance");
    add_sim(sim_honest);
    CLI::App* sim_steady =
        simulate->add_subcommand("steady", "Window occupancy versus the binomial law");
    add_sim(sim_steady);
    CLI::App* sim_lifetime =
        simulate->add_subcommand("lifetime", "Share displacement-count moments");
    add_sim(sim_lifetime);

    CLI::App* solve = app.add_subcommand("solve", "Value iteration over the strategic lattice");
    std::uint32_t k_max = 150;
    std::string terminal_rule = "reward_jump";
    bool literal_publish = false;
    double tol = 1e-4;
    std::uint32_t ic_level = 0;
    add_population(solve);
    solve->add_option("--k-max", k_max, "Number of layers")->capture_default_str();
    solve->add_option("--terminal-rule", terminal_rule, "Behavior at the share cap")
        ->check(CLI::IsMember({"reward_jump", "publish_at_cap"}))
        ->capture_default_str();
    solve->add_flag("--literal-publish", literal_publish,
                    "Publishing a share keeps the pre-publication count in the other branch");
    solve->add_option("--tol", tol, "Convergence tolerance on the per-layer rate")
        ->capture_default_str();
    solve->add_option("--ic-level", ic_level, "Window level l for the deviation checks")
        ->capture_default_str();
    bool dump_table = false;
    solve->add_flag("--table", dump_table, "Write the full value table (requires --out-dir)");

    CLI::App* sweep = app.add_subcommand("sweep", "Classify regimes across the hash simplex");
    double grid_step = 0.1;
    std::vector<double> fractions{0.05, 0.5, 0.95};
    sweep->add_option("-N,--capacity", N, "Payout window capacity")->capture_default_str();
    sweep->add_option("-D,--difficulty", D, "Expected shares per block")->capture_default_str();
    sweep->add_option("--k-max", k_max, "Number of layers")->capture_default_str();
    sweep->add_option("--grid-step", grid_step, "Simplex lattice spacing")->capture_default_str();
    sweep->add_option("--fraction", fractions, "Window fill fractions F to classify")
        ->capture_default_str();
    sweep->add_option("--terminal-rule", terminal_rule, "Behavior at the share cap")
        ->check(CLI::IsMember({"reward_jump", "publish_at_cap"}))
        ->capture_default_str();
    sweep->add_option("--tol", tol, "Convergence tolerance on the per-layer rate")
        ->capture_default_str();

    CLI::App* hop = app.add_subcommand("hop", "Finite-horizon two-pool hopping experiment");
    double n1 = 40, d1 = 20, beta1 = 0.45;
    double n2 = 60, d2 = 30, beta2 = 0.45;
    double hop_alpha = 0.1, horizon = 200.0, residual1 = 10.0, residual2 = 6.0;
    std::uint32_t hop_trials = 400;
    std::vector<std::string> schedule_files;
    hop->add_option("--n1", n1, "Pool 1 window capacity")->capture_default_str();
    hop->add_option("--d1", d1, "Pool 1 difficulty")->capture_default_str();
    hop->add_option("--beta1", beta1, "Pool 1 honest hash share")->capture_default_str();
    hop->add_option("--n2", n2, "Pool 2 window capacity")->capture_default_str();
    hop->add_option("--d2", d2, "Pool 2 difficulty")->capture_default_str();
    hop->add_option("--beta2", beta2, "Pool 2 honest hash share")->capture_default_str();
    hop->add_option("--alpha", hop_alpha, "Hopper hash share")->capture_default_str();
    hop->add_option("--horizon", horizon, "Active mining horizon in block-time units")
        ->capture_default_str();
    hop->add_option("--residual1", residual1, "Hopper shares preloaded in pool 1's window")
        ->capture_default_str();
    hop->add_option("--residual2", residual2, "Hopper shares preloaded in pool 2's window")
        ->capture_default_str();
    hop->add_option("--trials", hop_trials, "Independent repetitions")->capture_default_str();
    hop->add_option("--schedule", schedule_files,
                    "Schedule file of pool-2 intervals, one 'start end' pair per line; "
                    "repeatable, default is all time in pool 1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    OutputSink sink;
    sink.dir = g.out_dir;

    // ---- analyze / threshold ----

    if (analyze->parsed()) {
        ps_params p{alpha, beta, gamma, D, N, miners};
        char* text = nullptr;
        ps_status st = ps_analyze(&p, &text);
        if (st != PS_OK) return report_error(st);
        std::string body = std::string(text) + "\n";
        ps_string_free(text);
        json params = {{"alpha", alpha}, {"beta", beta},     {"gamma", gamma}, {"D", D},
                       {"N", N},         {"miners", miners}, {"seed", g.seed}};
        return deliver(sink, "analyze", params, "analysis.json", body, 0);
    }

    if (threshold->parsed()) {
        ps_params p{alpha, beta, gamma, D, N, miners};
        char* text = nullptr;
        ps_status st = ps_threshold_report(&p, k, &text);
        if (st != PS_OK) return report_error(st);
        std::string body = std::string(text) + "\n";
        ps_string_free(text);
        json params = {{"alpha", alpha}, {"beta", beta}, {"gamma", gamma},
                       {"D", D},         {"N", N},       {"k", k},
                       {"seed", g.seed}};
        return deliver(sink, "threshold", params, "threshold.json", body, 0);
    }

    // ---- simulate ----

    if (simulate->parsed()) {
        ps_sim_config cfg{};
        cfg.protocol = protocol.c_str();
        cfg.queue_capacity = queue_capacity;
        cfg.alpha = alpha;
        cfg.beta = beta;
        cfg.gamma = gamma;
        cfg.D = D;
        cfg.N = N;
        cfg.turns = turns;
        cfg.burn_in = burn_in;
        cfg.trials = trials;
        cfg.seed = g.seed;
        cfg.workers = g.workers;
        json params = {{"protocol", protocol}, {"queue_capacity", queue_capacity},
                       {"alpha", alpha},       {"beta", beta},
                       {"gamma", gamma},       {"D", D},
                       {"N", N},               {"turns", turns},
                       {"burn_in", burn_in},   {"trials", trials},
                       {"seed", g.seed}};

        if (sim_honest->parsed()) {
            ps_reward_stats st{};
            ps_status rc = ps_simulate_honest(&cfg, &st);
            if (rc != PS_OK) return report_error(rc);
            std::string body;
            if (g.format == "json") {
                json out = {{"mean", st.mean},
                            {"variance", st.variance},
                            {"stderr_mean", st.stderr_mean},
                            {"payout_mean", st.payout_mean},
                            {"payout_variance", st.payout_variance},
                            {"measured_turns", st.measured_turns},
                            {"trials", st.trials}};
                body = out.dump(2) + "\n";
            } else {
                body = "mean,variance,stderr_mean,payout_mean,payout_variance,measured_turns,"
                       "trials\n";
                body += fmt_double(st.mean) + "," + fmt_double(st.variance) + ","
                        + fmt_double(st.stderr_mean) + "," + fmt_double(st.payout_mean) + ","
                        + fmt_double(st.payout_variance) + ","
                        + std::to_string(st.measured_turns) + "," + std::to_string(st.trials)
                        + "\n";
            }
            std::string name = g.format == "json" ? "stats.json" : "stats.csv";
            return deliver(sink, "simulate honest", params, name, body, 0);
        }

        if (sim_steady->parsed()) {
            ps_steady_stats st{};
            char* occupancy = nullptr;
            ps_status rc = ps_simulate_steady(&cfg, &st, &occupancy);
            if (rc != PS_OK) return report_error(rc);
            std::string occ = occupancy ? occupancy : "";
            ps_string_free(occupancy);
            json out = {{"tv_distance", st.tv_distance}, {"samples", st.samples}};
            std::cout << out.dump(2) << "\n";
            if (sink.enabled()) {
                if (!sink.write("steady.json", out.dump(2) + "\n")) return 1;
                if (!sink.write("occupancy.csv", occ)) return 1;
                if (!sink.finish("simulate steady", params)) return 1;
            } else {
                std::cout << occ;
            }
            return 0;
        }

        if (sim_lifetime->parsed()) {
            ps_lifetime_stats st{};
            ps_status rc = ps_simulate_lifetime(&cfg, &st);
            if (rc != PS_OK) return report_error(rc);
            std::string body;
            if (g.format == "json") {
                json out = {{"mean_z", st.mean_z},
                            {"mean_z_sq", st.mean_z_sq},
                            {"survival_rate", st.survival_rate},
                            {"samples", st.samples}};
                body = out.dump(2) + "\n";
            } else {
                body = "mean_z,mean_z_sq,survival_rate,samples\n";
                body += fmt_double(st.mean_z) + "," + fmt_double(st.mean_z_sq) + ","
                        + fmt_double(st.survival_rate) + "," + std::to_string(st.samples) + "\n";
            }
            std::string name = g.format == "json" ? "lifetime.json" : "lifetime.csv";
            return deliver(sink, "simulate lifetime", params, name, body, 0);
        }
    }

    // ---- solve ----

    if (solve->parsed()) {
        ps_solver_config cfg{};
        cfg.N = N;
        cfg.D = D;
        cfg.alpha = alpha;
        cfg.beta = beta;
        cfg.gamma = gamma;
        cfg.k_max = k_max;
        cfg.terminal_rule = terminal_rule == "reward_jump" ? PS_REWARD_JUMP : PS_PUBLISH_AT_CAP;
        cfg.literal_publish_rule = literal_publish ? 1 : 0;
        cfg.convergence_tol = tol;
        ps_solver* solver = nullptr;
        ps_status rc = ps_solve(&cfg, &solver);
        if (rc != PS_OK) return report_error(rc);
        int converged = 0;
        double gap = 0.0;
        ps_solver_convergence(solver, &converged, &gap);
        double origin = 0.0;
        ps_solver_value(solver, 0, 0, 0, &origin);
        int share_ic = 0, block_ic = 0;
        rc = ps_solver_share_ic(solver, ic_level, &share_ic);
        if (rc != PS_OK) {
            ps_solver_destroy(solver);
            return report_error(rc);
        }
        rc = ps_solver_block_ic(solver, ic_level, &block_ic);
        if (rc != PS_OK) {
            ps_solver_destroy(solver);
            return report_error(rc);
        }
        json out = {{"converged", converged != 0},
                    {"convergence_gap", gap},
                    {"value_origin", origin},
                    {"ic_level", ic_level},
                    {"share_ic", share_ic != 0},
                    {"block_ic", block_ic != 0}};
        std::cout << out.dump(2) << "\n";
        int code = 0;
        if (sink.enabled()) {
            json params = {{"alpha", alpha},
                           {"beta", beta},
                           {"gamma", gamma},
                           {"D", D},
                           {"N", N},
                           {"k_max", k_max},
                           {"terminal_rule", terminal_rule},
                           {"literal_publish", literal_publish},
                           {"tol", tol},
                           {"seed", g.seed}};
            bool ok = sink.write("solve.json", out.dump(2) + "\n");
            if (ok && dump_table) {
                char* table = nullptr;
                rc = ps_solver_table_json(solver, &table);
                if (rc != PS_OK) {
                    ps_solver_destroy(solver);
                    return report_error(rc);
                }
                ok = sink.write("table.json", std::string(table) + "\n");
                ps_string_free(table);
            }
            if (ok) ok = sink.finish("solve", params);
            if (!ok) code = 1;
        } else if (dump_table) {
            std::cerr << "error: --table requires --out-dir\n";
            code = 2;
        }
        ps_solver_destroy(solver);
        if (code == 0 && g.strict && !converged) {
            std::cerr << "error: convergence gap " << fmt_double(gap) << " exceeds tolerance "
                      << fmt_double(tol) << "\n";
            return 4;
        }
        return code;
    }

    // ---- sweep ----

    if (sweep->parsed()) {
        ps_sweep_config cfg{};
        cfg.N = N;
        cfg.D = D;
        cfg.k_max = k_max;
        cfg.grid_step = grid_step;
        cfg.pool_fractions = fractions.data();
        cfg.num_fractions = static_cast<std::uint32_t>(fractions.size());
        cfg.terminal_rule = terminal_rule == "reward_jump" ? PS_REWARD_JUMP : PS_PUBLISH_AT_CAP;
        cfg.literal_publish_rule = 0;
        cfg.convergence_tol = tol;
        cfg.workers = g.workers;
        int all_converged = 0;
        char* csv = nullptr;
        ps_status rc = ps_sweep_csv(&cfg, &all_converged, &csv);
        if (rc != PS_OK) return report_error(rc);
        std::string body = csv ? csv : "";
        ps_string_free(csv);
        json params = {{"N", N},
                       {"D", D},
                       {"k_max", k_max},
                       {"grid_step", grid_step},
                       {"fractions", fractions},
                       {"terminal_rule", terminal_rule},
                       {"tol", tol},
                       {"seed", g.seed}};
        int code = deliver(sink, "sweep", params, "sweep.csv", body, 0);
        if (code == 0 && g.strict && !all_converged) {
            std::cerr << "error: at least one sweep point missed the convergence tolerance\n";
            return 4;
        }
        return code;
    }

    // ---- hop ----

    if (hop->parsed()) {
        struct NamedSchedule {
            std::string name;
            std::vector<double> intervals;
        };
        std::vector<NamedSchedule> schedules;
        if (schedule_files.empty()) {
            schedules.push_back({"baseline", {}});
        } else {
            for (const std::string& path : schedule_files) {
                std::string text;
                if (!read_file(path, text)) {
                    std::cerr << "error: cannot read schedule file " << path << "\n";
                    return 3;
                }
                double* intervals = nullptr;
                std::uint32_t count = 0;
                ps_status rc = ps_schedule_parse(text.c_str(), horizon, &intervals, &count);
                if (rc != PS_OK) {
                    std::cerr << "error: " << path << ": " << ps_last_error() << "\n";
                    return exit_for(rc);
                }
                NamedSchedule ns;
                ns.name = std::filesystem::path(path).stem().string();
                ns.intervals.assign(intervals, intervals + 2 * static_cast<std::size_t>(count));
                ps_buffer_free(intervals);
                schedules.push_back(std::move(ns));
            }
        }

        std::string body = "schedule,estimate,ci_low,ci_high,analytic,analytic_exact,trials\n";
        json rows = json::array();
        for (const NamedSchedule& ns : schedules) {
            ps_hop_config cfg{};
            cfg.pool1 = {static_cast<std::uint32_t>(n1), d1, beta1};
            cfg.pool2 = {static_cast<std::uint32_t>(n2), d2, beta2};
            cfg.alpha = hop_alpha;
            cfg.horizon = horizon;
            cfg.intervals = ns.intervals.empty() ? nullptr : ns.intervals.data();
            cfg.num_intervals = static_cast<std::uint32_t>(ns.intervals.size() / 2);
            cfg.residual1 = residual1;
            cfg.residual2 = residual2;
            cfg.trials = hop_trials;
            cfg.seed = g.seed;
            cfg.workers = g.workers;
            ps_hop_stats st{};
            ps_status rc = ps_hop_run(&cfg, &st);
            if (rc != PS_OK) {
                std::cerr << "error: schedule " << ns.name << ": " << ps_last_error() << "\n";
                return exit_for(rc);
            }
            body += ns.name + "," + fmt_double(st.estimate) + "," + fmt_double(st.ci_low) + ","
                    + fmt_double(st.ci_high) + "," + fmt_double(st.analytic) + ","
                    + fmt_double(st.analytic_exact) + "," + std::to_string(st.trials) + "\n";
            rows.push_back({{"schedule", ns.name},
                            {"estimate", st.estimate},
                            {"ci_low", st.ci_low},
                            {"ci_high", st.ci_high},
                            {"analytic", st.analytic},
                            {"analytic_exact", st.analytic_exact},
                            {"trials", st.trials}});
        }
        if (g.format == "json") body = rows.dump(2) + "\n";
        json params = {{"pool1", {{"N", n1}, {"D", d1}, {"beta", beta1}}},
                       {"pool2", {{"N", n2}, {"D", d2}, {"beta", beta2}}},
                       {"alpha", hop_alpha},
                       {"horizon", horizon},
                       {"residual1", residual1},
                       {"residual2", residual2},
                       {"trials", hop_trials},
                       {"schedules", schedule_files},
                       {"seed", g.seed}};
        std::string name = g.format == "json" ? "hopping.json" : "hopping.csv";
        return deliver(sink, "hop", params, name, body, 0);
    }

    return 0;
}
