// C interface over the core library: handle management, error mapping,
// and the JSON/CSV report builders used by the command-line tool.

#include "poolsim.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "json.hpp"

#include "analytics.hpp"
#include "mining.hpp"
#include "protocol.hpp"
#include "sim.hpp"
#include "solver.hpp"

using nlohmann::json;

namespace {

thread_local std::string g_last_error = "no error";

ps_status fail(ps_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <typename Fn>
ps_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        return fail(PS_ERR_DOMAIN, e.what());
    } catch (const std::bad_alloc&) {
        return fail(PS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(PS_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(PS_ERR_INTERNAL, "unknown failure");
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

poolsim::Population to_population(double alpha, double beta, double gamma, double D) {
    poolsim::Population pop;
    pop.alpha = alpha;
    pop.beta = beta;
    pop.gamma = gamma;
    pop.D = D;
    pop.validate();
    return pop;
}

// Emits null instead of failing for report sections whose preconditions
// the given parameters do not meet.
template <typename Fn>
json section_or_null(Fn&& fn) {
    try {
        return fn();
    } catch (const std::invalid_argument&) {
        return nullptr;
    }
}

}  // namespace

extern "C" {

const char* ps_version(void) { return "1.0.0"; }

const char* ps_last_error(void) { return g_last_error.c_str(); }

void ps_string_free(char* s) { std::free(s); }

void ps_buffer_free(double* buf) { std::free(buf); }

// ---- payout state machines ----

struct ps_pool {
    enum class Kind { Queue, Bag, Hybrid } kind;
    std::uint32_t num_miners = 0;
    poolsim::QueueState queue;
    poolsim::BagState bag;
    poolsim::QueueBagState hybrid;
    std::mt19937_64 rng;
};

ps_status ps_pool_create(const char* kind, uint32_t capacity, uint32_t queue_capacity,
                         uint32_t num_miners, uint64_t seed, ps_pool** out) {
    if (!kind || !out) return fail(PS_ERR_INVALID_ARGUMENT, "kind and out must be non-null");
    *out = nullptr;
    return guarded([&] {
        if (capacity == 0) return fail(PS_ERR_DOMAIN, "capacity must be at least 1");
        if (num_miners == 0) return fail(PS_ERR_DOMAIN, "at least one pool miner is required");
        auto pool = std::make_unique<ps_pool>();
        pool->num_miners = num_miners;
        pool->rng.seed(seed);
        std::string k = kind;
        if (k == "pplns") {
            pool->kind = ps_pool::Kind::Queue;
            pool->queue = poolsim::QueueState::empty(capacity);
        } else if (k == "rpplns") {
            pool->kind = ps_pool::Kind::Bag;
            pool->bag = poolsim::BagState::empty(capacity, num_miners);
        } else if (k == "queuebag") {
            pool->kind = ps_pool::Kind::Hybrid;
            pool->hybrid = poolsim::QueueBagState::empty(capacity, queue_capacity, num_miners);
        } else {
            return fail(PS_ERR_DOMAIN, "kind must be pplns, rpplns, or queuebag");
        }
        *out = pool.release();
        return PS_OK;
    });
}

void ps_pool_destroy(ps_pool* pool) { delete pool; }

ps_status ps_pool_push(ps_pool* pool, int is_block, uint32_t owner, double* payout) {
    if (!pool) return fail(PS_ERR_INVALID_ARGUMENT, "pool must be non-null");
    return guarded([&] {
        if (owner > pool->num_miners)
            return fail(PS_ERR_DOMAIN, "owner exceeds the miner population");
        poolsim::Message msg{is_block ? poolsim::MessageKind::Block : poolsim::MessageKind::Share,
                             owner};
        poolsim::PayoutVector pay(pool->num_miners + 1, 0.0);
        if (is_block) {
            switch (pool->kind) {
                case ps_pool::Kind::Queue: {
                    auto [st, p] = poolsim::apply_block_event(pool->queue, msg, pool->num_miners);
                    pool->queue = std::move(st);
                    pay = std::move(p);
                    break;
                }
                case ps_pool::Kind::Bag: {
                    auto [st, p] = poolsim::apply_block_event(pool->bag, msg, pool->rng);
                    pool->bag = std::move(st);
                    pay = std::move(p);
                    break;
                }
                case ps_pool::Kind::Hybrid: {
                    auto [st, p] = poolsim::apply_block_event(pool->hybrid, msg, pool->rng,
                                                              pool->num_miners);
                    pool->hybrid = std::move(st);
                    pay = std::move(p);
                    break;
                }
            }
        } else {
            switch (pool->kind) {
                case ps_pool::Kind::Queue:
                    pool->queue = poolsim::pplns_transition(pool->queue, msg);
                    break;
                case ps_pool::Kind::Bag:
                    pool->bag = poolsim::rpplns_transition_sample(pool->bag, msg, pool->rng);
                    break;
                case ps_pool::Kind::Hybrid:
                    pool->hybrid =
                        poolsim::queuebag_transition_sample(pool->hybrid, msg, pool->rng);
                    break;
            }
        }
        if (payout)
            for (std::uint32_t i = 0; i <= pool->num_miners; ++i) payout[i] = pay[i];
        return PS_OK;
    });
}

ps_status ps_pool_format(const ps_pool* pool, char** out) {
    if (!pool || !out) return fail(PS_ERR_INVALID_ARGUMENT, "pool and out must be non-null");
    return guarded([&] {
        std::string text;
        switch (pool->kind) {
            case ps_pool::Kind::Queue: text = poolsim::format_state(pool->queue); break;
            case ps_pool::Kind::Bag: text = poolsim::format_state(pool->bag); break;
            case ps_pool::Kind::Hybrid: text = poolsim::format_state(pool->hybrid); break;
        }
        *out = dup_string(text);
        if (!*out) return fail(PS_ERR_INTERNAL, "out of memory");
        return PS_OK;
    });
}

// ---- closed forms ----

ps_status ps_analyze(const ps_params* params, char** json_out) {
    if (!params || !json_out)
        return fail(PS_ERR_INVALID_ARGUMENT, "params and json_out must be non-null");
    *json_out = nullptr;
    return guarded([&] {
        const ps_params& p = *params;
        to_population(p.alpha, p.beta, p.gamma, p.D);
        if (p.N == 0) return fail(PS_ERR_DOMAIN, "capacity must be at least 1");
        if (p.miners == 0) return fail(PS_ERR_DOMAIN, "at least one pool miner is required");
        const double N = p.N;

        json report;
        report["inputs"] = {{"alpha", p.alpha}, {"beta", p.beta},   {"gamma", p.gamma},
                            {"D", p.D},         {"N", p.N},         {"miners", p.miners}};
        report["mean_reward"] = poolsim::honest_mean_reward(p.alpha, p.D);
        report["variance"] = {
            {"rpplns", poolsim::rpplns_variance(p.alpha, N, p.D)},
            {"rpplns_exact", poolsim::rpplns_variance_exact(p.alpha, N, p.D)},
            {"pplns", poolsim::pplns_variance(p.alpha, N, p.D)},
            {"pplns_exact", poolsim::pplns_variance_exact(p.alpha, N, p.D)},
        };
        report["steady_state"] = section_or_null([&]() -> json {
            poolsim::SteadyState st = poolsim::steady_state(p.N, p.alpha, p.beta);
            return {{"pi", st.pi},
                    {"expected_shares", st.expected_shares},
                    {"detailed_balance_residual",
                     poolsim::detailed_balance_residual(st, p.N, p.alpha, p.beta)}};
        });
        poolsim::StateCounts counts = poolsim::state_counts(p.miners, p.N);
        report["state_counts"] = {{"queue", counts.queue_states},
                                  {"bag_exact", counts.bag_states_exact},
                                  {"bag_bound", counts.bag_states_bound}};
        report["residual_value_per_share"] = {
            {"reference", poolsim::residual_value(1.0, p.D)},
            {"exact", poolsim::residual_value_exact(1.0, N, p.D)},
        };
        report["thresholds"] = {
            {"queue_hoard",
             section_or_null([&]() -> json { return poolsim::pplns_hoard_threshold(N, p.D); })},
            {"bag_hoard_k0", section_or_null([&]() -> json {
                 return poolsim::rpplns_hoard_threshold_k0(N, p.D, p.beta);
             })},
            {"bag_hoard_k0_exact", section_or_null([&]() -> json {
                 return poolsim::rpplns_hoard_threshold_k0_exact(N, p.D);
             })},
        };
        *json_out = dup_string(report.dump(2));
        if (!*json_out) return fail(PS_ERR_INTERNAL, "out of memory");
        return PS_OK;
    });
}

ps_status ps_threshold_report(const ps_params* params, uint32_t k, char** json_out) {
    if (!params || !json_out)
        return fail(PS_ERR_INVALID_ARGUMENT, "params and json_out must be non-null");
    *json_out = nullptr;
    return guarded([&] {
        const ps_params& p = *params;
        poolsim::Population pop = to_population(p.alpha, p.beta, p.gamma, p.D);
        if (p.N == 0) return fail(PS_ERR_DOMAIN, "capacity must be at least 1");
        if (k > p.N) return fail(PS_ERR_DOMAIN, "own share count must lie in [0, N]");
        const double N = p.N;

        json report;
        report["inputs"] = {{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma},
                            {"D", p.D},         {"N", p.N},       {"k", k}};
        report["queue"] = section_or_null([&]() -> json {
            poolsim::TwoTurnRevenue rev =
                poolsim::pplns_two_turn(N, p.D, p.alpha, p.beta, p.gamma);
            poolsim::TwoTurnOracle oracle = poolsim::two_turn_oracle_pplns(p.N, pop);
            return {{"honest", rev.honest},
                    {"hoard", rev.hoard},
                    {"honest_cases", rev.honest_cases},
                    {"hoard_cases", rev.hoard_cases},
                    {"case_probs", rev.case_probs},
                    {"oracle", {{"honest", oracle.honest}, {"hoard", oracle.hoard}}},
                    {"threshold", section_or_null([&]() -> json {
                         return poolsim::pplns_hoard_threshold(N, p.D);
                     })}};
        });
        report["bag"] = [&]() -> json {
            poolsim::TwoTurnRevenue compact =
                poolsim::rpplns_two_turn(k, N, p.D, p.alpha, p.beta, p.gamma, true);
            poolsim::TwoTurnRevenue exact =
                poolsim::rpplns_two_turn(k, N, p.D, p.alpha, p.beta, p.gamma, false);
            poolsim::TwoTurnOracle oracle = poolsim::two_turn_oracle_rpplns(k, p.N, pop);
            return {{"honest_compact", compact.honest},
                    {"hoard_compact", compact.hoard},
                    {"honest_exact", exact.honest},
                    {"hoard_exact", exact.hoard},
                    {"oracle", {{"honest", oracle.honest}, {"hoard", oracle.hoard}}},
                    {"threshold_k0", section_or_null([&]() -> json {
                         return poolsim::rpplns_hoard_threshold_k0(N, p.D, p.beta);
                     })},
                    {"threshold_k0_exact", section_or_null([&]() -> json {
                         return poolsim::rpplns_hoard_threshold_k0_exact(N, p.D);
                     })}};
        }();
        *json_out = dup_string(report.dump(2));
        if (!*json_out) return fail(PS_ERR_INTERNAL, "out of memory");
        return PS_OK;
    });
}

// ---- honest Monte Carlo ----

namespace {

poolsim::TrialConfig to_trial_config(const ps_sim_config& c) {
    poolsim::TrialConfig cfg;
    if (!c.protocol) throw std::invalid_argument("protocol must be non-null");
    std::string proto = c.protocol;
    if (proto == "pplns")
        cfg.protocol = poolsim::Protocol::Pplns;
    else if (proto == "rpplns")
        cfg.protocol = poolsim::Protocol::Rpplns;
    else if (proto == "queuebag")
        cfg.protocol = poolsim::Protocol::QueueBag;
    else
        throw std::invalid_argument("protocol must be pplns, rpplns, or queuebag");
    cfg.queue_capacity = c.queue_capacity;
    cfg.pop = to_population(c.alpha, c.beta, c.gamma, c.D);
    cfg.N = c.N;
    cfg.turns = c.turns;
    cfg.burn_in = c.burn_in;
    cfg.trials = c.trials;
    cfg.seed = c.seed;
    cfg.workers = c.workers == 0 ? 1 : c.workers;
    return cfg;
}

}  // namespace

ps_status ps_simulate_honest(const ps_sim_config* cfg, ps_reward_stats* out) {
    if (!cfg || !out) return fail(PS_ERR_INVALID_ARGUMENT, "cfg and out must be non-null");
    return guarded([&] {
        poolsim::RewardStats st = poolsim::run_honest(to_trial_config(*cfg));
        out->mean = st.mean;
        out->variance = st.variance;
        out->stderr_mean = st.stderr_mean;
        out->payout_mean = st.payout_mean;
        out->payout_variance = st.payout_variance;
        out->measured_turns = st.measured_turns;
        out->trials = st.trials;
        return PS_OK;
    });
}

ps_status ps_simulate_steady(const ps_sim_config* cfg, ps_steady_stats* out,
                             char** occupancy_csv) {
    if (!cfg || !out) return fail(PS_ERR_INVALID_ARGUMENT, "cfg and out must be non-null");
    if (occupancy_csv) *occupancy_csv = nullptr;
    return guarded([&] {
        poolsim::SteadyResult res = poolsim::empirical_steady_state(to_trial_config(*cfg));
        out->tv_distance = res.tv_distance;
        out->samples = res.samples;
        if (occupancy_csv) {
            std::string csv = "k,empirical_pi,analytic_pi\n";
            for (std::size_t k = 0; k < res.occupancy.size(); ++k) {
                csv += std::to_string(k);
                csv += ',';
                csv += fmt_double(res.occupancy[k]);
                csv += ',';
                csv += fmt_double(res.analytic[k]);
                csv += '\n';
            }
            *occupancy_csv = dup_string(csv);
            if (!*occupancy_csv) return fail(PS_ERR_INTERNAL, "out of memory");
        }
        return PS_OK;
    });
}

ps_status ps_simulate_lifetime(const ps_sim_config* cfg, ps_lifetime_stats* out) {
    if (!cfg || !out) return fail(PS_ERR_INVALID_ARGUMENT, "cfg and out must be non-null");
    return guarded([&] {
        poolsim::LifetimeStats st = poolsim::share_lifetime(to_trial_config(*cfg));
        out->mean_z = st.mean_z;
        out->mean_z_sq = st.mean_z_sq;
        out->survival_rate = st.survival_rate;
        out->samples = st.samples;
        return PS_OK;
    });
}

// ---- hopping ----

ps_status ps_hop_run(const ps_hop_config* cfg, ps_hop_stats* out) {
    if (!cfg || !out) return fail(PS_ERR_INVALID_ARGUMENT, "cfg and out must be non-null");
    if (cfg->num_intervals > 0 && !cfg->intervals)
        return fail(PS_ERR_INVALID_ARGUMENT, "intervals must be non-null when counted");
    return guarded([&] {
        poolsim::HopConfig hc;
        hc.pool1 = {cfg->pool1.N, cfg->pool1.D, cfg->pool1.beta};
        hc.pool2 = {cfg->pool2.N, cfg->pool2.D, cfg->pool2.beta};
        hc.alpha = cfg->alpha;
        hc.schedule.horizon = cfg->horizon;
        for (std::uint32_t i = 0; i < cfg->num_intervals; ++i)
            hc.schedule.pool2_intervals.emplace_back(cfg->intervals[2 * i],
                                                     cfg->intervals[2 * i + 1]);
        hc.residual1 = cfg->residual1;
        hc.residual2 = cfg->residual2;
        hc.trials = cfg->trials;
        hc.seed = cfg->seed;
        hc.workers = cfg->workers == 0 ? 1 : cfg->workers;
        poolsim::HopStats st = poolsim::hopping_experiment(hc);
        out->estimate = st.estimate;
        out->ci_low = st.ci_low;
        out->ci_high = st.ci_high;
        out->analytic = st.analytic;
        out->analytic_exact = st.analytic_exact;
        out->trials = st.trials;
        return PS_OK;
    });
}

ps_status ps_schedule_parse(const char* text, double horizon, double** intervals_out,
                            uint32_t* num_out) {
    if (!text || !intervals_out || !num_out)
        return fail(PS_ERR_INVALID_ARGUMENT, "text, intervals_out, and num_out must be non-null");
    *intervals_out = nullptr;
    *num_out = 0;
    try {
        poolsim::HoppingSchedule sched = poolsim::HoppingSchedule::parse(text, horizon);
        auto n = static_cast<std::uint32_t>(sched.pool2_intervals.size());
        if (n > 0) {
            auto* buf = static_cast<double*>(std::malloc(sizeof(double) * 2 * n));
            if (!buf) return fail(PS_ERR_INTERNAL, "out of memory");
            for (std::uint32_t i = 0; i < n; ++i) {
                buf[2 * i] = sched.pool2_intervals[i].first;
                buf[2 * i + 1] = sched.pool2_intervals[i].second;
            }
            *intervals_out = buf;
        }
        *num_out = n;
        return PS_OK;
    } catch (const std::invalid_argument& e) {
        return fail(PS_ERR_PARSE, e.what());
    } catch (const std::exception& e) {
        return fail(PS_ERR_INTERNAL, e.what());
    }
}

// ---- strategy solver ----

struct ps_solver {
    poolsim::SolverConfig cfg;
    poolsim::ValueTable table;
};

namespace {

poolsim::SolverConfig to_solver_config(const ps_solver_config& c) {
    poolsim::SolverConfig cfg;
    cfg.N = c.N;
    cfg.D = c.D;
    cfg.alpha = c.alpha;
    cfg.beta = c.beta;
    cfg.gamma = c.gamma;
    cfg.k_max = c.k_max;
    if (c.terminal_rule != PS_PUBLISH_AT_CAP && c.terminal_rule != PS_REWARD_JUMP)
        throw std::invalid_argument("terminal_rule must be a ps_terminal_rule value");
    cfg.terminal_rule = c.terminal_rule == PS_REWARD_JUMP ? poolsim::TerminalRule::RewardJump
                                                          : poolsim::TerminalRule::PublishAtCap;
    cfg.literal_publish_rule = c.literal_publish_rule != 0;
    cfg.convergence_tol = c.convergence_tol;
    return cfg;
}

ps_status check_solver_state(const ps_solver* solver, uint32_t l, uint32_t s, uint32_t b) {
    if (l > solver->table.N || s > solver->table.s_max || b > 1)
        return fail(PS_ERR_DOMAIN, "state out of range for this solver");
    return PS_OK;
}

const char* action_name(poolsim::Action a) {
    switch (a) {
        case poolsim::Action::Wait: return "wait";
        case poolsim::Action::PublishShare: return "publish_share";
        case poolsim::Action::PublishBlock: return "publish_block";
    }
    return "wait";
}

const char* regime_name(poolsim::Regime r) {
    switch (r) {
        case poolsim::Regime::Honest: return "honest";
        case poolsim::Regime::HoardBlock: return "hoard_block";
        case poolsim::Regime::HoardShare: return "hoard_share";
    }
    return "honest";
}

}  // namespace

ps_status ps_solve(const ps_solver_config* cfg, ps_solver** out) {
    if (!cfg || !out) return fail(PS_ERR_INVALID_ARGUMENT, "cfg and out must be non-null");
    *out = nullptr;
    return guarded([&] {
        auto solver = std::make_unique<ps_solver>();
        solver->cfg = to_solver_config(*cfg);
        solver->table = poolsim::value_iteration(solver->cfg);
        *out = solver.release();
        return PS_OK;
    });
}

void ps_solver_destroy(ps_solver* solver) { delete solver; }

ps_status ps_solver_value(const ps_solver* solver, uint32_t l, uint32_t s, uint32_t b,
                          double* out) {
    if (!solver || !out) return fail(PS_ERR_INVALID_ARGUMENT, "solver and out must be non-null");
    ps_status st = check_solver_state(solver, l, s, b);
    if (st != PS_OK) return st;
    *out = solver->table.value(l, s, b);
    return PS_OK;
}

ps_status ps_solver_best_action(const ps_solver* solver, uint32_t l, uint32_t s, uint32_t b,
                                int* out) {
    if (!solver || !out) return fail(PS_ERR_INVALID_ARGUMENT, "solver and out must be non-null");
    ps_status st = check_solver_state(solver, l, s, b);
    if (st != PS_OK) return st;
    *out = static_cast<int>(solver->table.best_action(l, s, b));
    return PS_OK;
}

ps_status ps_solver_convergence(const ps_solver* solver, int* converged, double* gap) {
    if (!solver) return fail(PS_ERR_INVALID_ARGUMENT, "solver must be non-null");
    if (converged) *converged = solver->table.converged ? 1 : 0;
    if (gap) *gap = solver->table.convergence_gap;
    return PS_OK;
}

ps_status ps_solver_share_ic(const ps_solver* solver, uint32_t l, int* holds) {
    if (!solver || !holds)
        return fail(PS_ERR_INVALID_ARGUMENT, "solver and holds must be non-null");
    return guarded([&] {
        *holds = poolsim::check_share_ic(solver->cfg, solver->table, l) ? 1 : 0;
        return PS_OK;
    });
}

ps_status ps_solver_block_ic(const ps_solver* solver, uint32_t l, int* holds) {
    if (!solver || !holds)
        return fail(PS_ERR_INVALID_ARGUMENT, "solver and holds must be non-null");
    return guarded([&] {
        *holds = poolsim::check_block_ic(solver->cfg, solver->table, l) ? 1 : 0;
        return PS_OK;
    });
}

ps_status ps_solver_table_json(const ps_solver* solver, char** json_out) {
    if (!solver || !json_out)
        return fail(PS_ERR_INVALID_ARGUMENT, "solver and json_out must be non-null");
    *json_out = nullptr;
    return guarded([&] {
        const poolsim::ValueTable& t = solver->table;
        json values = json::object();
        json actions = json::object();
        for (std::uint32_t s = 0; s <= t.s_max; ++s)
            for (std::uint32_t b = 0; b <= 1; ++b)
                for (std::uint32_t l = 0; l <= t.N; ++l) {
                    std::string key = std::to_string(l) + "," + std::to_string(s) + ","
                                      + std::to_string(b);
                    values[key] = t.value(l, s, b);
                    actions[key] = action_name(t.best_action(l, s, b));
                }
        json report = {
            {"N", t.N},
            {"s_max", t.s_max},
            {"k_max", t.k_max},
            {"terminal_rule",
             t.rule == poolsim::TerminalRule::RewardJump ? "reward_jump" : "publish_at_cap"},
            {"converged", t.converged},
            {"convergence_gap", t.convergence_gap},
            {"values", std::move(values)},
            {"best_action", std::move(actions)},
        };
        *json_out = dup_string(report.dump());
        if (!*json_out) return fail(PS_ERR_INTERNAL, "out of memory");
        return PS_OK;
    });
}

ps_status ps_sweep_csv(const ps_sweep_config* cfg, int* all_converged, char** csv_out) {
    if (!cfg || !csv_out)
        return fail(PS_ERR_INVALID_ARGUMENT, "cfg and csv_out must be non-null");
    if (cfg->num_fractions > 0 && !cfg->pool_fractions)
        return fail(PS_ERR_INVALID_ARGUMENT, "pool_fractions must be non-null when counted");
    *csv_out = nullptr;
    return guarded([&] {
        poolsim::SweepConfig sc;
        sc.N = cfg->N;
        sc.D = cfg->D;
        sc.k_max = cfg->k_max;
        sc.grid_step = cfg->grid_step;
        sc.pool_fractions.assign(cfg->pool_fractions, cfg->pool_fractions + cfg->num_fractions);
        if (cfg->terminal_rule != PS_PUBLISH_AT_CAP && cfg->terminal_rule != PS_REWARD_JUMP)
            throw std::invalid_argument("terminal_rule must be a ps_terminal_rule value");
        sc.terminal_rule = cfg->terminal_rule == PS_REWARD_JUMP
                               ? poolsim::TerminalRule::RewardJump
                               : poolsim::TerminalRule::PublishAtCap;
        sc.literal_publish_rule = cfg->literal_publish_rule != 0;
        sc.convergence_tol = cfg->convergence_tol;
        sc.workers = cfg->workers == 0 ? 1 : cfg->workers;
        poolsim::SweepResult res = poolsim::simplex_sweep(sc);
        if (all_converged) *all_converged = res.all_converged ? 1 : 0;
        std::string csv = "alpha,beta,gamma,F,classification\n";
        for (const poolsim::SweepPoint& pt : res.points) {
            csv += fmt_double(pt.alpha);
            csv += ',';
            csv += fmt_double(pt.beta);
            csv += ',';
            csv += fmt_double(pt.gamma);
            csv += ',';
            csv += fmt_double(pt.F);
            csv += ',';
            csv += regime_name(pt.regime);
            csv += '\n';
        }
        *csv_out = dup_string(csv);
        if (!*csv_out) return fail(PS_ERR_INTERNAL, "out of memory");
        return PS_OK;
    });
}

}  // extern "C"
