/* poolsim: mining-pool payout machines, their closed-form analytics, Monte
 * Carlo verification engines, and a strategic-mining value solver, behind a
 * plain C interface.
 *
 * Conventions: every function returning ps_status leaves a thread-local
 * message readable via ps_last_error() on failure. Strings handed out are
 * heap copies owned by the caller; release them with ps_string_free().
 * Handles are opaque and single-threaded; distinct handles are independent.
 */

#ifndef POOLSIM_H
#define POOLSIM_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ps_status {
    PS_OK = 0,
    PS_ERR_INVALID_ARGUMENT = 1, /* null pointer or malformed call */
    PS_ERR_DOMAIN = 2,           /* parameters outside the supported domain */
    PS_ERR_PARSE = 3,            /* malformed text input */
    PS_ERR_NO_CONVERGE = 4,      /* value iteration missed its tolerance */
    PS_ERR_INTERNAL = 5
} ps_status;

const char* ps_version(void);

/* Message for the most recent failing call on this thread; never null. */
const char* ps_last_error(void);

void ps_string_free(char* s);
void ps_buffer_free(double* buf);

/* ---- payout state machines ----
 *
 * One live state behind a handle. kind is "pplns" (ordered queue of the
 * capacity most recent shares), "rpplns" (unordered bag with uniform random
 * displacement), or "queuebag" (queue stage of queue_capacity slots feeding
 * a bag of capacity - queue_capacity). queue_capacity is ignored except for
 * "queuebag". Owners are 1..num_miners; owner 0 is the world outside the
 * pool and may only send blocks, which leave the state unchanged and pay
 * nothing. A pool block is inserted as a share first and the payout is
 * computed on the post-insertion state. */
typedef struct ps_pool ps_pool;

ps_status ps_pool_create(const char* kind, uint32_t capacity, uint32_t queue_capacity,
                         uint32_t num_miners, uint64_t seed, ps_pool** out);
void ps_pool_destroy(ps_pool* pool);

/* Feeds one message. payout may be null; otherwise it receives
 * num_miners + 1 entries: zeros for a share, the reward split for a block. */
ps_status ps_pool_push(ps_pool* pool, int is_block, uint32_t owner, double* payout);

/* Canonical text of the current state. Queue: comma-separated owners,
 * newest first, "_" for unfilled slots. Bag: "owner:count" sorted by owner.
 * Hybrid: "<queue>|<bag>". */
ps_status ps_pool_format(const ps_pool* pool, char** out);

/* ---- closed forms ---- */

typedef struct ps_params {
    double alpha;    /* observed miner's hash fraction */
    double beta;     /* rest of the pool */
    double gamma;    /* outside the pool */
    double D;        /* relative difficulty */
    uint32_t N;      /* share capacity */
    uint32_t miners; /* pool population, for the state-space counts */
} ps_params;

/* JSON report over the closed forms: mean reward, both variance flavors
 * for both machines, the Binomial steady state with its detailed-balance
 * residual, state-space counts, and the hoarding thresholds. */
ps_status ps_analyze(const ps_params* params, char** json_out);

/* JSON report comparing honest and hoarding revenue over two turns, from
 * the closed forms and from exact enumeration, with the thresholds.
 * k = observed miner's bag share count for the bag-machine comparison. */
ps_status ps_threshold_report(const ps_params* params, uint32_t k, char** json_out);

/* ---- honest Monte Carlo ---- */

typedef struct ps_sim_config {
    const char* protocol; /* "pplns", "rpplns", or "queuebag" */
    uint32_t queue_capacity;
    double alpha, beta, gamma, D;
    uint32_t N;
    uint64_t turns; /* per trial, burn-in included */
    uint64_t burn_in;
    uint32_t trials;
    uint64_t seed;
    uint32_t workers;
} ps_sim_config;

typedef struct ps_reward_stats {
    double mean;            /* attributed per-turn reward */
    double variance;
    double stderr_mean;     /* sd of per-trial means / sqrt(trials) */
    double payout_mean;     /* cash-flow series booked at block turns */
    double payout_variance;
    uint64_t measured_turns; /* per trial */
    uint32_t trials;
} ps_reward_stats;

ps_status ps_simulate_honest(const ps_sim_config* cfg, ps_reward_stats* out);

typedef struct ps_steady_stats {
    double tv_distance; /* against Binomial(N, alpha/(alpha+beta)) */
    uint64_t samples;
} ps_steady_stats;

/* Bag machine only. occupancy_csv (optional) receives
 * "k,empirical_pi,analytic_pi" rows. */
ps_status ps_simulate_steady(const ps_sim_config* cfg, ps_steady_stats* out,
                             char** occupancy_csv);

typedef struct ps_lifetime_stats {
    double mean_z; /* payment-eligibility count per share */
    double mean_z_sq;
    double survival_rate; /* per-push survival frequency */
    uint64_t samples;
} ps_lifetime_stats;

/* Bag machine only. */
ps_status ps_simulate_lifetime(const ps_sim_config* cfg, ps_lifetime_stats* out);

/* ---- two-pool hopping experiment ---- */

typedef struct ps_hop_pool {
    uint32_t N;
    double D;
    double beta; /* loyal hash power; must be positive */
} ps_hop_pool;

typedef struct ps_hop_config {
    ps_hop_pool pool1, pool2;
    double alpha;   /* hopper hash power */
    double horizon; /* hopper mines on [0, horizon] */
    /* Intervals assigned to pool 2 as start/end pairs: intervals[2i],
     * intervals[2i+1]. Sorted, disjoint, inside [0, horizon]. The hopper
     * mines pool 1 outside them. */
    const double* intervals;
    uint32_t num_intervals;
    uint32_t residual1, residual2; /* hopper shares preloaded per pool */
    uint32_t trials;
    uint64_t seed;
    uint32_t workers;
} ps_hop_config;

typedef struct ps_hop_stats {
    double estimate;
    double ci_low, ci_high; /* 3-sigma interval over trials */
    double analytic;        /* residual1/D1 + residual2/D2 + alpha*horizon */
    double analytic_exact;  /* with exact per-share residual values */
    uint32_t trials;
} ps_hop_stats;

ps_status ps_hop_run(const ps_hop_config* cfg, ps_hop_stats* out);

/* Parses "start end" lines; blank lines and '#' comments are skipped. On
 * PS_ERR_PARSE the error message names the offending 1-based line. The
 * returned buffer holds start/end pairs; free it with ps_buffer_free. */
ps_status ps_schedule_parse(const char* text, double horizon, double** intervals_out,
                            uint32_t* num_out);

/* ---- strategic-mining value solver ---- */

typedef enum ps_terminal_rule {
    PS_PUBLISH_AT_CAP = 0, /* hoarded shares may sit at the cap */
    PS_REWARD_JUMP = 1     /* hitting the cap pays 1 and restarts full */
} ps_terminal_rule;

typedef struct ps_solver_config {
    uint32_t N;
    double D;
    double alpha, beta, gamma;
    uint32_t k_max;
    int terminal_rule;        /* ps_terminal_rule; default PS_REWARD_JUMP */
    int literal_publish_rule; /* keep the publish rule's uncorrected branch */
    double convergence_tol;
} ps_solver_config;

typedef struct ps_solver ps_solver;

ps_status ps_solve(const ps_solver_config* cfg, ps_solver** out);
void ps_solver_destroy(ps_solver* solver);

/* State (l, s, b): bag shares owned, shares hoarded, private block flag. */
ps_status ps_solver_value(const ps_solver* solver, uint32_t l, uint32_t s, uint32_t b,
                          double* out);
/* 0 = wait, 1 = publish share, 2 = publish block; ties prefer waiting. */
ps_status ps_solver_best_action(const ps_solver* solver, uint32_t l, uint32_t s, uint32_t b,
                                int* out);
ps_status ps_solver_convergence(const ps_solver* solver, int* converged, double* gap);

/* Immediately publishing a fresh share (resp. block) at bag level l is
 * weakly optimal. holds receives 0 or 1. */
ps_status ps_solver_share_ic(const ps_solver* solver, uint32_t l, int* holds);
ps_status ps_solver_block_ic(const ps_solver* solver, uint32_t l, int* holds);

/* Final-layer value table as JSON: {"values": {"l,s,b": g, ...}, ...}. */
ps_status ps_solver_table_json(const ps_solver* solver, char** json_out);

typedef struct ps_sweep_config {
    uint32_t N;
    double D;
    uint32_t k_max;
    double grid_step; /* lattice step over the hash-power simplex */
    const double* pool_fractions; /* F values: owned fraction of the bag */
    uint32_t num_fractions;
    int terminal_rule;
    int literal_publish_rule;
    double convergence_tol;
    uint32_t workers;
} ps_sweep_config;

/* CSV "alpha,beta,gamma,F,classification" with classification one of
 * honest, hoard_block, hoard_share. all_converged may be null. */
ps_status ps_sweep_csv(const ps_sweep_config* cfg, int* all_converged, char** csv_out);

#ifdef __cplusplus
}
#endif

#endif /* POOLSIM_H */
