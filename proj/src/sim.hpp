#pragma once
// Monte Carlo engines for the payout machines: honest per-turn reward
// accounting, bag occupancy, share lifetimes, the two-pool hopping
// experiment, and an exact two-turn enumeration oracle.

#include <array>
#include <cstdint>
#include <vector>

#include "mining.hpp"
#include "protocol.hpp"

namespace poolsim {

enum class Protocol { Pplns, Rpplns, QueueBag };

struct TrialConfig {
    Protocol protocol = Protocol::Rpplns;
    std::uint32_t queue_capacity = 0;   // hybrid: queue stage size Q
    Population pop;
    std::uint32_t N = 0;
    std::uint64_t turns = 0;            // per trial, burn-in included
    std::uint64_t burn_in = 0;          // turns dropped before measuring
    std::uint32_t trials = 1;
    std::uint64_t seed = 0;
    std::uint32_t workers = 1;

    void validate() const;
};

// Per-turn reward statistics for miner 1. mean/variance describe the
// attributed series (the total lifetime payout of the share minted at each
// turn, zero when none was minted); payout_mean/payout_variance describe
// the cash-flow series that books each block payment at the block's turn.
// The two means agree; the variances differ because the cash-flow series
// carries the pool's block-timing noise on top of the per-share noise.
struct RewardStats {
    double mean = 0.0;
    double variance = 0.0;
    double stderr_mean = 0.0;          // sd of per-trial means / sqrt(trials)
    double payout_mean = 0.0;
    double payout_variance = 0.0;
    std::uint64_t measured_turns = 0;  // per trial
    std::uint32_t trials = 0;
};

// Simulates every miner honest. Shares minted by miner 1 inside the
// measurement window are followed to displacement (past the window's end
// when needed) so their attributed payouts are complete.
RewardStats run_honest(const TrialConfig& cfg);

struct SteadyResult {
    std::vector<double> occupancy;   // empirical law of miner 1's bag count
    std::vector<double> analytic;    // Binomial(N, alpha/(alpha+beta))
    double tv_distance = 0.0;
    std::uint64_t samples = 0;
};

// Bag machine only. Occupancy is sampled once per turn after the turn's
// event; blocks push like shares and payments are irrelevant here.
SteadyResult empirical_steady_state(const TrialConfig& cfg);

struct LifetimeStats {
    double mean_z = 0.0;       // payment-eligibility count per share
    double mean_z_sq = 0.0;
    double survival_rate = 0.0; // per-push survival frequency
    std::uint64_t samples = 0;
};

// Bag machine only. Fills the bag, then tags every share miner 1 mints and
// follows it to displacement. Z counts the pushes at which the share was
// present post-push, its own insertion included; a resident share survives
// an incoming push with probability (N-1)/N.
LifetimeStats share_lifetime(const TrialConfig& cfg);

struct HopConfig {
    PoolSpec pool1, pool2;
    double alpha = 0.0;                  // hopper hash power
    HoppingSchedule schedule;
    std::uint32_t residual1 = 0;         // hopper shares preloaded in pool 1
    std::uint32_t residual2 = 0;
    std::uint32_t trials = 1;
    std::uint64_t seed = 0;
    std::uint32_t workers = 1;

    void validate() const;
};

struct HopStats {
    double estimate = 0.0;
    double ci_low = 0.0, ci_high = 0.0;  // 3-sigma interval over trials
    double analytic = 0.0;               // residual1/D1 + residual2/D2 + alpha*T
    double analytic_exact = 0.0;         // with exact per-share residuals
    std::uint32_t trials = 0;
};

// Continuous-time two-pool run: both bags start full holding the preloaded
// hopper shares, the hopper follows the schedule until its horizon, and
// the honest streams keep running until every hopper share has been
// displaced, so the estimate includes each share's full payout stream.
HopStats hopping_experiment(const HopConfig& cfg);

// Exact two-turn revenue enumeration, walking the machines' transition
// distributions and valuing leftover shares by their payout streams. This
// is independent of the closed forms and is what they are tested against.
struct TwoTurnOracle {
    double honest = 0.0;
    double hoard = 0.0;
    std::array<double, 6> honest_cases{};
    std::array<double, 6> hoard_cases{};
};

// Bag machine: miner 1 holds k of the N shares, the rest are miner 2's.
TwoTurnOracle two_turn_oracle_rpplns(std::uint32_t k, std::uint32_t N, const Population& pop);

// Queue machine: the full queue is all miner 2's shares.
TwoTurnOracle two_turn_oracle_pplns(std::uint32_t N, const Population& pop);

}  // namespace poolsim
