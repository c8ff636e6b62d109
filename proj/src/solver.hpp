#pragma once
// Truncated value iteration for the strategic miner facing the bag
// machine: state (l, s, b) = bag shares owned, shares hoarded privately,
// private block held. Publishing is a free within-turn action; waiting
// consumes the turn. The solver maps where honest publishing dominates.

#include <cstdint>
#include <vector>

namespace poolsim {

struct StrategicState {
    std::uint32_t l = 0;
    std::uint32_t s = 0;
    std::uint32_t b = 0;
};

// What happens when the hoarded-share count hits the bag capacity N:
// PublishAtCap keeps s = N as a plain state (shares just stop accruing);
// RewardJump pays 1 immediately and restarts from (N, 0, 0).
enum class TerminalRule { PublishAtCap, RewardJump };

enum class Action : std::uint8_t { Wait = 0, PublishShare = 1, PublishBlock = 2 };

struct SolverConfig {
    std::uint32_t N = 0;
    double D = 1.0;
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
    std::uint32_t k_max = 150;
    TerminalRule terminal_rule = TerminalRule::RewardJump;
    // Publishing a share into a full bag displaces a resident; with
    // literal_publish_rule the branch where another miner's share is
    // displaced does not consume the published share. Off by default.
    bool literal_publish_rule = false;
    double convergence_tol = 1e-4;
    // States whose value trajectory across k is recorded for inspection.
    std::vector<StrategicState> track_states;

    void validate() const;
};

struct ValueTable {
    std::uint32_t N = 0;
    std::uint32_t s_max = 0;      // N - 1 under RewardJump, N otherwise
    std::uint32_t k_max = 0;
    TerminalRule rule = TerminalRule::RewardJump;

    std::vector<double> g;        // layer k_max
    std::vector<double> g_prev;   // layer k_max - 1
    std::vector<Action> best;     // argmax at layer k_max, ties prefer Wait
    bool converged = false;
    double convergence_gap = 0.0; // NaN when k_max <= 10
    // track_values[i][k] = value of track_states[i] at horizon k.
    std::vector<std::vector<double>> track_values;

    std::size_t index(std::uint32_t l, std::uint32_t s, std::uint32_t b) const {
        return (static_cast<std::size_t>(s) * 2 + b) * (N + 1) + l;
    }
    double value(std::uint32_t l, std::uint32_t s, std::uint32_t b) const {
        return g[index(l, s, b)];
    }
    Action best_action(std::uint32_t l, std::uint32_t s, std::uint32_t b) const {
        return best[index(l, s, b)];
    }
};

ValueTable value_iteration(const SolverConfig& cfg);

// Per-turn value rate g / k_max for every state of the final layer.
std::vector<double> potential(const ValueTable& table);

// Releasing a held share immediately weakly beats holding it.  Release
// from (l, 1, 0) is the displacement lottery (l/N) g(l,0,0) +
// ((N-l)/N) g(l+1,0,0) -- the same weighting the block comparison uses --
// and holding is g(l, 1, 0) itself.  The direct landed-state comparison
// g(l+1,0,0) >= g(l,1,0) is strictly weaker (a share in the bag always
// outvalues one still in hand) and can never fail; see README.  Exact
// ties, which dominate away from the nearly-owned corner, count as
// honest.  Requires l < N.
bool check_share_ic(const SolverConfig& cfg, const ValueTable& table, std::uint32_t l);

// Publishing a fresh block immediately weakly beats waiting with it:
// the publish branch attains the optimum at (l, 0, 1).
bool check_block_ic(const SolverConfig& cfg, const ValueTable& table, std::uint32_t l);

enum class Regime { Honest, HoardBlock, HoardShare };

struct SweepConfig {
    std::uint32_t N = 0;
    double D = 1.0;
    std::uint32_t k_max = 150;
    double grid_step = 0.1;
    std::vector<double> pool_fractions;   // F: owned fraction of the bag
    TerminalRule terminal_rule = TerminalRule::RewardJump;
    bool literal_publish_rule = false;
    double convergence_tol = 1e-4;
    std::uint32_t workers = 1;

    void validate() const;
};

struct SweepPoint {
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
    double F = 0.0;
    Regime regime = Regime::Honest;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    bool all_converged = true;
};

// Solves every lattice point alpha, beta >= 0, alpha + beta <= 1 on the
// given step and classifies each (point, F) pair: the bag level is
// l = round(F * N), capped at N - 1 so the incentive checks stay in range.
// HoardBlock when the block check fails, else HoardShare when the share
// check fails, else Honest.
SweepResult simplex_sweep(const SweepConfig& cfg);

}  // namespace poolsim
