#pragma once
// The mining environment: hash-power split, per-turn event sampling, pool
// parameters, hopping schedules, and continuous-time arrival streams.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "protocol.hpp"

namespace poolsim {

// Hash power split across the observed miner (1), the rest of the pool (2),
// and everyone outside the pool (0). D is the pool's relative difficulty:
// each submitted share is a full block with probability 1/D.
struct Population {
    double alpha = 0.0;   // observed miner
    double beta = 0.0;    // rest of the pool
    double gamma = 0.0;   // non-pool miners
    double D = 1.0;

    // Throws std::invalid_argument when the fractions are negative, do not
    // sum to 1 within 1e-12, or D < 1.
    void validate() const;
};

// One discrete turn: exactly one miner finds the next share, and that share
// is a full block with probability 1/D.
struct TurnEvent {
    MinerId owner = 0;     // 0, 1, or 2
    bool is_block = false;
};

TurnEvent sample_turn(const Population& pop, std::mt19937_64& rng);

// One pool in the continuous-time setting.
struct PoolSpec {
    std::uint32_t N = 0;   // bag capacity
    double D = 1.0;        // relative difficulty
    double beta = 0.0;     // honest hash power loyal to this pool

    void validate() const;
};

// Time intervals during which the hopper mines pool 2; it mines pool 1
// otherwise. Intervals are closed, sorted, pairwise disjoint, and contained
// in [0, horizon].
struct HoppingSchedule {
    double horizon = 0.0;
    std::vector<std::pair<double, double>> pool2_intervals;

    void validate() const;
    bool in_pool2(double t) const;

    // Parses "start end" lines; blank lines and lines starting with '#' are
    // skipped. Throws std::invalid_argument naming the offending 1-based
    // line on malformed input.
    static HoppingSchedule parse(const std::string& text, double horizon);
};

// One arrival in a merged continuous-time share stream.
struct ArrivalEvent {
    double time = 0.0;
    std::uint32_t pool = 1;   // 1 or 2
    bool from_hopper = false;
    bool is_block = false;
};

// Lazy sampler for a Poisson process whose rate is piecewise constant:
// either a fixed rate on [0, limit), or rate_pool1/rate_pool2 as a
// schedule assigns. Segment crossings restart the exponential clock, which
// is exact by memorylessness.
struct SegmentedStream {
    double limit = 0.0;                          // no events at or past this
    const HoppingSchedule* schedule = nullptr;   // null: constant rate
    double rate_pool1 = 0.0;
    double rate_pool2 = 0.0;
    double constant_rate = 0.0;

    static SegmentedStream constant(double rate, double limit);
    static SegmentedStream scheduled(double rate1, double rate2, const HoppingSchedule& schedule,
                                     double limit);

    // Rate at time t and the right edge of t's segment.
    double rate_at(double t, double* seg_end) const;
    // Next event strictly after t, or +inf when none remains before limit.
    double next_after(double t, std::mt19937_64& rng) const;
};

// Samples the merged share arrivals of both pools on [0, horizon]: each
// pool's honest miners submit at rate beta_i * D_i throughout, and the
// hopper submits at rate alpha * D_i into whichever pool the schedule
// assigns. Every arrival is independently marked as a block with
// probability 1/D_i. Times are strictly increasing.
std::vector<ArrivalEvent> sample_arrival_stream(const PoolSpec& pool1, const PoolSpec& pool2,
                                                double hopper_alpha,
                                                const HoppingSchedule& schedule, double horizon,
                                                std::mt19937_64& rng);

}  // namespace poolsim
