// Implementation of the Monte Carlo engines and the enumeration oracle.

#include "sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace poolsim {

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Per-trial seeds depend only on the master seed and the trial index, so
// results are invariant under the worker count.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 1));
}

// Runs fn(0..trials-1); each call writes only its own output slot, keeping
// the aggregate independent of scheduling.
template <typename Fn>
void run_trials(std::uint32_t trials, std::uint32_t workers, Fn&& fn) {
    if (workers <= 1 || trials <= 1) {
        for (std::uint32_t i = 0; i < trials; ++i) fn(i);
        return;
    }
    std::atomic<std::uint32_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            std::uint32_t i = next.fetch_add(1);
            if (i >= trials) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    std::uint32_t n = std::min(workers, trials);
    pool.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

// Raw per-trial accumulators for the honest runs.
struct TrialAccum {
    double sum = 0.0;        // attributed payouts of window-minted shares
    double sumsq = 0.0;
    double pay_sum = 0.0;    // block payments booked inside the window
    double pay_sumsq = 0.0;
};

// Turn budget allowed for draining tracked shares after the window: the
// expected need is about N*ln(N) pushes at push rate alpha + beta.
std::uint64_t drain_cap(const TrialConfig& cfg) {
    double push_rate = cfg.pop.alpha + cfg.pop.beta;
    if (push_rate <= 0.0) return 0;
    double pushes = 50.0 * cfg.N * std::log(cfg.N + 2.0) + 1000.0;
    return static_cast<std::uint64_t>(pushes / push_rate) + 1000;
}

// Slot classes for resident shares.
constexpr std::uint8_t kOther = 0;      // miner 2's share, or none
constexpr std::uint8_t kMine = 1;       // miner 1's share, outside the window
constexpr std::uint8_t kTracked = 2;    // miner 1's share, window-minted

TrialAccum rpplns_honest_trial(const TrialConfig& cfg, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::uint32_t N = cfg.N;
    std::vector<std::uint8_t> cls(N, kOther);
    std::vector<double> accrued(N, 0.0);
    std::uint32_t fill = 0, cnt1 = 0, live = 0;
    TrialAccum acc;
    std::uniform_int_distribution<std::uint32_t> victim(0, N - 1);

    auto step = [&](bool in_window) {
        TurnEvent ev = sample_turn(cfg.pop, rng);
        if (ev.owner == 0) return;
        std::uint32_t slot;
        if (fill < N) {
            slot = fill++;
        } else {
            slot = victim(rng);
            if (cls[slot] != kOther) --cnt1;
            if (cls[slot] == kTracked) {
                acc.sum += accrued[slot];
                acc.sumsq += accrued[slot] * accrued[slot];
                --live;
            }
        }
        if (ev.owner == 1) {
            ++cnt1;
            if (in_window) {
                cls[slot] = kTracked;
                accrued[slot] = 0.0;
                ++live;
            } else {
                cls[slot] = kMine;
            }
        } else {
            cls[slot] = kOther;
        }
        if (ev.is_block) {
            double pay = static_cast<double>(cnt1) / static_cast<double>(fill);
            if (in_window) {
                acc.pay_sum += pay;
                acc.pay_sumsq += pay * pay;
            }
            if (live) {
                double unit = 1.0 / static_cast<double>(fill);
                for (std::uint32_t i = 0; i < fill; ++i)
                    if (cls[i] == kTracked) accrued[i] += unit;
            }
        }
    };

    for (std::uint64_t t = 0; t < cfg.turns; ++t) step(t >= cfg.burn_in);
    std::uint64_t cap = drain_cap(cfg);
    for (std::uint64_t extra = 0; live > 0; ++extra) {
        if (extra > cap) throw std::logic_error("tracked shares failed to drain");
        step(false);
    }
    return acc;
}

TrialAccum pplns_honest_trial(const TrialConfig& cfg, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::uint32_t N = cfg.N;
    std::vector<std::uint8_t> cls(N, kOther);
    std::vector<double> accrued(N, 0.0);
    std::uint32_t fill = 0, oldest = 0, cnt1 = 0, live = 0;
    TrialAccum acc;

    auto step = [&](bool in_window) {
        TurnEvent ev = sample_turn(cfg.pop, rng);
        if (ev.owner == 0) return;
        std::uint32_t slot;
        if (fill < N) {
            slot = fill++;
        } else {
            slot = oldest;
            oldest = (oldest + 1 == N) ? 0 : oldest + 1;
            if (cls[slot] != kOther) --cnt1;
            if (cls[slot] == kTracked) {
                acc.sum += accrued[slot];
                acc.sumsq += accrued[slot] * accrued[slot];
                --live;
            }
        }
        if (ev.owner == 1) {
            ++cnt1;
            if (in_window) {
                cls[slot] = kTracked;
                accrued[slot] = 0.0;
                ++live;
            } else {
                cls[slot] = kMine;
            }
        } else {
            cls[slot] = kOther;
        }
        if (ev.is_block) {
            double pay = static_cast<double>(cnt1) / static_cast<double>(fill);
            if (in_window) {
                acc.pay_sum += pay;
                acc.pay_sumsq += pay * pay;
            }
            if (live) {
                double unit = 1.0 / static_cast<double>(fill);
                for (std::uint32_t i = 0; i < fill; ++i)
                    if (cls[i] == kTracked) accrued[i] += unit;
            }
        }
    };

    for (std::uint64_t t = 0; t < cfg.turns; ++t) step(t >= cfg.burn_in);
    std::uint64_t cap = drain_cap(cfg);
    for (std::uint64_t extra = 0; live > 0; ++extra) {
        if (extra > cap) throw std::logic_error("tracked shares failed to drain");
        step(false);
    }
    return acc;
}

TrialAccum queuebag_honest_trial(const TrialConfig& cfg, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::uint32_t N = cfg.N;
    const std::uint32_t Q = cfg.queue_capacity;
    const std::uint32_t B = N - Q;
    // Slots [0, Q) hold the queue stage, [Q, N) the bag stage.
    std::vector<std::uint8_t> cls(N, kOther);
    std::vector<double> accrued(N, 0.0);
    std::uint32_t fill_q = 0, oldest_q = 0, fill_b = 0, cnt1 = 0, live = 0;
    TrialAccum acc;
    std::uniform_int_distribution<std::uint32_t> victim(0, B > 0 ? B - 1 : 0);

    auto retire = [&](std::uint8_t c, double a) {
        if (c != kOther) --cnt1;
        if (c == kTracked) {
            acc.sum += a;
            acc.sumsq += a * a;
            --live;
        }
    };
    auto step = [&](bool in_window) {
        TurnEvent ev = sample_turn(cfg.pop, rng);
        if (ev.owner == 0) return;
        std::uint32_t slot;
        if (fill_q < Q) {
            slot = fill_q++;
        } else {
            slot = oldest_q;
            oldest_q = (oldest_q + 1 == Q) ? 0 : oldest_q + 1;
            // The share falling off the queue rear moves into the bag.
            std::uint8_t e_cls = cls[slot];
            double e_acc = accrued[slot];
            if (B == 0) {
                retire(e_cls, e_acc);
            } else if (fill_b < B) {
                std::uint32_t bslot = Q + fill_b++;
                cls[bslot] = e_cls;
                accrued[bslot] = e_acc;
            } else {
                std::uint32_t bslot = Q + victim(rng);
                retire(cls[bslot], accrued[bslot]);
                cls[bslot] = e_cls;
                accrued[bslot] = e_acc;
            }
        }
        if (ev.owner == 1) {
            ++cnt1;
            if (in_window) {
                cls[slot] = kTracked;
                accrued[slot] = 0.0;
                ++live;
            } else {
                cls[slot] = kMine;
            }
        } else {
            cls[slot] = kOther;
        }
        if (ev.is_block) {
            std::uint32_t fill = fill_q + fill_b;
            double pay = static_cast<double>(cnt1) / static_cast<double>(fill);
            if (in_window) {
                acc.pay_sum += pay;
                acc.pay_sumsq += pay * pay;
            }
            if (live) {
                double unit = 1.0 / static_cast<double>(fill);
                for (std::uint32_t i = 0; i < fill_q; ++i)
                    if (cls[i] == kTracked) accrued[i] += unit;
                for (std::uint32_t i = Q; i < Q + fill_b; ++i)
                    if (cls[i] == kTracked) accrued[i] += unit;
            }
        }
    };

    for (std::uint64_t t = 0; t < cfg.turns; ++t) step(t >= cfg.burn_in);
    std::uint64_t cap = drain_cap(cfg);
    for (std::uint64_t extra = 0; live > 0; ++extra) {
        if (extra > cap) throw std::logic_error("tracked shares failed to drain");
        step(false);
    }
    return acc;
}

}  // namespace

void TrialConfig::validate() const {
    pop.validate();
    require(N >= 1, "share capacity must be at least 1");
    if (protocol == Protocol::QueueBag)
        require(queue_capacity >= 1 && queue_capacity <= N,
                "queue stage must hold between 1 and N slots");
    require(turns > burn_in, "the run must extend past the burn-in");
    require(trials >= 1, "at least one trial is required");
    require(workers >= 1, "at least one worker is required");
}

RewardStats run_honest(const TrialConfig& cfg) {
    cfg.validate();
    std::vector<TrialAccum> parts(cfg.trials);
    run_trials(cfg.trials, cfg.workers, [&](std::uint32_t i) {
        std::uint64_t seed = trial_seed(cfg.seed, i);
        switch (cfg.protocol) {
            case Protocol::Pplns: parts[i] = pplns_honest_trial(cfg, seed); break;
            case Protocol::Rpplns: parts[i] = rpplns_honest_trial(cfg, seed); break;
            case Protocol::QueueBag: parts[i] = queuebag_honest_trial(cfg, seed); break;
        }
    });

    const double window = static_cast<double>(cfg.turns - cfg.burn_in);
    const double n = window * cfg.trials;
    RewardStats out;
    out.measured_turns = cfg.turns - cfg.burn_in;
    out.trials = cfg.trials;
    double sum = 0, sumsq = 0, pay_sum = 0, pay_sumsq = 0;
    for (const TrialAccum& p : parts) {
        sum += p.sum;
        sumsq += p.sumsq;
        pay_sum += p.pay_sum;
        pay_sumsq += p.pay_sumsq;
    }
    out.mean = sum / n;
    out.variance = sumsq / n - out.mean * out.mean;
    out.payout_mean = pay_sum / n;
    out.payout_variance = pay_sumsq / n - out.payout_mean * out.payout_mean;
    if (cfg.trials >= 2) {
        double mdev = 0;
        for (const TrialAccum& p : parts) {
            double d = p.sum / window - out.mean;
            mdev += d * d;
        }
        out.stderr_mean = std::sqrt(mdev / (cfg.trials - 1.0) / cfg.trials);
    } else {
        out.stderr_mean = std::sqrt(std::max(out.variance, 0.0) / n);
    }
    return out;
}

SteadyResult empirical_steady_state(const TrialConfig& cfg) {
    cfg.validate();
    require(cfg.protocol == Protocol::Rpplns, "occupancy tracking targets the bag machine");
    require(cfg.pop.beta > 0.0, "occupancy comparison requires beta > 0 so the chain mixes");

    const std::uint32_t N = cfg.N;
    std::vector<std::vector<std::uint64_t>> hists(cfg.trials);
    run_trials(cfg.trials, cfg.workers, [&](std::uint32_t i) {
        std::mt19937_64 rng(trial_seed(cfg.seed, i));
        std::vector<std::uint8_t> mine(N, 0);
        std::uint32_t fill = 0, cnt1 = 0;
        std::uniform_int_distribution<std::uint32_t> victim(0, N - 1);
        std::vector<std::uint64_t> hist(N + 1, 0);
        for (std::uint64_t t = 0; t < cfg.turns; ++t) {
            TurnEvent ev = sample_turn(cfg.pop, rng);
            if (ev.owner != 0) {
                std::uint32_t slot;
                if (fill < N) {
                    slot = fill++;
                } else {
                    slot = victim(rng);
                    cnt1 -= mine[slot];
                }
                mine[slot] = ev.owner == 1 ? 1 : 0;
                cnt1 += mine[slot];
            }
            if (t >= cfg.burn_in) ++hist[cnt1];
        }
        hists[i] = std::move(hist);
    });

    SteadyResult out;
    out.occupancy.assign(N + 1, 0.0);
    std::uint64_t samples = 0;
    for (const auto& h : hists)
        for (std::uint32_t k = 0; k <= N; ++k) {
            out.occupancy[k] += static_cast<double>(h[k]);
            samples += h[k];
        }
    for (double& x : out.occupancy) x /= static_cast<double>(samples);
    out.samples = samples;

    double p = cfg.pop.alpha / (cfg.pop.alpha + cfg.pop.beta);
    out.analytic.assign(N + 1, 0.0);
    out.analytic[0] = std::pow(1.0 - p, static_cast<double>(N));
    for (std::uint32_t k = 0; k + 1 <= N; ++k)
        out.analytic[k + 1] = out.analytic[k]
                              * (static_cast<double>(N - k) / static_cast<double>(k + 1))
                              * (p / (1.0 - p));
    double tv = 0;
    for (std::uint32_t k = 0; k <= N; ++k) tv += std::abs(out.occupancy[k] - out.analytic[k]);
    out.tv_distance = 0.5 * tv;
    return out;
}

LifetimeStats share_lifetime(const TrialConfig& cfg) {
    cfg.validate();
    require(cfg.protocol == Protocol::Rpplns, "lifetime tracking targets the bag machine");
    require(cfg.pop.alpha > 0.0, "lifetime tracking needs miner 1 to mint shares");

    struct Part {
        double sum_z = 0, sum_z2 = 0;
        std::uint64_t samples = 0;
    };
    std::vector<Part> parts(cfg.trials);
    run_trials(cfg.trials, cfg.workers, [&](std::uint32_t i) {
        std::mt19937_64 rng(trial_seed(cfg.seed, i));
        const std::uint32_t N = cfg.N;
        std::vector<std::uint8_t> tagged(N, 0);
        std::vector<std::uint64_t> born(N, 0);
        std::uint32_t fill = 0, live = 0;
        std::uint64_t pushes = 0;
        std::uniform_int_distribution<std::uint32_t> victim(0, N - 1);
        Part part;

        auto step = [&](bool minting) {
            TurnEvent ev = sample_turn(cfg.pop, rng);
            if (ev.owner == 0) return;
            std::uint32_t slot;
            if (fill < N) {
                // Warm fill: nothing displaces, nothing is tagged yet.
                slot = fill++;
                tagged[slot] = 0;
                return;
            }
            ++pushes;
            slot = victim(rng);
            if (tagged[slot]) {
                double z = static_cast<double>(pushes - born[slot]);
                part.sum_z += z;
                part.sum_z2 += z * z;
                ++part.samples;
                --live;
            }
            bool tag = minting && ev.owner == 1;
            tagged[slot] = tag ? 1 : 0;
            if (tag) {
                born[slot] = pushes;
                ++live;
            }
        };

        for (std::uint64_t t = 0; t < cfg.turns; ++t) step(t >= cfg.burn_in);
        std::uint64_t cap = drain_cap(cfg);
        for (std::uint64_t extra = 0; live > 0; ++extra) {
            if (extra > cap) throw std::logic_error("tagged shares failed to drain");
            step(false);
        }
        parts[i] = part;
    });

    LifetimeStats out;
    double sum_z = 0, sum_z2 = 0;
    for (const Part& p : parts) {
        sum_z += p.sum_z;
        sum_z2 += p.sum_z2;
        out.samples += p.samples;
    }
    require(out.samples > 0, "the run produced no completed share lifetimes");
    out.mean_z = sum_z / static_cast<double>(out.samples);
    out.mean_z_sq = sum_z2 / static_cast<double>(out.samples);
    // Each share survives Z-1 of the Z pushes it was at risk for.
    out.survival_rate = (sum_z - static_cast<double>(out.samples)) / sum_z;
    return out;
}

void HopConfig::validate() const {
    pool1.validate();
    pool2.validate();
    schedule.validate();
    require(alpha >= 0.0 && alpha <= 1.0, "hopper hash power must lie in [0, 1]");
    require(residual1 <= pool1.N && residual2 <= pool2.N,
            "preloaded shares cannot exceed the pool capacity");
    require(trials >= 1, "at least one trial is required");
    require(pool1.beta > 0.0 && pool2.beta > 0.0,
            "both pools need loyal hash power so residual shares drain");
}

HopStats hopping_experiment(const HopConfig& cfg) {
    cfg.validate();
    std::vector<double> rewards(cfg.trials, 0.0);
    const double inf = std::numeric_limits<double>::infinity();

    run_trials(cfg.trials, cfg.workers, [&](std::uint32_t idx) {
        std::mt19937_64 rng(trial_seed(cfg.seed, idx));
        const PoolSpec* pools[2] = {&cfg.pool1, &cfg.pool2};
        std::vector<std::uint8_t> slots[2] = {
            std::vector<std::uint8_t>(cfg.pool1.N, 0),
            std::vector<std::uint8_t>(cfg.pool2.N, 0),
        };
        std::uint32_t cnt[2] = {cfg.residual1, cfg.residual2};
        for (std::uint32_t i = 0; i < cfg.residual1; ++i) slots[0][i] = 1;
        for (std::uint32_t i = 0; i < cfg.residual2; ++i) slots[1][i] = 1;

        SegmentedStream honest1 = SegmentedStream::constant(cfg.pool1.beta * cfg.pool1.D, inf);
        SegmentedStream honest2 = SegmentedStream::constant(cfg.pool2.beta * cfg.pool2.D, inf);
        SegmentedStream hopper = SegmentedStream::scheduled(
            cfg.alpha * cfg.pool1.D, cfg.alpha * cfg.pool2.D, cfg.schedule,
            cfg.schedule.horizon);

        std::uniform_real_distribution<double> unit(0.0, 1.0);
        double t1 = honest1.next_after(0.0, rng);
        double t2 = honest2.next_after(0.0, rng);
        double th = hopper.next_after(0.0, rng);
        double reward = 0.0;
        while (true) {
            if (std::isinf(th) && cnt[0] == 0 && cnt[1] == 0) break;
            double t = std::min({t1, t2, th});
            if (std::isinf(t)) break;
            bool from_hopper = false;
            std::uint32_t p;
            if (t == th) {
                from_hopper = true;
                p = cfg.schedule.in_pool2(t) ? 1 : 0;
                th = hopper.next_after(t, rng);
            } else if (t == t1) {
                p = 0;
                t1 = honest1.next_after(t, rng);
            } else {
                p = 1;
                t2 = honest2.next_after(t, rng);
            }
            const std::uint32_t N = pools[p]->N;
            std::uint32_t v =
                std::uniform_int_distribution<std::uint32_t>(0, N - 1)(rng);
            cnt[p] -= slots[p][v];
            slots[p][v] = from_hopper ? 1 : 0;
            cnt[p] += slots[p][v];
            if (unit(rng) < 1.0 / pools[p]->D)
                reward += static_cast<double>(cnt[p]) / static_cast<double>(N);
        }
        rewards[idx] = reward;
    });

    HopStats out;
    out.trials = cfg.trials;
    double sum = 0;
    for (double r : rewards) sum += r;
    out.estimate = sum / cfg.trials;
    double dev = 0;
    for (double r : rewards) dev += (r - out.estimate) * (r - out.estimate);
    double sd = cfg.trials >= 2 ? std::sqrt(dev / (cfg.trials - 1.0)) : 0.0;
    double half = 3.0 * sd / std::sqrt(static_cast<double>(cfg.trials));
    out.ci_low = out.estimate - half;
    out.ci_high = out.estimate + half;
    double mined = cfg.alpha * cfg.schedule.horizon;
    out.analytic = cfg.residual1 / cfg.pool1.D + cfg.residual2 / cfg.pool2.D + mined;
    out.analytic_exact = cfg.residual1 * (cfg.pool1.N - 1.0) / (cfg.pool1.N * cfg.pool1.D)
                         + cfg.residual2 * (cfg.pool2.N - 1.0) / (cfg.pool2.N * cfg.pool2.D)
                         + mined;
    return out;
}

// ---- exact two-turn enumeration ----

namespace {

struct WeightedBag {
    BagState state;
    double prob = 0.0;
    double accrued = 0.0;
};
using BagSet = std::vector<WeightedBag>;

BagSet push_bag(const BagSet& in, MinerId owner, bool block) {
    Message msg{block ? MessageKind::Block : MessageKind::Share, owner};
    BagSet out;
    for (const WeightedBag& wb : in) {
        auto dist = rpplns_transition_distribution(wb.state, msg);
        for (auto& o : dist) {
            double acc = wb.accrued;
            if (block) acc += rpplns_payout(o.state)[1];
            out.push_back({std::move(o.state), wb.prob * o.probability, acc});
        }
    }
    return out;
}

double bag_value(const BagSet& set, double residual_per_share) {
    double v = 0.0;
    for (const WeightedBag& wb : set)
        v += wb.prob * (wb.accrued + wb.state.counts[1] * residual_per_share);
    return v;
}

std::array<double, 6> event_probs(const Population& pop) {
    return {pop.alpha / pop.D,          pop.alpha * (pop.D - 1.0) / pop.D,
            pop.beta / pop.D,           pop.beta * (pop.D - 1.0) / pop.D,
            pop.gamma / pop.D,          pop.gamma * (pop.D - 1.0) / pop.D};
}

}  // namespace

TwoTurnOracle two_turn_oracle_rpplns(std::uint32_t k, std::uint32_t N, const Population& pop) {
    pop.validate();
    require(N >= 1 && k <= N, "own share count must lie in [0, N]");

    BagState b0 = BagState::empty(N, 2);
    b0.counts[1] = k;
    b0.counts[2] = N - k;
    const double r = (N - 1.0) / (static_cast<double>(N) * pop.D);
    BagSet start{{b0, 1.0, 0.0}};

    TwoTurnOracle out;
    // Honest: the fresh block is published now, then the second event runs.
    BagSet pub = push_bag(start, 1, true);
    out.honest_cases = {
        bag_value(push_bag(pub, 1, true), r),    // own block
        bag_value(push_bag(pub, 1, false), r),   // own share
        bag_value(push_bag(pub, 2, true), r),    // rival pool block
        bag_value(push_bag(pub, 2, false), r),   // rival pool share
        bag_value(pub, r),                       // non-pool block
        bag_value(pub, r),                       // non-pool share
    };
    // Hoard: the block is private through the second event. A rival pool
    // block (case 3) or a non-pool block (case 5) orphans it; otherwise it
    // is published after the event.
    out.hoard_cases = {
        bag_value(push_bag(start, 1, true), r),
        bag_value(push_bag(push_bag(start, 1, false), 1, true), r),
        bag_value(push_bag(start, 2, true), r),
        bag_value(push_bag(push_bag(start, 2, false), 1, true), r),
        bag_value(start, r),
        bag_value(push_bag(start, 1, true), r),
    };
    auto p = event_probs(pop);
    for (int i = 0; i < 6; ++i) {
        out.honest += p[i] * out.honest_cases[i];
        out.hoard += p[i] * out.hoard_cases[i];
    }
    return out;
}

namespace {

struct QueuePath {
    QueueState q;
    double accrued = 0.0;
};

QueuePath push_queue(QueuePath path, MinerId owner, bool block) {
    Message msg{block ? MessageKind::Block : MessageKind::Share, owner};
    path.q = pplns_transition(path.q, msg);
    if (block) path.accrued += pplns_payout(path.q, 2)[1];
    return path;
}

double queue_value(const QueuePath& path, std::uint32_t N, double D) {
    double v = path.accrued;
    for (std::size_t i = 0; i < path.q.slots.size(); ++i)
        if (path.q.slots[i] == 1)
            v += (N - (i + 1.0)) / (static_cast<double>(N) * D);
    return v;
}

}  // namespace

TwoTurnOracle two_turn_oracle_pplns(std::uint32_t N, const Population& pop) {
    pop.validate();
    require(N >= 3, "the queue comparison needs at least three slots");

    QueuePath start;
    start.q = QueueState::empty(N);
    for (auto& s : start.q.slots) s = 2;

    TwoTurnOracle out;
    QueuePath pub = push_queue(start, 1, true);
    auto value = [&](const QueuePath& p) { return queue_value(p, N, pop.D); };
    out.honest_cases = {
        value(push_queue(pub, 1, true)),
        value(push_queue(pub, 1, false)),
        value(push_queue(pub, 2, true)),
        value(push_queue(pub, 2, false)),
        value(pub),
        value(pub),
    };
    out.hoard_cases = {
        value(push_queue(start, 1, true)),
        value(push_queue(push_queue(start, 1, false), 1, true)),
        value(push_queue(start, 2, true)),
        value(push_queue(push_queue(start, 2, false), 1, true)),
        value(start),
        value(push_queue(start, 1, true)),
    };
    auto p = event_probs(pop);
    for (int i = 0; i < 6; ++i) {
        out.honest += p[i] * out.honest_cases[i];
        out.hoard += p[i] * out.hoard_cases[i];
    }
    return out;
}

}  // namespace poolsim
