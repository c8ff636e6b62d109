// Implementation of the truncated value iteration and the simplex sweep.

#include "solver.hpp"

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

// One value-iteration pass, holding the per-layer update logic. All layer
// buffers are indexed (s * 2 + b) * (N + 1) + l.
struct Iteration {
    const SolverConfig& cfg;
    std::uint32_t N;
    std::uint32_t s_max;
    double pa_blk, pa_sh, pb_blk, pb_sh, pc_blk, pc_sh;
    double inv_n;

    explicit Iteration(const SolverConfig& c) : cfg(c), N(c.N) {
        s_max = c.terminal_rule == TerminalRule::RewardJump ? N - 1 : N;
        pa_blk = c.alpha / c.D;
        pa_sh = c.alpha * (c.D - 1.0) / c.D;
        pb_blk = c.beta / c.D;
        pb_sh = c.beta * (c.D - 1.0) / c.D;
        pc_blk = c.gamma / c.D;
        pc_sh = c.gamma * (c.D - 1.0) / c.D;
        inv_n = 1.0 / static_cast<double>(N);
    }

    std::size_t layer_size() const {
        return (static_cast<std::size_t>(s_max) + 1) * 2 * (N + 1);
    }
    std::size_t idx(std::uint32_t l, std::uint32_t s, std::uint32_t b) const {
        return (static_cast<std::size_t>(s) * 2 + b) * (N + 1) + l;
    }

    // Waiting consumes the turn; prev is the layer with one turn fewer.
    double wait_value(const double* prev, std::uint32_t l, std::uint32_t s,
                      std::uint32_t b) const {
        const double own = l * inv_n;
        const double other = (N - l) * inv_n;
        // Own block: hold it.
        double v = pa_blk * prev[idx(l, s, 1)];
        // Own share: hoard it; at the cap the rules diverge.
        if (s == s_max && cfg.terminal_rule == TerminalRule::RewardJump)
            v += pa_sh * (1.0 + prev[idx(N, 0, 0)]);
        else if (s == s_max)
            v += pa_sh * prev[idx(l, s, b)];
        else
            v += pa_sh * prev[idx(l, s + 1, b)];
        // Rival pool block: the bag pushes, the round ends, l/N is paid.
        double c_accum = other * prev[idx(l, 0, 0)] + own;
        if (l > 0) c_accum += own * prev[idx(l - 1, 0, 0)];
        v += pb_blk * c_accum;
        // Rival pool share: the bag pushes.
        double d_accum = other * prev[idx(l, s, b)];
        if (l > 0) d_accum += own * prev[idx(l - 1, s, b)];
        v += pb_sh * d_accum;
        // Non-pool block: the round ends, the bag is untouched.
        v += pc_blk * prev[idx(l, 0, 0)];
        // Non-pool share: nothing.
        v += pc_sh * prev[idx(l, s, b)];
        return v;
    }

    // Free action: the hoarded share enters the full bag now.
    double publish_share_value(const double* cur, std::uint32_t l, std::uint32_t s,
                               std::uint32_t b) const {
        const double own = l * inv_n;
        const double other = (N - l) * inv_n;
        double v = own * cur[idx(l, s - 1, b)];
        if (l < N) {
            std::uint32_t s2 = cfg.literal_publish_rule ? s : s - 1;
            v += other * cur[idx(l + 1, s2, b)];
        }
        return v;
    }

    // Free action: the private block is published, pays on the post-push
    // count, and the round state resets.
    double publish_block_value(const double* cur, std::uint32_t l) const {
        const double own = l * inv_n;
        const double other = (N - l) * inv_n;
        double v = own * (l * inv_n + cur[idx(l, 0, 0)]);
        if (l < N) v += other * ((l + 1) * inv_n + cur[idx(l + 1, 0, 0)]);
        return v;
    }

    // Fills cur for one horizon. prev == nullptr computes the base layer,
    // where waiting is worth nothing. Levels s + b go bottom-up so the
    // free actions read finished same-layer values; l runs downward within
    // a level so the literal publish rule's same-level reference at l + 1
    // is finished too.
    void compute_layer(const double* prev, double* cur, Action* best) const {
        for (std::uint32_t level = 0; level <= s_max + 1; ++level) {
            for (int which = 0; which < 2; ++which) {
                std::uint32_t b = which;
                if (level < b) continue;
                std::uint32_t s = level - b;
                if (s > s_max) continue;
                for (std::uint32_t li = 0; li <= N; ++li) {
                    std::uint32_t l = N - li;
                    double g = prev ? wait_value(prev, l, s, b) : 0.0;
                    Action act = Action::Wait;
                    if (s >= 1) {
                        double c = publish_share_value(cur, l, s, b);
                        if (c > g) {
                            g = c;
                            act = Action::PublishShare;
                        }
                    }
                    if (b == 1) {
                        double d = publish_block_value(cur, l);
                        if (d > g) {
                            g = d;
                            act = Action::PublishBlock;
                        }
                    }
                    cur[idx(l, s, b)] = g;
                    if (best) best[idx(l, s, b)] = act;
                }
            }
        }
    }
};

}  // namespace

void SolverConfig::validate() const {
    require(N >= 2, "the solver needs a bag of at least 2 shares");
    require(D >= 1.0, "relative difficulty must be at least 1");
    require(alpha >= 0.0 && beta >= 0.0 && gamma >= 0.0,
            "hash power fractions must be non-negative");
    require(std::abs(alpha + beta + gamma - 1.0) <= 1e-12,
            "hash power fractions must sum to 1");
    require(k_max >= 1, "at least one turn is required");
    require(convergence_tol > 0.0, "convergence tolerance must be positive");
    for (const StrategicState& st : track_states) {
        std::uint32_t cap = terminal_rule == TerminalRule::RewardJump ? N - 1 : N;
        require(st.l <= N && st.s <= cap && st.b <= 1, "tracked state out of range");
    }
}

ValueTable value_iteration(const SolverConfig& cfg) {
    cfg.validate();
    Iteration it(cfg);

    ValueTable table;
    table.N = cfg.N;
    table.s_max = it.s_max;
    table.k_max = cfg.k_max;
    table.rule = cfg.terminal_rule;
    table.track_values.assign(cfg.track_states.size(), {});

    const std::size_t size = it.layer_size();
    std::vector<double> prev(size, 0.0), cur(size, 0.0), snap;
    std::vector<Action> best(size, Action::Wait);

    auto record_tracked = [&](const std::vector<double>& layer) {
        for (std::size_t i = 0; i < cfg.track_states.size(); ++i) {
            const StrategicState& st = cfg.track_states[i];
            table.track_values[i].push_back(layer[it.idx(st.l, st.s, st.b)]);
        }
    };

    it.compute_layer(nullptr, cur.data(), nullptr);
    record_tracked(cur);
    const std::uint32_t snap_at = cfg.k_max > 10 ? cfg.k_max - 10 : 0;
    if (snap_at == 0) snap = cur;
    for (std::uint32_t k = 1; k <= cfg.k_max; ++k) {
        std::swap(prev, cur);
        it.compute_layer(prev.data(), cur.data(), k == cfg.k_max ? best.data() : nullptr);
        record_tracked(cur);
        if (k == snap_at) snap = cur;
    }

    if (cfg.k_max > 10) {
        double gap = 0.0;
        for (std::size_t i = 0; i < size; ++i) {
            double rate_now = cur[i] / static_cast<double>(cfg.k_max);
            double rate_then = snap[i] / static_cast<double>(cfg.k_max - 10);
            gap = std::max(gap, std::abs(rate_now - rate_then));
        }
        table.convergence_gap = gap;
        table.converged = gap < cfg.convergence_tol;
    } else {
        table.convergence_gap = std::numeric_limits<double>::quiet_NaN();
        table.converged = false;
    }
    table.g = std::move(cur);
    table.g_prev = std::move(prev);
    table.best = std::move(best);
    return table;
}

std::vector<double> potential(const ValueTable& table) {
    std::vector<double> phi(table.g.size());
    for (std::size_t i = 0; i < table.g.size(); ++i)
        phi[i] = table.g[i] / static_cast<double>(table.k_max);
    return phi;
}

bool check_share_ic(const SolverConfig& cfg, const ValueTable& table, std::uint32_t l) {
    cfg.validate();
    require(l < cfg.N, "the share check needs l < N");
    require(table.N == cfg.N && table.s_max >= 1, "value table does not match the config");
    double n = static_cast<double>(cfg.N);
    double release = (l / n) * table.value(l, 0, 0) +
                     ((n - l) / n) * table.value(l + 1, 0, 0);
    double hold = table.value(l, 1, 0);
    // hold is a max over branches that include this very release lottery,
    // so a genuine tie can surface as rounding dust; absorb it.
    return release >= hold - 1e-12;
}

bool check_block_ic(const SolverConfig& cfg, const ValueTable& table, std::uint32_t l) {
    cfg.validate();
    require(l <= cfg.N, "the block check needs l <= N");
    require(table.N == cfg.N, "value table does not match the config");
    Iteration it(cfg);
    // Publishing is weakly optimal at (l, 0, 1) iff its branch value
    // reaches the waiting branch built on the previous layer.
    double wait = it.wait_value(table.g_prev.data(), l, 0, 1);
    double publish = it.publish_block_value(table.g.data(), l);
    return publish >= wait;
}

void SweepConfig::validate() const {
    require(N >= 2, "the solver needs a bag of at least 2 shares");
    require(D >= 1.0, "relative difficulty must be at least 1");
    require(k_max >= 1, "at least one turn is required");
    require(grid_step > 0.0 && grid_step <= 0.5, "grid step must lie in (0, 0.5]");
    require(!pool_fractions.empty(), "at least one pool fraction is required");
    for (double f : pool_fractions)
        require(f >= 0.0 && f <= 1.0, "pool fractions must lie in [0, 1]");
    require(convergence_tol > 0.0, "convergence tolerance must be positive");
    require(workers >= 1, "at least one worker is required");
}

SweepResult simplex_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const int steps = static_cast<int>(std::lround(1.0 / cfg.grid_step));
    require(std::abs(steps * cfg.grid_step - 1.0) <= 1e-9, "grid step must divide 1");

    struct GridPoint {
        double alpha, beta, gamma;
    };
    std::vector<GridPoint> grid;
    for (int i = 0; i <= steps; ++i) {
        for (int j = 0; i + j <= steps; ++j) {
            // gamma comes from the integer lattice too: 1 - alpha - beta can
            // round to a tiny negative on the alpha + beta = 1 edge
            double alpha = static_cast<double>(i) / steps;
            double beta = static_cast<double>(j) / steps;
            double gamma = static_cast<double>(steps - i - j) / steps;
            grid.push_back({alpha, beta, gamma});
        }
    }

    std::vector<std::vector<SweepPoint>> rows(grid.size());
    std::vector<std::uint8_t> converged(grid.size(), 1);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            try {
                SolverConfig sc;
                sc.N = cfg.N;
                sc.D = cfg.D;
                sc.alpha = grid[i].alpha;
                sc.beta = grid[i].beta;
                sc.gamma = grid[i].gamma;
                sc.k_max = cfg.k_max;
                sc.terminal_rule = cfg.terminal_rule;
                sc.literal_publish_rule = cfg.literal_publish_rule;
                sc.convergence_tol = cfg.convergence_tol;
                ValueTable table = value_iteration(sc);
                converged[i] = table.converged ? 1 : 0;
                for (double f : cfg.pool_fractions) {
                    std::uint32_t l =
                        static_cast<std::uint32_t>(std::lround(f * cfg.N));
                    if (l >= cfg.N) l = cfg.N - 1;
                    SweepPoint pt;
                    pt.alpha = sc.alpha;
                    pt.beta = sc.beta;
                    pt.gamma = sc.gamma;
                    pt.F = f;
                    if (!check_block_ic(sc, table, l))
                        pt.regime = Regime::HoardBlock;
                    else if (!check_share_ic(sc, table, l))
                        pt.regime = Regime::HoardShare;
                    else
                        pt.regime = Regime::Honest;
                    rows[i].push_back(pt);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::uint32_t n = std::min<std::uint32_t>(cfg.workers, static_cast<std::uint32_t>(grid.size()));
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n);
        for (std::uint32_t i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    SweepResult out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!converged[i]) out.all_converged = false;
        for (const SweepPoint& pt : rows[i]) out.points.push_back(pt);
    }
    return out;
}

}  // namespace poolsim
