// Acceptance gate: ten numbered criteria, one [PASS]/[FAIL] line each plus
// indented evidence lines. Exit code = number of failed criteria. Criterion 2
// is expected to fail as stated: it compares the simulator against compact
// reference variance forms that omit part of the covariance mass, and the
// gate reports that discrepancy instead of papering over it (see README).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "analytics.hpp"
#include "mining.hpp"
#include "protocol.hpp"
#include "sim.hpp"
#include "solver.hpp"

using namespace poolsim;

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

struct Check {
    bool ok = false;
    bool counted = true;
    std::string text;
};

struct Criterion {
    std::string title;
    std::vector<Check> checks;

    void expect(bool ok, const std::string& text) { checks.push_back({ok, true, text}); }
    void note(bool ok, const std::string& text) { checks.push_back({ok, false, text}); }

    bool passed() const {
        for (const Check& c : checks)
            if (c.counted && !c.ok) return false;
        return true;
    }
};

class Gate {
  public:
    template <typename Fn>
    void run(int number, const std::string& title, Fn&& fn) {
        Criterion c;
        c.title = title;
        fn(c);
        bool ok = c.passed();
        if (!ok) ++failures_;
        std::printf("[%s] %2d. %s\n", ok ? "PASS" : "FAIL", number, c.title.c_str());
        for (const Check& chk : c.checks) {
            const char* tag = chk.counted ? (chk.ok ? "ok" : "XX") : (chk.ok ? "note" : "note!");
            std::printf("        [%s] %s\n", tag, chk.text.c_str());
        }
        std::fflush(stdout);
    }

    int failures() const { return failures_; }

  private:
    int failures_ = 0;
};

Population population(double a, double b, double g, double D) {
    Population p;
    p.alpha = a;
    p.beta = b;
    p.gamma = g;
    p.D = D;
    return p;
}

TrialConfig reward_config(Protocol proto) {
    TrialConfig cfg;
    cfg.protocol = proto;
    cfg.pop = population(0.2, 0.5, 0.3, 25.0);
    cfg.N = 50;
    cfg.turns = 501000;
    cfg.burn_in = 1000;
    cfg.trials = 20;  // 20 x 500k measured turns = 1e7
    cfg.seed = 20250822;
    cfg.workers = 1;
    return cfg;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// ---- criteria ----

RewardStats g_bag_stats;    // shared between criteria 1 and 2
RewardStats g_queue_stats;

void criterion_fairness(Criterion& c) {
    auto start = std::chrono::steady_clock::now();
    TrialConfig cfg = reward_config(Protocol::Rpplns);
    g_bag_stats = run_honest(cfg);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double expect = honest_mean_reward(cfg.pop.alpha, cfg.pop.D);
    double dev = std::abs(g_bag_stats.mean - expect);
    c.expect(dev <= 3.0 * g_bag_stats.stderr_mean,
             "mean " + fmt(g_bag_stats.mean) + " vs " + fmt(expect) + ", |dev| " + fmt(dev)
                 + " <= 3*stderr " + fmt(3.0 * g_bag_stats.stderr_mean));
    c.expect(secs < 60.0, "runtime " + fmt(secs) + " s < 60 s for 1e7 turns");
    c.note(true, "measured " + std::to_string(g_bag_stats.measured_turns) + " turns x "
                     + std::to_string(g_bag_stats.trials) + " trials");
}

void criterion_variance(Criterion& c) {
    const double a = 0.2, N = 50, D = 25;
    TrialConfig cfg = reward_config(Protocol::Pplns);
    g_queue_stats = run_honest(cfg);

    const double bag_compact = rpplns_variance(a, N, D);
    const double bag_exact = rpplns_variance_exact(a, N, D);
    c.expect(rel_err(g_bag_stats.variance, bag_compact) <= 0.05,
             "unordered-window empirical variance " + fmt(g_bag_stats.variance)
                 + " within 5% of compact form " + fmt(bag_compact) + " (rel err "
                 + fmt(rel_err(g_bag_stats.variance, bag_compact)) + ")");
    c.note(rel_err(g_bag_stats.variance, bag_exact) <= 0.05,
           "same empirical variance vs full second-moment form " + fmt(bag_exact) + ": rel err "
               + fmt(rel_err(g_bag_stats.variance, bag_exact)));

    const double queue_compact = pplns_variance(a, N, D);
    const double queue_exact = pplns_variance_exact(a, N, D);
    c.expect(rel_err(g_queue_stats.variance, queue_compact) <= 0.05,
             "ordered-window empirical variance " + fmt(g_queue_stats.variance)
                 + " within 5% of compact form " + fmt(queue_compact) + " (rel err "
                 + fmt(rel_err(g_queue_stats.variance, queue_compact)) + ")");
    c.note(rel_err(g_queue_stats.variance, queue_exact) <= 0.05,
           "same empirical variance vs full second-moment form " + fmt(queue_exact)
               + ": rel err " + fmt(rel_err(g_queue_stats.variance, queue_exact)));

    // algebraic identities, independent of the simulation
    bool collapse_ok = true, offsets_ok = true;
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ua(0.01, 0.9), uD(2, 400);
    for (int i = 0; i < 200; ++i) {
        double aa = ua(rng), DD = std::floor(uD(rng));
        double lhs = pplns_variance(aa, 2 * DD, DD);
        double rhs = (aa - aa * aa) / (DD * DD) - aa / (4 * DD * DD * DD);
        if (std::abs(lhs - rhs) > 1e-12) collapse_ok = false;
        double NN = std::floor(uD(rng)) + 2;
        if (std::abs(rpplns_variance_exact(aa, NN, DD) - rpplns_variance(aa, NN, DD)
                     - aa * (NN - 2) / (NN * DD * DD))
            > 1e-12)
            offsets_ok = false;
        if (std::abs(pplns_variance_exact(aa, NN, DD) - pplns_variance(aa, NN, DD)
                     - aa * (NN - 1) / (2 * NN * DD * DD))
            > 1e-12)
            offsets_ok = false;
    }
    c.expect(collapse_ok,
             "compact ordered form equals (a-a^2)/D^2 - a/(4D^3) at N = 2D to 1e-12");
    c.note(offsets_ok, "exact-minus-compact offsets a(N-2)/(ND^2) and a(N-1)/(2ND^2) hold to "
                       "1e-12");
}

void criterion_steady_state(Criterion& c) {
    TrialConfig cfg;
    cfg.protocol = Protocol::Rpplns;
    cfg.pop = population(0.2, 0.3, 0.5, 25.0);
    cfg.N = 20;
    cfg.turns = 2002000;
    cfg.burn_in = 2000;
    cfg.trials = 5;  // 5 x 2e6 = 1e7 occupancy samples
    cfg.seed = 31337;
    cfg.workers = 1;
    SteadyResult res = empirical_steady_state(cfg);
    c.expect(res.tv_distance < 0.01,
             "TV distance " + fmt(res.tv_distance) + " < 0.01 from Binomial(20, 0.4) over "
                 + std::to_string(res.samples) + " samples");
    SteadyState st = steady_state(cfg.N, cfg.pop.alpha, cfg.pop.beta);
    double residual = detailed_balance_residual(st, cfg.N, cfg.pop.alpha, cfg.pop.beta);
    c.expect(residual < 1e-12,
             "analytic occupancy detailed-balance residual " + fmt(residual)
                 + " < 1e-12 across all cut-sets");
    c.note(std::abs(st.expected_shares - 8.0) < 1e-12, "expected occupancy 8 shares");
}

void criterion_lifetime(Criterion& c) {
    TrialConfig cfg;
    cfg.protocol = Protocol::Rpplns;
    cfg.pop = population(0.2, 0.5, 0.3, 25.0);
    cfg.N = 50;
    cfg.turns = 2001000;
    cfg.burn_in = 1000;
    cfg.trials = 2;
    cfg.seed = 777;
    cfg.workers = 1;
    LifetimeStats st = share_lifetime(cfg);
    const double N = cfg.N;
    double sigma = std::sqrt(N * N - N);  // sd of the lifetime count
    double band = 3.0 * sigma / std::sqrt(double(st.samples));
    c.expect(std::abs(st.mean_z - N) <= band,
             "mean lifetime " + fmt(st.mean_z) + " within 3 sigma (" + fmt(band) + ") of "
                 + fmt(N) + " over " + std::to_string(st.samples) + " tagged shares");
    double second = 2 * N * N - N;
    c.expect(rel_err(st.mean_z_sq, second) <= 0.05,
             "second moment " + fmt(st.mean_z_sq) + " within 5% of " + fmt(second));
    c.note(std::abs(st.survival_rate - (N - 1) / N) < 0.002,
           "per-push survival " + fmt(st.survival_rate) + " vs " + fmt((N - 1) / N));
}

void criterion_hopping(Criterion& c) {
    const double target = 10.0 / 20.0 + 6.0 / 30.0 + 0.1 * 200.0;  // 20.7
    const double exact =
        10.0 * 39.0 / (40.0 * 20.0) + 6.0 * 59.0 / (60.0 * 30.0) + 0.1 * 200.0;
    struct Named {
        const char* name;
        const char* text;
    };
    const Named schedules[] = {
        {"all pool 1", ""},
        {"all pool 2", "0 200\n"},
        {"alternating", "25 50\n75 100\n125 150\n175 200\n"},
    };
    std::vector<HopStats> stats;
    for (const Named& ns : schedules) {
        HopConfig cfg;
        cfg.pool1 = {40, 20.0, 0.45};
        cfg.pool2 = {60, 30.0, 0.45};
        cfg.alpha = 0.1;
        cfg.schedule = HoppingSchedule::parse(ns.text, 200.0);
        cfg.residual1 = 10;
        cfg.residual2 = 6;
        cfg.trials = 400;
        cfg.seed = 424242;
        cfg.workers = 1;
        HopStats st = hopping_experiment(cfg);
        stats.push_back(st);
        c.expect(st.ci_low <= target && target <= st.ci_high,
                 std::string(ns.name) + ": 3-sigma CI [" + fmt(st.ci_low) + ", "
                     + fmt(st.ci_high) + "] contains " + fmt(target));
        c.note(st.ci_low <= exact && exact <= st.ci_high,
               std::string(ns.name) + ": CI also contains the exact-residual value "
                   + fmt(exact));
    }
    bool overlap = true;
    for (std::size_t i = 0; i < stats.size(); ++i)
        for (std::size_t j = i + 1; j < stats.size(); ++j)
            if (stats[i].ci_low > stats[j].ci_high || stats[j].ci_low > stats[i].ci_high)
                overlap = false;
    c.expect(overlap, "the three schedule CIs mutually overlap");
}

void criterion_oracles(Criterion& c) {
    std::mt19937_64 rng(1009);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto random_pop = [&](double D) {
        double u = unit(rng) * 0.9 + 0.02, v = unit(rng) * 0.9 + 0.02;
        if (u > v) std::swap(u, v);
        double a = u, b = v - u, g = 1.0 - v;
        return population(a, b, g, D);
    };

    double worst_queue = 0.0;
    for (int i = 0; i < 100; ++i) {
        std::uint32_t N = 3 + static_cast<std::uint32_t>(unit(rng) * 27);
        double D = 2.0 + std::floor(unit(rng) * 38);
        Population pop = random_pop(D);
        TwoTurnRevenue rev = pplns_two_turn(N, D, pop.alpha, pop.beta, pop.gamma);
        TwoTurnOracle oracle = two_turn_oracle_pplns(N, pop);
        worst_queue = std::max(worst_queue, std::abs(rev.honest - oracle.honest));
        worst_queue = std::max(worst_queue, std::abs(rev.hoard - oracle.hoard));
        for (int j = 0; j < 6; ++j) {
            worst_queue =
                std::max(worst_queue, std::abs(rev.honest_cases[j] - oracle.honest_cases[j]));
            worst_queue =
                std::max(worst_queue, std::abs(rev.hoard_cases[j] - oracle.hoard_cases[j]));
        }
    }
    c.expect(worst_queue <= 1e-12,
             "ordered-window closed forms vs enumeration at 100 random points: max |dev| "
                 + fmt(worst_queue));

    double worst_bag = 0.0, worst_dev_struct = 0.0;
    for (int i = 0; i < 100; ++i) {
        std::uint32_t N = 2 + static_cast<std::uint32_t>(unit(rng) * 23);
        std::uint32_t k = static_cast<std::uint32_t>(unit(rng) * (N + 1));
        if (k > N) k = N;
        double D = 2.0 + std::floor(unit(rng) * 48);
        Population pop = random_pop(D);
        TwoTurnRevenue exact =
            rpplns_two_turn(k, N, D, pop.alpha, pop.beta, pop.gamma, false);
        TwoTurnOracle oracle = two_turn_oracle_rpplns(k, N, pop);
        worst_bag = std::max(worst_bag, std::abs(exact.honest - oracle.honest));
        worst_bag = std::max(worst_bag, std::abs(exact.hoard - oracle.hoard));
        for (int j = 0; j < 6; ++j) {
            worst_bag =
                std::max(worst_bag, std::abs(exact.honest_cases[j] - oracle.honest_cases[j]));
            worst_bag =
                std::max(worst_bag, std::abs(exact.hoard_cases[j] - oracle.hoard_cases[j]));
        }
        // the compact flavor deviates from the oracle by three known terms
        TwoTurnRevenue compact =
            rpplns_two_turn(k, N, D, pop.alpha, pop.beta, pop.gamma, true);
        const double r = (N - 1.0) / (double(N) * D);
        FTerms f = f_terms(k, N, D);
        double p3 = compact.case_probs[2], p5 = compact.case_probs[4];
        double dev_honest = (compact.honest - exact.honest) - p3 * (double(k) / N) * (1.0 / N + r);
        double dev_hoard = (exact.hoard - compact.hoard) - (p3 * f.f2b + p5 * k * r);
        worst_dev_struct = std::max(worst_dev_struct, std::abs(dev_honest));
        worst_dev_struct = std::max(worst_dev_struct, std::abs(dev_hoard));
    }
    c.expect(worst_bag <= 1e-12,
             "unordered-window full-accounting forms vs enumeration at 100 random points: "
             "max |dev| "
                 + fmt(worst_bag));
    c.expect(worst_dev_struct <= 1e-12,
             "compact flavor's deviation from enumeration equals its three documented terms "
             "(max residual "
                 + fmt(worst_dev_struct) + ")");

    // k = 0 per-case surplus vector against the enumeration arbiter
    std::set<std::pair<int, int>> seen;
    double worst_delta = 0.0, worst_case3 = 0.0;
    double printed_case3_gap = 0.0;
    while (seen.size() < 20) {
        int N = 2 + static_cast<int>(unit(rng) * 198);
        int D = 2 + static_cast<int>(unit(rng) * 198);
        if (!seen.insert({N, D}).second) continue;
        Population pop = population(0.3, 0.3, 0.4, D);
        TwoTurnOracle oracle = two_turn_oracle_rpplns(0, N, pop);
        K0Deltas deltas = rpplns_k0_deltas(N, D);
        for (int j = 0; j < 6; ++j) {
            double gap = oracle.hoard_cases[j] - oracle.honest_cases[j];
            if (j == 2) {
                worst_case3 = std::max(worst_case3, std::abs(gap - deltas.case3_from_revenues));
                printed_case3_gap =
                    std::max(printed_case3_gap, std::abs(gap - deltas.compact[2]));
            } else {
                worst_delta = std::max(worst_delta, std::abs(gap - deltas.compact[j]));
            }
        }
    }
    c.expect(worst_delta <= 1e-12,
             "k=0 surplus entries 1,2,4,5,6 match the enumeration at 20 (N,D) pairs: max |dev| "
                 + fmt(worst_delta));
    c.expect(worst_case3 <= 1e-12,
             "k=0 case-3 surplus equals the case-1 form per the enumeration: max |dev| "
                 + fmt(worst_case3));
    c.note(printed_case3_gap > 1e-6,
           "compact case-3 entry differs from the enumeration by up to " + fmt(printed_case3_gap)
               + " (known defect: its (N-1)^2/(N^2 D) term is printed as (N-1)/(N^2 D))");
}

void criterion_thresholds(Criterion& c) {
    const double h = 1e-4;
    auto bracket = [&](auto&& gap_at, double lo, double hi) {
        // returns the left edge of the first sign-change cell, or NaN
        double prev = gap_at(lo);
        for (double a = lo + h; a <= hi + h / 2; a += h) {
            double cur = gap_at(a);
            if ((prev < 0) != (cur < 0)) return a - h;
            prev = cur;
        }
        return std::numeric_limits<double>::quiet_NaN();
    };

    for (double N : {100.0, 1000.0}) {
        const double D = N / 2;
        const double thr = pplns_hoard_threshold(N, D);
        auto gap_at = [&](double a) {
            Population pop = population(a, 0.3, 1.0 - a - 0.3, D);
            TwoTurnOracle o = two_turn_oracle_pplns(static_cast<std::uint32_t>(N), pop);
            return o.hoard - o.honest;
        };
        double left = bracket(gap_at, thr - 5 * h, thr + 5 * h);
        bool ok = std::isfinite(left) && left <= thr && thr <= left + h;
        c.expect(ok, "ordered window N=" + fmt(N) + ": enumeration sign flip in ["
                         + fmt(left) + ", " + fmt(left + h) + "] brackets threshold "
                         + fmt(thr));
    }

    for (double N : {100.0, 1000.0}) {
        const double D = N / 2;
        const double thr = rpplns_hoard_threshold_k0(N, D, 0.0);
        auto gap_at = [&](double a) {
            Population pop = population(a, 0.0, 1.0 - a, D);
            TwoTurnOracle o = two_turn_oracle_rpplns(0, static_cast<std::uint32_t>(N), pop);
            return o.hoard - o.honest;
        };
        double left = bracket(gap_at, thr - 5 * h, thr + 5 * h);
        bool ok = std::isfinite(left) && left <= thr && thr <= left + h;
        c.expect(ok, "unordered window N=" + fmt(N) + ", lone-miner pool: sign flip in ["
                         + fmt(left) + ", " + fmt(left + h) + "] brackets threshold "
                         + fmt(thr));
        // with rest-of-pool power the enumeration tracks the beta-free form
        const double thr_exact = rpplns_hoard_threshold_k0_exact(N, D);
        auto gap_beta = [&](double a) {
            Population pop = population(a, 0.3, 1.0 - a - 0.3, D);
            TwoTurnOracle o = two_turn_oracle_rpplns(0, static_cast<std::uint32_t>(N), pop);
            return o.hoard - o.honest;
        };
        double left_b = bracket(gap_beta, thr_exact - 5 * h, thr_exact + 5 * h);
        c.note(std::isfinite(left_b) && left_b <= thr_exact && thr_exact <= left_b + h,
               "unordered window N=" + fmt(N) + ", beta=0.3: flip brackets the beta-free form "
                   + fmt(thr_exact) + " (compact form would sit at "
                   + fmt(rpplns_hoard_threshold_k0(N, D, 0.3)) + ")");
        double identity = rpplns_hoard_threshold_k0(N, D, 0.3) - thr_exact
                          + 0.3 * (N - 2) / ((D - 1) * (D - 1));
        c.expect(std::abs(identity) <= 1e-12,
                 "compact-minus-exact threshold offset equals -beta(N-2)/(D-1)^2 at N="
                     + fmt(N));
    }
}

void criterion_regimes(Criterion& c) {
    auto start = std::chrono::steady_clock::now();
    SweepConfig cfg;
    cfg.N = 200;
    cfg.D = 100.0;
    cfg.k_max = 120;
    cfg.grid_step = 0.1;
    cfg.pool_fractions = {0.05, 0.5, 0.95};
    cfg.convergence_tol = 5e-3;
    cfg.workers = 1;
    SweepResult res = simplex_sweep(cfg);
    int hoard_block_low = 0, honest_mid = 0, other_mid = 0, hoard_share_high = 0;
    for (const SweepPoint& pt : res.points) {
        if (pt.F == 0.05 && pt.regime == Regime::HoardBlock) ++hoard_block_low;
        if (pt.F == 0.5) (pt.regime == Regime::Honest ? honest_mid : other_mid) += 1;
        if (pt.F == 0.95 && pt.regime == Regime::HoardShare) ++hoard_share_high;
    }
    c.expect(hoard_block_low > 0,
             "nearly empty window (F=0.05): " + std::to_string(hoard_block_low)
                 + " of 66 lattice points hoard blocks");
    c.expect(other_mid == 0, "half-held window (F=0.5): all 66 lattice points honest ("
                                 + std::to_string(honest_mid) + "/66)");
    c.expect(hoard_share_high > 0,
             "nearly owned window (F=0.95): " + std::to_string(hoard_share_high)
                 + " of 66 lattice points hoard shares");
    c.note(res.all_converged, "every sweep solve met the 5e-3 convergence tolerance");

    // The share comparison must be the release lottery: the direct
    // landed-state form g(l+1,0,0) >= g(l,1,0) holds even where hoarding
    // is strictly optimal, so it can never detect the F=0.95 regime.
    {
        int direct_holds = 0, resolved = 0;
        for (const SweepPoint& pt : res.points) {
            if (pt.F != 0.95 || pt.regime != Regime::HoardShare || resolved >= 3)
                continue;
            SolverConfig sc;
            sc.N = cfg.N;
            sc.D = cfg.D;
            sc.alpha = pt.alpha;
            sc.beta = pt.beta;
            sc.gamma = pt.gamma;
            sc.k_max = cfg.k_max;
            ValueTable t = value_iteration(sc);
            std::uint32_t l = 190;
            if (t.value(l + 1, 0, 0) >= t.value(l, 1, 0)) ++direct_holds;
            ++resolved;
        }
        c.note(resolved > 0 && direct_holds == resolved,
               "landed-state form g(l+1,0,0) >= g(l,1,0) holds at "
                   + std::to_string(direct_holds) + "/" + std::to_string(resolved)
                   + " hoarding points: it cannot express the release incentive");
    }

    // bisect the l=0 block-publication boundary and compare scales
    for (double beta : {0.0, 0.2, 0.4}) {
        auto ic_at = [&](double a) {
            SolverConfig sc;
            sc.N = 200;
            sc.D = 100.0;
            sc.alpha = a;
            sc.beta = beta;
            sc.gamma = 1.0 - a - beta;
            sc.k_max = 120;
            ValueTable t = value_iteration(sc);
            return check_block_ic(sc, t, 0);
        };
        double lo = 1e-3, hi = 0.5;
        bool ic_lo = ic_at(lo), ic_hi = ic_at(hi);
        double ref = rpplns_hoard_threshold_k0(200.0, 100.0, beta);
        if (!ic_lo || ic_hi) {
            c.expect(false, "beta=" + fmt(beta)
                                + ": no publication-incentive flip inside [0.001, 0.5]");
            continue;
        }
        for (int it = 0; it < 14; ++it) {
            double mid = 0.5 * (lo + hi);
            (ic_at(mid) ? lo : hi) = mid;
        }
        double star = 0.5 * (lo + hi);
        c.expect(star >= ref / 2 && star <= ref * 2,
                 "beta=" + fmt(beta) + ": solver boundary " + fmt(star)
                     + " within factor 2 of closed form " + fmt(ref));
        if (beta == 0.0)
            c.note(true,
                   "at beta=0 the multi-turn boundary tracks gamma/D ~ "
                       + fmt(1.0 / 100.0) + " while the one-turn form sits near 3/D; "
                       + "rest-of-pool pushes close the gap at larger beta");
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(secs < 600.0, "sweep plus boundary bisections in " + fmt(secs) + " s < 600 s");
}

void criterion_state_counts(Criterion& c) {
    // unordered-window counts vs direct enumeration of count vectors
    bool bag_ok = true;
    for (std::uint32_t m = 1; m <= 4 && bag_ok; ++m) {
        for (std::uint32_t N = 1; N <= 12 && bag_ok; ++N) {
            std::uint64_t count = 0;
            std::vector<std::uint32_t> stack(m, 0);
            // odometer over all count vectors with sum <= N
            while (true) {
                std::uint64_t sum = 0;
                for (std::uint32_t v : stack) sum += v;
                if (sum <= N) ++count;
                std::uint32_t i = 0;
                while (i < m) {
                    if (++stack[i] <= N) break;
                    stack[i] = 0;
                    ++i;
                }
                if (i == m) break;
            }
            if (state_counts(m, N).bag_states_exact != std::to_string(count)) bag_ok = false;
        }
    }
    c.expect(bag_ok, "unordered-window counts match direct enumeration for m <= 4, N <= 12");

    // ordered-window counts vs schoolbook decimal powers
    auto decimal_power = [](std::uint32_t m, std::uint32_t N) {
        std::string digits = "1";  // little-endian decimal
        for (std::uint32_t i = 0; i < N; ++i) {
            std::uint32_t carry = 0;
            for (char& ch : digits) {
                std::uint32_t v = static_cast<std::uint32_t>(ch - '0') * m + carry;
                ch = static_cast<char>('0' + v % 10);
                carry = v / 10;
            }
            while (carry) {
                digits.push_back(static_cast<char>('0' + carry % 10));
                carry /= 10;
            }
        }
        return std::string(digits.rbegin(), digits.rend());
    };
    bool queue_ok = true;
    for (std::uint32_t m = 2; m <= 5 && queue_ok; ++m)
        for (std::uint32_t N : {1u, 7u, 10u, 64u, 101u})
            if (state_counts(m, N).queue_states != decimal_power(m, N)) queue_ok = false;
    c.expect(queue_ok, "ordered-window counts equal m^N in exact decimal, including 2^64 = "
                           + state_counts(2, 64).queue_states);

    // walking the machine reaches every ordered assignment
    std::set<std::string> reached;
    const std::uint32_t m = 3, N = 3;
    std::vector<std::uint32_t> seq(N, 1);
    while (true) {
        QueueState q = QueueState::empty(N);
        for (std::uint32_t owner : seq) q = pplns_transition(q, {MessageKind::Share, owner});
        reached.insert(format_state(q));
        std::uint32_t i = 0;
        while (i < N) {
            if (++seq[i] <= m) break;
            seq[i] = 1;
            ++i;
        }
        if (i == N) break;
    }
    c.expect(reached.size() == 27, "the ordered machine reaches all 27 full states at m=3, N=3");
    c.note(true, "m=2, N=3 reference counts: ordered " + state_counts(2, 3).queue_states
                     + ", unordered " + state_counts(2, 3).bag_states_exact + ", bound "
                     + fmt(state_counts(2, 3).bag_states_bound));
}

void criterion_properties(Criterion& c) {
    // budget balance across machines, partial fills included
    std::mt19937_64 rng(555);
    std::uniform_int_distribution<int> owner(1, 3), kind(0, 4);
    bool balance_ok = true;
    QueueState q = QueueState::empty(7);
    BagState bag = BagState::empty(7, 3);
    QueueBagState hybrid = QueueBagState::empty(7, 3, 3);
    for (int i = 0; i < 5000 && balance_ok; ++i) {
        Message msg{kind(rng) == 0 ? MessageKind::Block : MessageKind::Share,
                    static_cast<MinerId>(kind(rng) == 1 ? 0 : owner(rng))};
        if (msg.kind == MessageKind::Share && msg.owner == 0) msg.owner = 1;
        auto check_pay = [&](const PayoutVector& pay, bool held, bool from_pool) {
            double sum = 0.0;
            for (double v : pay) sum += v;
            double want = (held && from_pool) ? 1.0 : 0.0;
            if (std::abs(sum - want) > 1e-12) balance_ok = false;
        };
        if (msg.kind == MessageKind::Block) {
            bool from_pool = msg.owner != 0;
            auto [q2, payq] = apply_block_event(q, msg, 3);
            check_pay(payq, q2.filled() > 0, from_pool);
            q = q2;
            auto [b2, payb] = apply_block_event(bag, msg, rng);
            check_pay(payb, b2.total() > 0, from_pool);
            bag = b2;
            auto [h2, payh] = apply_block_event(hybrid, msg, rng, 3);
            check_pay(payh, h2.queue.filled() + h2.bag.total() > 0, from_pool);
            hybrid = h2;
        } else {
            q = pplns_transition(q, msg);
            bag = rpplns_transition_sample(bag, msg, rng);
            hybrid = queuebag_transition_sample(hybrid, msg, rng);
        }
    }
    c.expect(balance_ok, "every simulated block payout sums to exactly the reward paid");

    // transition distributions stay normalized over random states
    bool dist_ok = true;
    for (int i = 0; i < 300 && dist_ok; ++i) {
        BagState b = BagState::empty(6, 3);
        for (int j = 0; j < 20; ++j)
            b = rpplns_transition_sample(b, {MessageKind::Share,
                                             static_cast<MinerId>(owner(rng))},
                                         rng);
        try {
            validate_distribution(
                rpplns_transition_distribution(b, {MessageKind::Share,
                                                   static_cast<MinerId>(owner(rng))}));
            validate_distribution(
                queuebag_transition_distribution(hybrid, {MessageKind::Share,
                                                          static_cast<MinerId>(owner(rng))}));
        } catch (const std::invalid_argument&) {
            dist_ok = false;
        }
    }
    c.expect(dist_ok, "transition distributions are normalized with distinct outcomes");

    // determinism: worker count never changes statistics, seeds do
    TrialConfig cfg;
    cfg.protocol = Protocol::Rpplns;
    cfg.pop = population(0.3, 0.4, 0.3, 5.0);
    cfg.N = 20;
    cfg.turns = 50000;
    cfg.burn_in = 500;
    cfg.trials = 4;
    cfg.seed = 909;
    cfg.workers = 1;
    RewardStats serial = run_honest(cfg);
    cfg.workers = 4;
    RewardStats threaded = run_honest(cfg);
    c.expect(serial.mean == threaded.mean && serial.variance == threaded.variance
                 && serial.payout_variance == threaded.payout_variance,
             "workers=1 and workers=4 give bit-identical statistics");
    cfg.workers = 1;
    RewardStats repeat = run_honest(cfg);
    cfg.seed = 910;
    RewardStats reseeded = run_honest(cfg);
    c.expect(repeat.mean == serial.mean && repeat.variance == serial.variance,
             "same seed reproduces the run bit for bit");
    c.expect(reseeded.mean != serial.mean, "a different seed gives a different run");

    // value-table invariants on a spot grid
    SolverConfig sc;
    sc.N = 60;
    sc.D = 30.0;
    sc.alpha = 0.3;
    sc.beta = 0.3;
    sc.gamma = 0.4;
    sc.k_max = 40;
    for (std::uint32_t l : {0u, 10u, 30u, 50u, 60u})
        for (std::uint32_t s : {0u, 2u, 5u, 10u, 20u, 30u, 40u, 50u, 55u, 58u})
            sc.track_states.push_back({l, s, 0});
    ValueTable t = value_iteration(sc);
    bool bounds_ok = true, mono_l = true, mono_s = true, mono_b = true, mono_k = true;
    for (std::uint32_t s = 0; s <= t.s_max; ++s)
        for (std::uint32_t b = 0; b <= 1; ++b)
            for (std::uint32_t l = 0; l <= t.N; ++l) {
                double v = t.value(l, s, b);
                if (!(v >= 0.0 && v <= sc.k_max + 2.0)) bounds_ok = false;
                if (l < t.N && t.value(l + 1, s, b) < v - 1e-12) mono_l = false;
                if (s < t.s_max && t.value(l, s + 1, b) < v - 1e-12) mono_s = false;
                if (b == 0 && t.value(l, s, 1) < v - 1e-12) mono_b = false;
            }
    for (const auto& series : t.track_values)
        for (std::size_t k = 1; k < series.size(); ++k)
            if (series[k] < series[k - 1] - 1e-12) mono_k = false;
    c.expect(bounds_ok, "0 <= g_k <= k + 2 across the full lattice at k=40");
    c.expect(mono_k, "g_k is nondecreasing in the horizon on the 50-state spot grid");
    c.expect(mono_l && mono_s && mono_b,
             "g_k is nondecreasing in held shares, hoarded shares, and the held block");
}

}  // namespace

int main() {
    Gate gate;
    std::printf("acceptance gate: payout machines, closed forms, and solver\n");
    gate.run(1, "honest mean reward (unordered window, 1e7 turns)", criterion_fairness);
    gate.run(2, "per-turn reward variance vs compact closed forms", criterion_variance);
    gate.run(3, "window occupancy vs the binomial steady state", criterion_steady_state);
    gate.run(4, "tagged share lifetime moments", criterion_lifetime);
    gate.run(5, "two-pool hopping immunity", criterion_hopping);
    gate.run(6, "two-turn closed forms vs exhaustive enumeration", criterion_oracles);
    gate.run(7, "hoarding thresholds bracket the enumeration sign flip", criterion_thresholds);
    gate.run(8, "strategy regimes across the hash simplex", criterion_regimes);
    gate.run(9, "state-space counts vs brute force", criterion_state_counts);
    gate.run(10, "property suite: budget, normalization, determinism, bounds",
             criterion_properties);
    std::printf("%d of 10 criteria passed\n", 10 - gate.failures());
    return gate.failures();
}
