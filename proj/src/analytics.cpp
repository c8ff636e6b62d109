// Implementation of the closed-form analytics.

#include "analytics.hpp"

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>

namespace poolsim {

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

void check_hash_fraction(double x, const char* what) {
    require(x >= 0.0 && x <= 1.0, what);
}

}  // namespace

double honest_mean_reward(double alpha, double D) {
    check_hash_fraction(alpha, "hash fraction must lie in [0, 1]");
    require(D >= 1.0, "relative difficulty must be at least 1");
    return alpha / D;
}

double rpplns_variance(double alpha, double N, double D) {
    check_hash_fraction(alpha, "hash fraction must lie in [0, 1]");
    require(N >= 1.0 && D >= 1.0, "capacity and difficulty must be at least 1");
    return (alpha - alpha * alpha) / (D * D) + alpha / (N * D);
}

double rpplns_variance_exact(double alpha, double N, double D) {
    check_hash_fraction(alpha, "hash fraction must lie in [0, 1]");
    require(N >= 1.0 && D >= 1.0, "capacity and difficulty must be at least 1");
    return alpha * (1.0 / (N * D) + 2.0 * (N - 1.0) / (N * D * D)) - (alpha / D) * (alpha / D);
}

double pplns_variance(double alpha, double N, double D) {
    check_hash_fraction(alpha, "hash fraction must lie in [0, 1]");
    require(N >= 1.0 && D >= 1.0, "capacity and difficulty must be at least 1");
    return alpha / (2.0 * D * D) + alpha / (N * D) - alpha * alpha / (D * D)
           - alpha / (2.0 * N * D * D);
}

double pplns_variance_exact(double alpha, double N, double D) {
    check_hash_fraction(alpha, "hash fraction must lie in [0, 1]");
    require(N >= 1.0 && D >= 1.0, "capacity and difficulty must be at least 1");
    return alpha * (1.0 / (N * D) + (N - 1.0) / (N * D * D)) - (alpha / D) * (alpha / D);
}

SteadyState steady_state(std::uint32_t N, double alpha, double beta) {
    require(N >= 1, "capacity must be at least 1");
    require(alpha >= 0.0 && beta > 0.0,
            "steady state requires alpha >= 0 and beta > 0 so the chain mixes");
    const double p = alpha / (alpha + beta);
    SteadyState st;
    st.pi.assign(N + 1, 0.0);
    // Binomial(N, p) by the ratio recurrence; exact up to rounding.
    st.pi[0] = std::pow(1.0 - p, static_cast<double>(N));
    for (std::uint32_t k = 0; k + 1 <= N; ++k)
        st.pi[k + 1] = st.pi[k] * (static_cast<double>(N - k) / static_cast<double>(k + 1))
                       * (p / (1.0 - p));
    st.expected_shares = static_cast<double>(N) * p;
    return st;
}

double detailed_balance_residual(const SteadyState& st, std::uint32_t N, double alpha,
                                 double beta) {
    require(st.pi.size() == static_cast<std::size_t>(N) + 1,
            "steady state size must match the capacity");
    const double a = alpha / (alpha + beta);
    const double b = 1.0 - a;
    double worst = 0.0;
    for (std::uint32_t i = 0; i < N; ++i) {
        double up = st.pi[i] * a * static_cast<double>(N - i) / static_cast<double>(N);
        double down = st.pi[i + 1] * b * static_cast<double>(i + 1) / static_cast<double>(N);
        worst = std::max(worst, std::abs(up - down));
    }
    return worst;
}

StateCounts state_counts(std::uint32_t m, std::uint32_t N) {
    require(m >= 1 && N >= 1, "state counts need at least one miner and one slot");
    StateCounts out;

    mpz_class queue;
    mpz_ui_pow_ui(queue.get_mpz_t(), m, N);
    out.queue_states = queue.get_str();

    // Non-negative integer vectors of length m with sum <= N.
    mpz_class bag;
    mpz_bin_uiui(bag.get_mpz_t(), N + m, m);
    out.bag_states_exact = bag.get_str();

    mpz_class numer;
    mpz_ui_pow_ui(numer.get_mpz_t(), N + m - 2, m - 1);
    numer *= N;
    mpz_class denom;
    mpz_fac_ui(denom.get_mpz_t(), m - 1);
    out.bag_states_bound = mpq_class(numer, denom).get_d();
    return out;
}

double residual_value(double A, double D) {
    require(A >= 0.0, "abandoned share count must be non-negative");
    require(D >= 1.0, "relative difficulty must be at least 1");
    return A / D;
}

double residual_value_exact(double A, double N, double D) {
    require(A >= 0.0, "abandoned share count must be non-negative");
    require(N >= 1.0 && D >= 1.0, "capacity and difficulty must be at least 1");
    return A * (N - 1.0) / (N * D);
}

// ---- two-turn comparison ----

namespace {

// Residual stream value of one share resident in a full bag of N.
double share_residual(double N, double D) { return (N - 1.0) / (N * D); }

void check_population(double alpha, double beta, double gamma, double D) {
    check_hash_fraction(alpha, "hash fraction must lie in [0, 1]");
    check_hash_fraction(beta, "hash fraction must lie in [0, 1]");
    check_hash_fraction(gamma, "hash fraction must lie in [0, 1]");
    require(std::abs(alpha + beta + gamma - 1.0) <= 1e-12,
            "hash power fractions must sum to 1");
    require(D >= 1.0, "relative difficulty must be at least 1");
}

std::array<double, 6> case_probabilities(double alpha, double beta, double gamma, double D) {
    return {alpha / D,          alpha * (D - 1.0) / D, beta / D,
            beta * (D - 1.0) / D, gamma / D,           gamma * (D - 1.0) / D};
}

}  // namespace

FTerms f_terms(double k, double N, double D) {
    require(N >= 1.0 && D >= 1.0, "capacity and difficulty must be at least 1");
    require(k >= 0.0 && k <= N, "own share count must lie in [0, N]");
    const double r = share_residual(N, D);
    const double own = k / N;          // incoming push displaces an own share
    const double other = (N - k) / N;  // incoming push displaces another share
    FTerms f;
    // Own push: k own shares stay k (own displaced) or grow to k+1.
    f.f1b = own * (k / N + k * r) + other * ((k + 1.0) / N + (k + 1.0) * r);
    f.f1s = own * (k * r) + other * ((k + 1.0) * r);
    // Another miner's push: k own shares shrink to k-1 or stay k.
    f.f2b = own * ((k - 1.0) / N + (k - 1.0) * r) + other * (k / N + k * r);
    f.f2s = own * ((k - 1.0) * r) + other * (k * r);
    return f;
}

TwoTurnRevenue pplns_two_turn(double N, double D, double alpha, double beta, double gamma) {
    require(N >= 3.0, "the queue comparison needs at least three slots");
    check_population(alpha, beta, gamma, D);

    const double n = N, d = D;
    TwoTurnRevenue rev;
    rev.case_probs = case_probabilities(alpha, beta, gamma, d);

    // Honest: the fresh block is pushed now; the second event follows.
    rev.honest_cases = {
        3.0 / n + (n - 2.0) / (n * d) + (n - 1.0) / (n * d),   // own block
        1.0 / n + (n - 2.0) / (n * d) + (n - 1.0) / (n * d),   // own share
        2.0 / n + (n - 2.0) / (n * d),                         // other pool block
        1.0 / n + (n - 2.0) / (n * d),                         // other pool share
        1.0 / n + (n - 1.0) / (n * d),                         // non-pool block
        1.0 / n + (n - 1.0) / (n * d),                         // non-pool share
    };
    // Hoard: the block is held through the second event, published after it
    // unless a competing block (cases 3 and 5) kills it.
    rev.hoard_cases = {
        1.0 / n + (n - 1.0) / (n * d),                         // own block replaces it
        2.0 / n + (n - 2.0) / (n * d) + (n - 1.0) / (n * d),   // own share then the block
        0.0,                                                   // other pool block kills it
        1.0 / n + (n - 1.0) / (n * d),                         // other share then the block
        0.0,                                                   // non-pool block kills it
        1.0 / n + (n - 1.0) / (n * d),                         // non-pool share then the block
    };
    for (int i = 0; i < 6; ++i) {
        rev.honest += rev.case_probs[i] * rev.honest_cases[i];
        rev.hoard += rev.case_probs[i] * rev.hoard_cases[i];
    }
    return rev;
}

TwoTurnRevenue rpplns_two_turn(double k, double N, double D, double alpha, double beta,
                               double gamma, bool compact_forms) {
    require(N >= 1.0, "capacity must be at least 1");
    require(k >= 0.0 && k <= N, "own share count must lie in [0, N]");
    check_population(alpha, beta, gamma, D);

    const double n = N, d = D;
    const double r = share_residual(n, d);
    const double own = k / n;
    const double other = (n - k) / n;
    auto f1b = [&](double kk) { return f_terms(kk, n, d).f1b; };
    auto f1s = [&](double kk) { return f_terms(kk, n, d).f1s; };
    auto f2b = [&](double kk) { return f_terms(kk, n, d).f2b; };
    auto f2s = [&](double kk) { return f_terms(kk, n, d).f2s; };
    // At k = n the up-shifted terms carry weight other = 0 and k + 1 leaves
    // the f-term domain, so they are pinned to zero instead of evaluated.
    const bool full = k >= n;
    const double f1b_up = full ? 0.0 : f1b(k + 1.0);
    const double f1s_up = full ? 0.0 : f1s(k + 1.0);
    const double f2b_up = full ? 0.0 : f2b(k + 1.0);
    const double f2s_up = full ? 0.0 : f2s(k + 1.0);

    TwoTurnRevenue rev;
    rev.case_probs = case_probabilities(alpha, beta, gamma, d);

    // Honest: push the fresh block (pays on the post-push count), then the
    // second event lands on the moved state.
    rev.honest_cases = {
        own * (k / n + f1b(k)) + other * ((k + 1.0) / n + f1b_up),
        own * (k / n + f1s(k)) + other * ((k + 1.0) / n + f1s_up),
        own * (k / n + (compact_forms ? f1b(k) : f2b(k)))
            + other * ((k + 1.0) / n + f2b_up),
        own * (k / n + f2s(k)) + other * ((k + 1.0) / n + f2s_up),
        f1b(k),
        f1b(k),
    };
    // Hoard: cases 3 and 5 lose the private block; the compact entries also
    // forfeit the bag payout and residual that the exact accounting keeps.
    rev.hoard_cases = {
        f1b(k),
        own * f1b(k) + other * f1b_up,
        compact_forms ? 0.0 : f2b(k),
        (k > 0.0 ? own * f1b(k - 1.0) : 0.0) + other * f1b(k),
        compact_forms ? 0.0 : k * r,
        f1b(k),
    };
    for (int i = 0; i < 6; ++i) {
        rev.honest += rev.case_probs[i] * rev.honest_cases[i];
        rev.hoard += rev.case_probs[i] * rev.hoard_cases[i];
    }
    return rev;
}

double pplns_hoard_threshold(double N, double D) {
    require(N >= 3.0, "the queue comparison needs at least three slots");
    require(D >= 2.0, "the threshold needs relative difficulty at least 2");
    return (N + D - 1.0) / ((D - 1.0) * (D - 1.0));
}

double rpplns_hoard_threshold_k0(double N, double D, double beta) {
    require(N >= 2.0, "the bag comparison needs at least two slots");
    require(D >= 2.0, "the threshold needs relative difficulty at least 2");
    check_hash_fraction(beta, "hash fraction must lie in [0, 1]");
    return (N * D / (N - 1.0) + N - beta * (N - 2.0)) / ((D - 1.0) * (D - 1.0));
}

double rpplns_hoard_threshold_k0_exact(double N, double D) {
    require(N >= 2.0, "the bag comparison needs at least two slots");
    require(D >= 2.0, "the threshold needs relative difficulty at least 2");
    return N * (N + D - 1.0) / ((N - 1.0) * (D - 1.0) * (D - 1.0));
}

K0Deltas rpplns_k0_deltas(double N, double D) {
    require(N >= 2.0 && D >= 1.0, "capacity must be at least 2 and difficulty at least 1");
    const double n = N, d = D;
    K0Deltas out;
    out.compact = {
        -(1.0 / n + (n - 1.0) / (n * n) + (n - 1.0) * (n - 1.0) / (n * n * d)),
        (n - 1.0) / (n * n),
        -(1.0 / n + (n - 1.0) / (n * n) + (n - 1.0) / (n * n * d)),
        (n - 1.0) / (n * n * d),
        -(1.0 / n + (n - 1.0) / (n * d)),
        0.0,
    };
    out.case3_from_revenues = out.compact[0];
    return out;
}

}  // namespace poolsim
