#include <cmath>
#include <cstring>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "poolsim.h"

using nlohmann::json;

TEST_CASE("version and error state") {
    REQUIRE(ps_version() != nullptr);
    CHECK(std::string(ps_version()) == "1.0.0");
    REQUIRE(ps_last_error() != nullptr);
}

TEST_CASE("pool handle rejects bad construction") {
    ps_pool* pool = nullptr;
    CHECK(ps_pool_create("nonsense", 5, 0, 2, 1, &pool) == PS_ERR_DOMAIN);
    CHECK(pool == nullptr);
    CHECK(std::string(ps_last_error()).find("kind") != std::string::npos);
    CHECK(ps_pool_create(nullptr, 5, 0, 2, 1, &pool) == PS_ERR_INVALID_ARGUMENT);
    CHECK(ps_pool_create("pplns", 0, 0, 2, 1, &pool) == PS_ERR_DOMAIN);
}

TEST_CASE("queue pool walks the documented example") {
    ps_pool* pool = nullptr;
    REQUIRE(ps_pool_create("pplns", 9, 0, 9, 7, &pool) == PS_OK);
    const uint32_t seedq[] = {4, 1, 2, 8, 3, 1, 2, 1, 5};  // oldest first
    for (uint32_t owner : seedq) REQUIRE(ps_pool_push(pool, 0, owner, nullptr) == PS_OK);
    REQUIRE(ps_pool_push(pool, 0, 3, nullptr) == PS_OK);
    char* text = nullptr;
    REQUIRE(ps_pool_format(pool, &text) == PS_OK);
    CHECK(std::string(text) == "3,5,1,2,1,3,8,2,1");
    ps_string_free(text);
    ps_pool_destroy(pool);
}

TEST_CASE("pool payouts respect push-then-pay") {
    ps_pool* pool = nullptr;
    REQUIRE(ps_pool_create("pplns", 4, 0, 2, 7, &pool) == PS_OK);
    double pay[3] = {9, 9, 9};
    REQUIRE(ps_pool_push(pool, 1, 1, pay) == PS_OK);
    CHECK(pay[0] == 0.0);
    CHECK(pay[1] == doctest::Approx(1.0));  // the block's own share pays it
    CHECK(pay[2] == 0.0);
    // a non-pool block pays nobody and leaves the state alone
    REQUIRE(ps_pool_push(pool, 1, 0, pay) == PS_OK);
    CHECK(pay[0] == 0.0);
    CHECK(pay[1] == 0.0);
    char* text = nullptr;
    REQUIRE(ps_pool_format(pool, &text) == PS_OK);
    CHECK(std::string(text) == "1,_,_,_");
    ps_string_free(text);
    CHECK(ps_pool_push(pool, 0, 0, pay) == PS_ERR_DOMAIN);  // non-pool plain share
    CHECK(ps_pool_push(pool, 0, 3, pay) == PS_ERR_DOMAIN);  // owner out of range
    ps_pool_destroy(pool);
}

TEST_CASE("bag pool keeps its capacity invariant") {
    ps_pool* pool = nullptr;
    REQUIRE(ps_pool_create("rpplns", 3, 0, 2, 11, &pool) == PS_OK);
    for (int i = 0; i < 10; ++i) REQUIRE(ps_pool_push(pool, 0, 1 + i % 2, nullptr) == PS_OK);
    char* text = nullptr;
    REQUIRE(ps_pool_format(pool, &text) == PS_OK);
    // three shares split across the two miners in some sampled way
    std::string s(text);
    ps_string_free(text);
    CHECK(!s.empty());
    double pay[3] = {0, 0, 0};
    REQUIRE(ps_pool_push(pool, 1, 2, pay) == PS_OK);
    CHECK(pay[0] == 0.0);
    CHECK(pay[1] + pay[2] == doctest::Approx(1.0));
    ps_pool_destroy(pool);
}

TEST_CASE("analyze reports the closed forms") {
    ps_params p{0.2, 0.5, 0.3, 25.0, 50, 2};
    char* text = nullptr;
    REQUIRE(ps_analyze(&p, &text) == PS_OK);
    json report = json::parse(text);
    ps_string_free(text);
    CHECK(report["mean_reward"].get<double>() == doctest::Approx(0.008));
    CHECK(report["variance"]["rpplns"].get<double>() == doctest::Approx(4.16e-4));
    CHECK(report["variance"]["rpplns_exact"].get<double>() == doctest::Approx(7.232e-4));
    CHECK(report["variance"]["pplns_exact"].get<double>()
          > report["variance"]["pplns"].get<double>());
    CHECK(report["steady_state"]["expected_shares"].get<double>()
          == doctest::Approx(50.0 * 0.2 / 0.7));
    CHECK(report["steady_state"]["detailed_balance_residual"].get<double>() < 1e-12);
    CHECK(report["residual_value_per_share"]["reference"].get<double>()
          == doctest::Approx(0.04));
    CHECK(report["state_counts"]["queue"].get<std::string>().size() > 10);
    CHECK(report["thresholds"]["queue_hoard"].get<double>()
          == doctest::Approx(74.0 / 576.0));
}

TEST_CASE("analyze degrades gracefully outside section domains") {
    ps_params p{0.2, 0.0, 0.8, 25.0, 50, 2};  // no rest-of-pool power
    char* text = nullptr;
    REQUIRE(ps_analyze(&p, &text) == PS_OK);
    json report = json::parse(text);
    ps_string_free(text);
    CHECK(report["steady_state"].is_null());
    CHECK(report["mean_reward"].get<double>() == doctest::Approx(0.008));

    ps_params bad{0.5, 0.5, 0.5, 25.0, 50, 2};
    CHECK(ps_analyze(&bad, &text) == PS_ERR_DOMAIN);
    CHECK(ps_analyze(nullptr, &text) == PS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("threshold report ties the closed forms to the oracle") {
    ps_params p{0.25, 0.35, 0.4, 6.0, 12, 2};
    char* text = nullptr;
    REQUIRE(ps_threshold_report(&p, 3, &text) == PS_OK);
    json report = json::parse(text);
    ps_string_free(text);
    CHECK(report["queue"]["threshold"].get<double>() == doctest::Approx(17.0 / 25.0));
    CHECK(report["bag"]["honest_exact"].get<double>()
          == doctest::Approx(report["bag"]["oracle"]["honest"].get<double>()).epsilon(1e-12));
    CHECK(report["bag"]["hoard_exact"].get<double>()
          == doctest::Approx(report["bag"]["oracle"]["hoard"].get<double>()).epsilon(1e-12));
    // the compact hoard entries forfeit value the exact accounting keeps
    CHECK(report["bag"]["hoard_compact"].get<double>()
          < report["bag"]["hoard_exact"].get<double>());
    CHECK(ps_threshold_report(&p, 13, &text) == PS_ERR_DOMAIN);
}

TEST_CASE("simulation wrapper produces sane statistics") {
    ps_sim_config cfg{};
    cfg.protocol = "rpplns";
    cfg.alpha = 0.3;
    cfg.beta = 0.4;
    cfg.gamma = 0.3;
    cfg.D = 5.0;
    cfg.N = 10;
    cfg.turns = 20000;
    cfg.burn_in = 500;
    cfg.trials = 3;
    cfg.seed = 5;
    cfg.workers = 1;
    ps_reward_stats st{};
    REQUIRE(ps_simulate_honest(&cfg, &st) == PS_OK);
    CHECK(st.trials == 3);
    CHECK(std::abs(st.mean - 0.06) < 5.0 * st.stderr_mean);

    cfg.protocol = "bogus";
    CHECK(ps_simulate_honest(&cfg, &st) == PS_ERR_DOMAIN);
    cfg.protocol = "rpplns";
    CHECK(ps_simulate_honest(nullptr, &st) == PS_ERR_INVALID_ARGUMENT);

    ps_steady_stats steady{};
    char* occupancy = nullptr;
    REQUIRE(ps_simulate_steady(&cfg, &steady, &occupancy) == PS_OK);
    CHECK(steady.tv_distance < 0.2);
    REQUIRE(occupancy != nullptr);
    CHECK(std::string(occupancy).rfind("k,empirical_pi,analytic_pi\n", 0) == 0);
    ps_string_free(occupancy);

    ps_lifetime_stats life{};
    REQUIRE(ps_simulate_lifetime(&cfg, &life) == PS_OK);
    CHECK(life.mean_z == doctest::Approx(10.0).epsilon(0.10));
    CHECK(life.survival_rate == doctest::Approx(0.9).epsilon(0.03));
}

TEST_CASE("schedule parser round-trips and reports failures") {
    double* intervals = nullptr;
    uint32_t count = 0;
    REQUIRE(ps_schedule_parse("# two stints\n0 10\n20 30\n", 50.0, &intervals, &count) == PS_OK);
    REQUIRE(count == 2);
    CHECK(intervals[0] == 0.0);
    CHECK(intervals[1] == 10.0);
    CHECK(intervals[2] == 20.0);
    CHECK(intervals[3] == 30.0);
    ps_buffer_free(intervals);

    intervals = nullptr;
    CHECK(ps_schedule_parse("1 2 3\n", 50.0, &intervals, &count) == PS_ERR_PARSE);
    CHECK(std::string(ps_last_error()).find("line") != std::string::npos);
    CHECK(ps_schedule_parse("5 200\n", 50.0, &intervals, &count) == PS_ERR_PARSE);
}

TEST_CASE("hop wrapper returns the analytic anchors") {
    ps_hop_config cfg{};
    cfg.pool1 = {10, 5.0, 0.45};
    cfg.pool2 = {12, 6.0, 0.45};
    cfg.alpha = 0.1;
    cfg.horizon = 20.0;
    double intervals[] = {5.0, 15.0};
    cfg.intervals = intervals;
    cfg.num_intervals = 1;
    cfg.residual1 = 2;
    cfg.residual2 = 1;
    cfg.trials = 40;
    cfg.seed = 3;
    cfg.workers = 2;
    ps_hop_stats st{};
    REQUIRE(ps_hop_run(&cfg, &st) == PS_OK);
    CHECK(st.analytic == doctest::Approx(2.0 / 5.0 + 1.0 / 6.0 + 2.0).epsilon(1e-12));
    CHECK(st.ci_low <= st.estimate);
    CHECK(st.estimate <= st.ci_high);
    CHECK(st.trials == 40);
}

TEST_CASE("solver handle exposes values, actions, and checks") {
    ps_solver_config cfg{};
    cfg.N = 20;
    cfg.D = 10.0;
    cfg.alpha = 0.3;
    cfg.beta = 0.3;
    cfg.gamma = 0.4;
    cfg.k_max = 30;
    cfg.terminal_rule = PS_REWARD_JUMP;
    cfg.literal_publish_rule = 0;
    cfg.convergence_tol = 1e-2;
    ps_solver* solver = nullptr;
    REQUIRE(ps_solve(&cfg, &solver) == PS_OK);

    double v = -1.0;
    REQUIRE(ps_solver_value(solver, 0, 0, 0, &v) == PS_OK);
    CHECK(v >= 0.0);
    double v2 = -1.0;
    REQUIRE(ps_solver_value(solver, 5, 0, 0, &v2) == PS_OK);
    CHECK(v2 >= v);
    CHECK(ps_solver_value(solver, 21, 0, 0, &v) == PS_ERR_DOMAIN);

    int action = -1;
    REQUIRE(ps_solver_best_action(solver, 0, 0, 0, &action) == PS_OK);
    CHECK(action >= 0);
    CHECK(action <= 2);

    int converged = -1;
    double gap = -1.0;
    REQUIRE(ps_solver_convergence(solver, &converged, &gap) == PS_OK);
    CHECK(converged >= 0);
    CHECK(gap >= 0.0);

    int holds = -1;
    REQUIRE(ps_solver_share_ic(solver, 10, &holds) == PS_OK);
    CHECK((holds == 0 || holds == 1));
    REQUIRE(ps_solver_block_ic(solver, 0, &holds) == PS_OK);
    CHECK((holds == 0 || holds == 1));

    char* table = nullptr;
    REQUIRE(ps_solver_table_json(solver, &table) == PS_OK);
    json parsed = json::parse(table);
    ps_string_free(table);
    CHECK(parsed["N"].get<int>() == 20);
    REQUIRE(ps_solver_value(solver, 3, 2, 1, &v) == PS_OK);
    CHECK(parsed["values"]["3,2,1"].get<double>() == doctest::Approx(v).epsilon(1e-15));
    CHECK(parsed["best_action"]["0,0,0"].is_string());

    ps_solver_destroy(solver);

    cfg.gamma = 0.2;  // no longer sums to one
    CHECK(ps_solve(&cfg, &solver) == PS_ERR_DOMAIN);
}

TEST_CASE("sweep csv covers the lattice") {
    ps_sweep_config cfg{};
    cfg.N = 20;
    cfg.D = 10.0;
    cfg.k_max = 20;
    cfg.grid_step = 0.5;
    double fractions[] = {0.5};
    cfg.pool_fractions = fractions;
    cfg.num_fractions = 1;
    cfg.terminal_rule = PS_REWARD_JUMP;
    cfg.convergence_tol = 0.5;
    cfg.workers = 1;
    int all_converged = -1;
    char* csv = nullptr;
    REQUIRE(ps_sweep_csv(&cfg, &all_converged, &csv) == PS_OK);
    std::string body(csv);
    ps_string_free(csv);
    CHECK(body.rfind("alpha,beta,gamma,F,classification\n", 0) == 0);
    // lattice i + j <= 2 has 6 points, one fraction each, plus the header
    int lines = 0;
    for (char c : body)
        if (c == '\n') ++lines;
    CHECK(lines == 7);
    CHECK(body.find("honest") != std::string::npos);
}
