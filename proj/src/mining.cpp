// Implementation of the mining environment sampling.

#include "mining.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace poolsim {

namespace {

void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument(what);
}

}  // namespace

void Population::validate() const {
    require(alpha >= 0.0 && beta >= 0.0 && gamma >= 0.0,
            "hash power fractions must be non-negative");
    require(std::abs(alpha + beta + gamma - 1.0) <= 1e-12,
            "hash power fractions must sum to 1");
    require(D >= 1.0, "relative difficulty must be at least 1");
}

TurnEvent sample_turn(const Population& pop, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double u = unit(rng);
    TurnEvent ev;
    if (u < pop.alpha)
        ev.owner = 1;
    else if (u < pop.alpha + pop.beta)
        ev.owner = 2;
    else
        ev.owner = 0;
    ev.is_block = unit(rng) < 1.0 / pop.D;
    return ev;
}

void PoolSpec::validate() const {
    require(N >= 1, "pool share capacity must be at least 1");
    require(D >= 1.0, "relative difficulty must be at least 1");
    require(beta >= 0.0 && beta <= 1.0, "loyal hash power must lie in [0, 1]");
}

void HoppingSchedule::validate() const {
    require(horizon > 0.0, "schedule horizon must be positive");
    double prev_end = -std::numeric_limits<double>::infinity();
    for (const auto& [start, end] : pool2_intervals) {
        require(start <= end, "schedule interval must have start <= end");
        require(start >= 0.0 && end <= horizon, "schedule interval must lie within the horizon");
        require(start >= prev_end, "schedule intervals must be sorted and non-overlapping");
        prev_end = end;
    }
}

bool HoppingSchedule::in_pool2(double t) const {
    for (const auto& [start, end] : pool2_intervals) {
        if (t < start) return false;
        if (t <= end) return true;
    }
    return false;
}

HoppingSchedule HoppingSchedule::parse(const std::string& text, double horizon) {
    HoppingSchedule sched;
    sched.horizon = horizon;
    std::istringstream in(text);
    std::string line;
    for (int line_no = 1; std::getline(in, line); ++line_no) {
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        double start = 0.0, end = 0.0;
        std::string extra;
        if (!(fields >> start >> end) || (fields >> extra)) {
            std::ostringstream msg;
            msg << "schedule line " << line_no << ": expected exactly two numbers";
            throw std::invalid_argument(msg.str());
        }
        sched.pool2_intervals.emplace_back(start, end);
    }
    sched.validate();
    return sched;
}

SegmentedStream SegmentedStream::constant(double rate, double limit) {
    SegmentedStream s;
    s.limit = limit;
    s.constant_rate = rate;
    return s;
}

SegmentedStream SegmentedStream::scheduled(double rate1, double rate2,
                                           const HoppingSchedule& schedule, double limit) {
    SegmentedStream s;
    s.limit = limit;
    s.schedule = &schedule;
    s.rate_pool1 = rate1;
    s.rate_pool2 = rate2;
    return s;
}

double SegmentedStream::rate_at(double t, double* seg_end) const {
    if (!schedule) {
        *seg_end = limit;
        return constant_rate;
    }
    for (const auto& [start, end] : schedule->pool2_intervals) {
        if (t < start) {
            *seg_end = start;
            return rate_pool1;
        }
        if (t <= end) {
            *seg_end = end;
            return rate_pool2;
        }
    }
    *seg_end = limit;
    return rate_pool1;
}

double SegmentedStream::next_after(double t, std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    while (t < limit) {
        double seg_end = 0.0;
        double rate = rate_at(t, &seg_end);
        if (rate <= 0.0) {
            t = std::nextafter(seg_end, std::numeric_limits<double>::infinity());
            continue;
        }
        double gap = -std::log1p(-unit(rng)) / rate;
        if (t + gap <= seg_end) {
            double at = t + gap;
            if (at >= limit) return std::numeric_limits<double>::infinity();
            return at;
        }
        t = std::nextafter(seg_end, std::numeric_limits<double>::infinity());
    }
    return std::numeric_limits<double>::infinity();
}

std::vector<ArrivalEvent> sample_arrival_stream(const PoolSpec& pool1, const PoolSpec& pool2,
                                                double hopper_alpha,
                                                const HoppingSchedule& schedule, double horizon,
                                                std::mt19937_64& rng) {
    pool1.validate();
    pool2.validate();
    schedule.validate();
    if (hopper_alpha < 0.0) throw std::invalid_argument("hopper hash power must be non-negative");
    if (horizon <= 0.0) throw std::invalid_argument("stream horizon must be positive");

    SegmentedStream honest1 = SegmentedStream::constant(pool1.beta * pool1.D, horizon);
    SegmentedStream honest2 = SegmentedStream::constant(pool2.beta * pool2.D, horizon);
    // The hopper mines only until the schedule horizon even when the
    // requested stream horizon runs longer.
    SegmentedStream hopper = SegmentedStream::scheduled(
        hopper_alpha * pool1.D, hopper_alpha * pool2.D, schedule,
        std::min(horizon, schedule.horizon));

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<ArrivalEvent> events;
    double t1 = honest1.next_after(0.0, rng);
    double t2 = honest2.next_after(0.0, rng);
    double th = hopper.next_after(0.0, rng);
    while (true) {
        double t = std::min({t1, t2, th});
        if (!std::isfinite(t)) break;
        ArrivalEvent ev;
        ev.time = t;
        if (t == th) {
            ev.from_hopper = true;
            ev.pool = schedule.in_pool2(t) ? 2 : 1;
            th = hopper.next_after(t, rng);
        } else if (t == t1) {
            ev.pool = 1;
            t1 = honest1.next_after(t, rng);
        } else {
            ev.pool = 2;
            t2 = honest2.next_after(t, rng);
        }
        const PoolSpec& pool = ev.pool == 1 ? pool1 : pool2;
        ev.is_block = unit(rng) < 1.0 / pool.D;
        events.push_back(ev);
    }
    return events;
}

}  // namespace poolsim
