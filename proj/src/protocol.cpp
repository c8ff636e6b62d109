// Implementation of the queue, bag, and hybrid payout state machines.

#include "protocol.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace poolsim {

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

void check_message(const Message& msg) {
    if (msg.kind == MessageKind::Share)
        require(msg.owner != 0, "share messages require a pool-miner owner");
}

void check_owner_bound(const Message& msg, std::size_t num_counts) {
    require(msg.owner < num_counts, "message owner exceeds the miner population");
}

}  // namespace

// ---- queue ----

std::size_t QueueState::filled() const {
    std::size_t n = 0;
    while (n < slots.size() && slots[n] != kNoShare) ++n;
    return n;
}

QueueState pplns_transition(const QueueState& state, const Message& msg) {
    check_message(msg);
    if (msg.owner == 0) return state;   // non-pool block: nothing enters the pool
    require(!state.slots.empty(), "queue capacity must be positive");
    QueueState next = state;
    next.slots.insert(next.slots.begin(), msg.owner);
    next.slots.pop_back();
    return next;
}

PayoutVector pplns_payout(const QueueState& state, std::uint32_t num_miners) {
    PayoutVector amounts(num_miners + 1, 0.0);
    std::size_t held = state.filled();
    if (held == 0) return amounts;
    for (std::size_t i = 0; i < held; ++i) {
        require(state.slots[i] <= num_miners, "queue holds a share outside the miner population");
        amounts[state.slots[i]] += 1.0;
    }
    for (double& a : amounts) a /= static_cast<double>(held);
    return amounts;
}

// ---- bag ----

std::uint64_t BagState::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

TransitionDistribution<BagState> rpplns_transition_distribution(const BagState& state,
                                                                const Message& msg) {
    check_message(msg);
    if (msg.owner == 0) return {{state, 1.0}};
    check_owner_bound(msg, state.counts.size());
    require(state.capacity > 0, "bag capacity must be positive");
    require(state.counts[0] == 0, "miner 0 cannot hold shares");

    if (!state.full()) {
        BagState next = state;
        next.counts[msg.owner] += 1;
        return {{std::move(next), 1.0}};
    }
    TransitionDistribution<BagState> dist;
    const double n = static_cast<double>(state.capacity);
    for (std::size_t j = 1; j < state.counts.size(); ++j) {
        if (state.counts[j] == 0) continue;
        BagState next = state;
        next.counts[j] -= 1;
        next.counts[msg.owner] += 1;
        dist.push_back({std::move(next), static_cast<double>(state.counts[j]) / n});
    }
    return dist;
}

BagState rpplns_transition_sample(const BagState& state, const Message& msg,
                                  std::mt19937_64& rng) {
    check_message(msg);
    if (msg.owner == 0) return state;
    check_owner_bound(msg, state.counts.size());
    require(state.capacity > 0, "bag capacity must be positive");

    BagState next = state;
    if (!state.full()) {
        next.counts[msg.owner] += 1;
        return next;
    }
    // Displace a uniform resident: walk the counts with one uniform draw.
    std::uniform_int_distribution<std::uint64_t> pick(0, state.capacity - 1);
    std::uint64_t idx = pick(rng);
    for (std::size_t j = 1; j < next.counts.size(); ++j) {
        if (idx < next.counts[j]) {
            next.counts[j] -= 1;
            next.counts[msg.owner] += 1;
            return next;
        }
        idx -= next.counts[j];
    }
    throw std::logic_error("bag displacement index out of range");
}

PayoutVector rpplns_payout(const BagState& state) {
    PayoutVector amounts(state.counts.size(), 0.0);
    const double held = static_cast<double>(state.total());
    if (held == 0) return amounts;
    for (std::size_t i = 0; i < state.counts.size(); ++i)
        amounts[i] = static_cast<double>(state.counts[i]) / held;
    return amounts;
}

// ---- hybrid ----

QueueBagState QueueBagState::empty(std::uint32_t n, std::uint32_t q, std::uint32_t num_miners) {
    require(q >= 1 && q <= n, "queue stage must hold between 1 and N slots");
    QueueBagState st;
    st.queue = QueueState::empty(q);
    st.bag = BagState::empty(n - q, num_miners);
    return st;
}

namespace {

// The share falling off the queue rear, if the push causes one.
MinerId queue_overflow(const QueueState& before, const Message& msg) {
    if (msg.owner == 0) return kNoShare;
    MinerId rear = before.slots.back();
    return rear;   // kNoShare when the queue still had room
}

}  // namespace

TransitionDistribution<QueueBagState> queuebag_transition_distribution(const QueueBagState& state,
                                                                       const Message& msg) {
    check_message(msg);
    if (msg.owner == 0) return {{state, 1.0}};
    check_owner_bound(msg, state.bag.counts.size());

    MinerId evicted = queue_overflow(state.queue, msg);
    QueueState queue_next = pplns_transition(state.queue, msg);
    if (evicted == kNoShare || state.bag.capacity == 0)
        return {{QueueBagState{std::move(queue_next), state.bag}, 1.0}};

    auto bag_dist = rpplns_transition_distribution(state.bag, Message{MessageKind::Share, evicted});
    TransitionDistribution<QueueBagState> dist;
    dist.reserve(bag_dist.size());
    for (auto& out : bag_dist)
        dist.push_back({QueueBagState{queue_next, std::move(out.state)}, out.probability});
    return dist;
}

QueueBagState queuebag_transition_sample(const QueueBagState& state, const Message& msg,
                                         std::mt19937_64& rng) {
    check_message(msg);
    if (msg.owner == 0) return state;
    check_owner_bound(msg, state.bag.counts.size());

    MinerId evicted = queue_overflow(state.queue, msg);
    QueueBagState next;
    next.queue = pplns_transition(state.queue, msg);
    if (evicted == kNoShare || state.bag.capacity == 0)
        next.bag = state.bag;
    else
        next.bag = rpplns_transition_sample(state.bag, Message{MessageKind::Share, evicted}, rng);
    return next;
}

PayoutVector queuebag_payout(const QueueBagState& state, std::uint32_t num_miners) {
    PayoutVector amounts(num_miners + 1, 0.0);
    std::size_t held = state.queue.filled();
    for (std::size_t i = 0; i < held; ++i) {
        require(state.queue.slots[i] <= num_miners,
                "queue holds a share outside the miner population");
        amounts[state.queue.slots[i]] += 1.0;
    }
    require(state.bag.counts.size() <= amounts.size(),
            "bag population exceeds the requested payout width");
    double total = static_cast<double>(held);
    for (std::size_t i = 0; i < state.bag.counts.size(); ++i) {
        amounts[i] += static_cast<double>(state.bag.counts[i]);
        total += static_cast<double>(state.bag.counts[i]);
    }
    if (total == 0) return amounts;
    for (double& a : amounts) a /= total;
    return amounts;
}

// ---- push-then-pay ----

std::pair<QueueState, PayoutVector> apply_block_event(const QueueState& state, const Message& msg,
                                                      std::uint32_t num_miners) {
    require(msg.kind == MessageKind::Block, "block events require a block message");
    if (msg.owner == 0) return {state, PayoutVector(num_miners + 1, 0.0)};
    QueueState next = pplns_transition(state, msg);
    PayoutVector pay = pplns_payout(next, num_miners);
    return {std::move(next), std::move(pay)};
}

std::pair<BagState, PayoutVector> apply_block_event(const BagState& state, const Message& msg,
                                                    std::mt19937_64& rng) {
    require(msg.kind == MessageKind::Block, "block events require a block message");
    if (msg.owner == 0) return {state, PayoutVector(state.counts.size(), 0.0)};
    BagState next = rpplns_transition_sample(state, msg, rng);
    PayoutVector pay = rpplns_payout(next);
    return {std::move(next), std::move(pay)};
}

std::pair<QueueBagState, PayoutVector> apply_block_event(const QueueBagState& state,
                                                         const Message& msg, std::mt19937_64& rng,
                                                         std::uint32_t num_miners) {
    require(msg.kind == MessageKind::Block, "block events require a block message");
    if (msg.owner == 0) return {state, PayoutVector(num_miners + 1, 0.0)};
    QueueBagState next = queuebag_transition_sample(state, msg, rng);
    PayoutVector pay = queuebag_payout(next, num_miners);
    return {std::move(next), std::move(pay)};
}

// ---- canonical text form ----

std::string format_state(const QueueState& state) {
    std::ostringstream out;
    for (std::size_t i = 0; i < state.slots.size(); ++i) {
        if (i) out << ',';
        if (state.slots[i] == kNoShare)
            out << '_';
        else
            out << state.slots[i];
    }
    return out.str();
}

std::string format_state(const BagState& state) {
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 1; i < state.counts.size(); ++i) {
        if (state.counts[i] == 0) continue;
        if (!first) out << ',';
        out << i << ':' << state.counts[i];
        first = false;
    }
    return out.str();
}

std::string format_state(const QueueBagState& state) {
    return format_state(state.queue) + "|" + format_state(state.bag);
}

}  // namespace poolsim
