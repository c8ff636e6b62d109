#pragma once
// Payout-protocol state machines: the ordered share queue (PPLNS), the
// unordered share bag with uniform random displacement (RPPLNS), and the
// queue-into-bag hybrid. States are value types; transitions are pure.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace poolsim {

// Miner 0 is the aggregate non-pool miner; pool miners are 1..k.
using MinerId = std::uint32_t;

// Sentinel for an unfilled queue slot.
inline constexpr MinerId kNoShare = static_cast<MinerId>(-1);

enum class MessageKind { Share, Block };

struct Message {
    MessageKind kind = MessageKind::Share;
    MinerId owner = 0;   // Share messages require owner != 0
};

// Ordered queue of the N most recent shares, slots[0] = newest. Unfilled
// slots hold kNoShare and always form a contiguous suffix.
struct QueueState {
    std::vector<MinerId> slots;

    static QueueState empty(std::size_t n) {
        QueueState q;
        q.slots.assign(n, kNoShare);
        return q;
    }
    std::size_t capacity() const { return slots.size(); }
    std::size_t filled() const;
    bool operator==(const QueueState&) const = default;
};

// Unordered bag: counts[i] = live shares owned by miner i. counts[0] is
// always 0 (non-pool miners never hold shares). sum(counts) <= capacity.
struct BagState {
    std::vector<std::uint32_t> counts;   // size num_miners + 1
    std::uint32_t capacity = 0;

    static BagState empty(std::uint32_t n, std::uint32_t num_miners) {
        BagState b;
        b.counts.assign(num_miners + 1, 0);
        b.capacity = n;
        return b;
    }
    std::uint64_t total() const;
    bool full() const { return total() == capacity; }
    bool operator==(const BagState&) const = default;
};

// Queue of capacity Q feeding a bag of capacity N - Q: shares age through
// the queue in order, then survive in the bag under random displacement.
struct QueueBagState {
    QueueState queue;
    BagState bag;

    static QueueBagState empty(std::uint32_t n, std::uint32_t q, std::uint32_t num_miners);
    std::uint32_t total_capacity() const {
        return static_cast<std::uint32_t>(queue.capacity()) + bag.capacity;
    }
    bool operator==(const QueueBagState&) const = default;
};

// amounts[i] = miner i's fraction of one block reward. Sums to 1 whenever
// any share is held, and is all zeros otherwise.
using PayoutVector = std::vector<double>;

template <typename State>
struct TransitionOutcome {
    State state;
    double probability = 0.0;
};

// Probabilities are > 0, sum to 1 within 1e-12, and outcomes are pairwise
// distinct (identical resulting states are merged at construction).
template <typename State>
using TransitionDistribution = std::vector<TransitionOutcome<State>>;

// ---- queue (PPLNS) ----

// Prepends the message as a share and drops the oldest slot. A block from
// miner 0 leaves the state unchanged. Throws std::invalid_argument for a
// share owned by miner 0.
QueueState pplns_transition(const QueueState& state, const Message& msg);

// Per-miner payout fractions: occurrences / filled slots.
PayoutVector pplns_payout(const QueueState& state, std::uint32_t num_miners);

// ---- bag (RPPLNS) ----

// Non-full bag: point mass on counts + e_owner. Full bag: the incoming
// share displaces a uniformly random resident, giving one outcome per
// displaced owner j with probability counts[j]/N. Block from miner 0:
// point mass on the unchanged state.
TransitionDistribution<BagState> rpplns_transition_distribution(const BagState& state,
                                                                const Message& msg);

BagState rpplns_transition_sample(const BagState& state, const Message& msg,
                                  std::mt19937_64& rng);

// Per-miner payout fractions: counts[i] / sum(counts).
PayoutVector rpplns_payout(const BagState& state);

// ---- queue-into-bag hybrid ----

// Two-stage push: the message enters the queue; the share evicted from the
// queue rear (if any) enters the bag under the random-displacement rule.
// With bag capacity 0 (Q = N) the evicted share is discarded and the
// machine is exactly the queue machine.
TransitionDistribution<QueueBagState> queuebag_transition_distribution(const QueueBagState& state,
                                                                       const Message& msg);

QueueBagState queuebag_transition_sample(const QueueBagState& state, const Message& msg,
                                         std::mt19937_64& rng);

// Per-miner payout fractions over queue occurrences + bag counts.
PayoutVector queuebag_payout(const QueueBagState& state, std::uint32_t num_miners);

// ---- push-then-pay ----

// A found block is first inserted as a share, then the payout is computed
// on the post-insertion state. A block from miner 0 pays nothing and
// leaves the state unchanged.
std::pair<QueueState, PayoutVector> apply_block_event(const QueueState& state, const Message& msg,
                                                      std::uint32_t num_miners);
std::pair<BagState, PayoutVector> apply_block_event(const BagState& state, const Message& msg,
                                                    std::mt19937_64& rng);
std::pair<QueueBagState, PayoutVector> apply_block_event(const QueueBagState& state,
                                                         const Message& msg, std::mt19937_64& rng,
                                                         std::uint32_t num_miners);

// ---- canonical text form ----

// Queue: comma-separated owner ids, newest first, "_" for unfilled slots.
std::string format_state(const QueueState& state);
// Bag: "id:count" pairs sorted by id, comma-separated; "" when empty.
std::string format_state(const BagState& state);
// Hybrid: "<queue>|<bag>".
std::string format_state(const QueueBagState& state);

// Throws std::invalid_argument when probabilities are non-positive, do not
// sum to 1 within 1e-12, or outcomes repeat. Used by property tests.
template <typename State>
void validate_distribution(const TransitionDistribution<State>& dist) {
    double sum = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (!(dist[i].probability > 0.0))
            throw std::invalid_argument("transition probability must be positive");
        sum += dist[i].probability;
        for (std::size_t j = i + 1; j < dist.size(); ++j)
            if (dist[i].state == dist[j].state)
                throw std::invalid_argument("transition outcomes must be pairwise distinct");
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("transition probabilities must sum to 1");
}

}  // namespace poolsim
