#pragma once

#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "consensus.hpp"
#include "qchain.hpp"

namespace qbc {

struct node {
    int id = 0;
    node_strategy strategy = node_strategy::honest;
    quantum_chain local_chain;
};

// A candidate block from an untrusted source: the record it claims to
// carry, plus a factory handing out fresh copies of the proposed state
// (the source knows the state, so copies are unlimited).
struct block_proposal {
    std::string claimed_bits;
    std::function<state_vector()> make_state;
};

enum class event_kind {
    proposal,
    verifier_selected,
    round_result,
    appended,
    rejected,
    tamper_attempt,
    tamper_denied,
};

inline const char* to_string(event_kind k) {
    switch (k) {
        case event_kind::proposal: return "proposal";
        case event_kind::verifier_selected: return "verifier_selected";
        case event_kind::round_result: return "round_result";
        case event_kind::appended: return "appended";
        case event_kind::rejected: return "rejected";
        case event_kind::tamper_attempt: return "tamper_attempt";
        case event_kind::tamper_denied: return "tamper_denied";
    }
    return "?";
}

struct network_event {
    tick at = 0;
    std::uint64_t sequence = 0;
    event_kind kind = event_kind::proposal;
    std::string detail;
};

enum class tamper_result { applied, denied };

// Synchronous round abstraction over a set of nodes, each holding its own
// copy of the chain. Verification happens on one shared proposal state;
// commits append to every local chain.
class network {
public:
    explicit network(std::vector<node> nodes) : nodes_(std::move(nodes)) {
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            for (std::size_t j = i + 1; j < nodes_.size(); ++j) {
                if (nodes_[i].id == nodes_[j].id) {
                    throw error("network: node ids must be unique");
                }
            }
        }
    }

    const std::vector<node>& nodes() const { return nodes_; }
    const std::vector<network_event>& events() const { return events_; }

    node& find(int id) {
        for (auto& n : nodes_) {
            if (n.id == id) return n;
        }
        throw unknown_node("find: no node with id " + std::to_string(id));
    }

    const node& find(int id) const {
        for (const auto& n : nodes_) {
            if (n.id == id) return n;
        }
        throw unknown_node("find: no node with id " + std::to_string(id));
    }

    // Uniform draw standing in for the random beacon that picks verifiers.
    int select_verifier(random_source& rng) {
        if (nodes_.empty()) throw no_nodes("select_verifier: network has no nodes");
        const auto& chosen = nodes_[rng.next_index(nodes_.size())];
        log(event_kind::verifier_selected, "node=" + std::to_string(chosen.id));
        return chosen.id;
    }

    // One proposal: pick a verifier, run a verification round with every
    // node's strategy, and on pass append the claimed record to every
    // local chain. On fail nothing changes.
    bool propose_and_commit(const block_proposal& proposal, random_source& rng) {
        const state_vector block = proposal.make_state();
        if (block.num_qubits() != static_cast<int>(nodes_.size())) {
            throw arity_mismatch("propose_and_commit: one qubit per node");
        }
        log(event_kind::proposal, "claimed_bits=" + proposal.claimed_bits +
                                      " qubits=" + std::to_string(block.num_qubits()));
        select_verifier(rng);

        std::vector<node_strategy> strategies;
        strategies.reserve(nodes_.size());
        for (const auto& n : nodes_) strategies.push_back(n.strategy);

        const verification_round round = run_round(block, strategies, rng);
        log(event_kind::round_result, describe(round));

        if (!round.pass) {
            log(event_kind::rejected, "claimed_bits=" + proposal.claimed_bits);
            return false;
        }
        for (auto& n : nodes_) {
            n.local_chain.extend(proposal.claimed_bits, rng);
        }
        log(event_kind::appended, "claimed_bits=" + proposal.claimed_bits + " chain_blocks=" +
                                      std::to_string(nodes_.front().local_chain.block_count()));
        return true;
    }

    // Attacks one node's local copy only. Temporal refusals are logged and
    // reported, never propagated.
    tamper_result node_tamper(int node_id, const tamper_attack& attack, random_source& rng) {
        node& target = find(node_id);
        log(event_kind::tamper_attempt,
            "node=" + std::to_string(node_id) + " kind=" + std::to_string(int(attack.kind)) +
                " photon=" + std::to_string(attack.target));
        try {
            target.local_chain.tamper(attack, rng);
            return tamper_result::applied;
        } catch (const temporal_access_error&) {
            log(event_kind::tamper_denied,
                "node=" + std::to_string(node_id) + " photon=" + std::to_string(attack.target));
            return tamper_result::denied;
        }
    }

private:
    static std::string describe(const verification_round& round) {
        std::ostringstream os;
        os << "target=" << round.target << " reported=";
        for (int r : round.reported) os << r;
        os << " pass=" << (round.pass ? 1 : 0);
        return os.str();
    }

    void log(event_kind kind, std::string detail) {
        const tick at =
            nodes_.empty() ? 0 : nodes_.front().local_chain.photons().clock();
        events_.push_back(network_event{at, seq_++, kind, std::move(detail)});
    }

    std::vector<node> nodes_;
    std::vector<network_event> events_;
    std::uint64_t seq_ = 0;
};

// Stable one-line-per-event text form, used by reports and determinism checks.
inline std::string format_events(const network& net) {
    std::ostringstream os;
    for (const auto& e : net.events()) {
        os << "tick=" << e.at << " seq=" << e.sequence << " " << to_string(e.kind) << " "
           << e.detail << "\n";
    }
    return os.str();
}

}  // namespace qbc
