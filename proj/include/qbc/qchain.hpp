#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qsim.hpp"
#include "timeline.hpp"

namespace qbc {

struct block_record {
    std::string bits;  // the two record bits
    int index = 0;
    tick stamp_early = 0;
    tick stamp_late = 0;
    std::uint64_t early_photon = 0;
    std::uint64_t late_photon = 0;
};

enum class attack_kind { bit_flip, phase_flip, random_unitary, z_measure };

struct tamper_attack {
    attack_kind kind = attack_kind::bit_flip;
    std::uint64_t target = 0;  // photon id
};

// Encodes a two-bit record as the Bell state (|0,r2> + (-1)^{r1}|1,~r2>)/sqrt2
// over a freshly emitted photon pair stamped (k, k+1).
inline std::pair<block_record, state_vector> encode_block(std::string_view bits, int k,
                                                          timeline& tl) {
    if (bits.size() != 2) {
        throw bad_record("encode_block: a record is exactly two bits");
    }
    const int r1 = detail::to_bit(bits[0], "encode_block");
    const int r2 = detail::to_bit(bits[1], "encode_block");
    auto [early, late] = tl.emit_block_pair(static_cast<tick>(k));
    block_record rec{std::string(bits), k, early.created_at, *late.absorbed_at,
                     early.id, late.id};
    return {std::move(rec), bell_state(r1, r2)};
}

// The quantum blockchain: one entangled basis state over two qubits per
// block, qubits ordered by photon creation time, plus the photon registry
// that decides which qubit an attacker can still reach.
class quantum_chain {
public:
    quantum_chain() = default;

    bool empty() const { return blocks_.empty(); }
    int block_count() const { return static_cast<int>(blocks_.size()); }

    // Ground truth for tests and reports. Decode paths never read it.
    const std::string& logical_bits() const { return logical_bits_; }

    const state_vector& state() const {
        if (!state_) throw empty_chain("state: chain has no blocks");
        return *state_;
    }

    const timeline& photons() const { return timeline_; }
    timeline& photons() { return timeline_; }
    const std::vector<block_record>& blocks() const { return blocks_; }

    // Id of the only photon that can still be attacked once the chain is
    // built: the last block's delayed photon.
    std::uint64_t live_photon() const {
        if (blocks_.empty()) throw empty_chain("live_photon: chain has no blocks");
        return blocks_.back().late_photon;
    }

    // Appends one block. The new pair is fused onto the chain through the
    // beam-splitter coincidence of the previous delayed photon with the new
    // early photon. The coincidence branch pins the new early qubit's basis
    // bit to the previous block's last bit, so the branch to keep is chosen
    // by the incoming phase bit, re-emitting the pair until the sampler
    // lands on it; a Z and X feed-forward on the still-accessible delayed
    // photon then places the chain exactly on the target basis state.
    void extend(std::string_view bits, random_source& rng) {
        if (bits.size() != 2) {
            throw bad_record("extend: a record is exactly two bits");
        }
        const int r1 = detail::to_bit(bits[0], "extend");
        detail::to_bit(bits[1], "extend");
        const int k = block_count();

        if (empty()) {
            auto [rec, st] = encode_block(bits, 0, timeline_);
            state_.emplace(std::move(st));
            blocks_.push_back(std::move(rec));
            logical_bits_ = bits;
            timeline_.advance(1);
            return;
        }

        const bool want_coincidence = (logical_bits_.back() - '0') == r1;
        const int q_prev_late = 2 * k - 1;
        const int q_new_early = 2 * k;
        const int q_new_late = 2 * k + 1;

        for (;;) {
            auto [rec, blk] = encode_block(bits, k, timeline_);
            auto fused = fuse_pbs(tensor(*state_, blk), q_prev_late, q_new_early, rng);
            if (fused.success != want_coincidence) {
                // wrong branch: this pair is spent, try a fresh one
                timeline_.mark_measured(rec.early_photon);
                timeline_.mark_measured(rec.late_photon);
                continue;
            }
            state_vector st = std::move(fused.post_state);
            if (r1 == 1) {
                st = apply_single_qubit(st, q_new_late, pauli_z());
                st = apply_single_qubit(st, q_new_late, pauli_x());
            }
            timeline_.mark_measured(blocks_.back().late_photon);
            timeline_.mark_measured(rec.early_photon);
            state_.emplace(std::move(st));
            blocks_.push_back(std::move(rec));
            logical_bits_ += bits;
            break;
        }
        timeline_.advance(timeline_.clock() + 1);

        if (fidelity(*state_, ghz_state(logical_bits_)) < 1.0 - 1e-9) {
            throw error("extend: chain state drifted off the target basis state");
        }
    }

    // Measures a copy of the chain in the full entangled basis and returns
    // the sampled label. Untampered chains decode to their records with
    // probability one.
    std::string decode(random_source& rng) const {
        if (empty()) throw empty_chain("decode: chain has no blocks");
        return ghz_basis_measure(*state_, rng).bits;
    }

    // Applies an attack to the targeted photon's qubit, or refuses with
    // temporal_access_error when that photon no longer exists.
    void tamper(const tamper_attack& attack, random_source& rng) {
        const auto& rec = timeline_.photon(attack.target);  // unknown_photon
        if (!timeline_.accessible(rec.id)) {
            throw temporal_access_error("tamper: photon " + std::to_string(rec.id) +
                                        " is absorbed or already measured");
        }
        const int qubit = qubit_of(rec.id);
        switch (attack.kind) {
            case attack_kind::bit_flip:
                state_.emplace(apply_single_qubit(*state_, qubit, pauli_x()));
                break;
            case attack_kind::phase_flip:
                state_.emplace(apply_single_qubit(*state_, qubit, pauli_z()));
                break;
            case attack_kind::random_unitary:
                state_.emplace(apply_single_qubit(*state_, qubit, random_unitary2(rng)));
                break;
            case attack_kind::z_measure: {
                collapse_computational(qubit, rng);
                timeline_.mark_measured(rec.id);
                break;
            }
        }
    }

    // True iff a decode sample reproduces `expected`.
    bool validate(std::string_view expected, random_source& rng) const {
        if (empty()) throw empty_chain("validate: chain has no blocks");
        if (expected.size() != logical_bits_.size()) {
            throw bad_expectation("validate: expected string must cover every block");
        }
        for (char c : expected) detail::to_bit(c, "validate");
        return decode(rng) == expected;
    }

private:
    int qubit_of(std::uint64_t photon_id) const {
        for (std::size_t j = 0; j < blocks_.size(); ++j) {
            if (blocks_[j].early_photon == photon_id) return static_cast<int>(2 * j);
            if (blocks_[j].late_photon == photon_id) return static_cast<int>(2 * j + 1);
        }
        // discarded fusion pairs are marked measured, so access is denied
        // before ever reaching this point
        throw unknown_photon("tamper: photon is not part of the chain");
    }

    void collapse_computational(int qubit, random_source& rng) {
        const state_vector& s = *state_;
        const std::uint64_t mask = s.qubit_mask(qubit);
        double p1 = 0.0;
        for (std::uint64_t i = 0; i < s.dim(); ++i) {
            if (i & mask) p1 += std::norm(s[i]);
        }
        const int outcome = rng.next_double() < p1 ? 1 : 0;
        std::vector<amplitude> out(s.dim());
        double n2 = 0.0;
        for (std::uint64_t i = 0; i < s.dim(); ++i) {
            const bool one = (i & mask) != 0;
            if (one == (outcome == 1)) {
                out[i] = s[i];
                n2 += std::norm(s[i]);
            }
        }
        const double inv = 1.0 / std::sqrt(n2);
        for (auto& a : out) a *= inv;
        state_.emplace(state_vector::from_amplitudes(s.num_qubits(), std::move(out)));
    }

    std::optional<state_vector> state_;
    timeline timeline_;
    std::vector<block_record> blocks_;
    std::string logical_bits_;
};

// Builds a chain from an arbitrary record string, chunked into two-bit
// blocks and zero-padded on the right.
inline quantum_chain chain_from_record(std::string_view record, random_source& rng) {
    std::string bits(record);
    for (char c : bits) detail::to_bit(c, "chain_from_record");
    if (bits.size() % 2 != 0) bits += '0';
    quantum_chain chain;
    for (std::size_t i = 0; i < bits.size(); i += 2) {
        chain.extend(bits.substr(i, 2), rng);
    }
    return chain;
}

}  // namespace qbc
