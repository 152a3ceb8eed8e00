#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "qsim.hpp"

namespace qbc {

inline constexpr double angle_tolerance = 1e-9;

enum class node_strategy { honest, flip_report, random_report };

// Measurement angles for one verification round, one per party, each in
// [0, pi) and summing to a multiple of pi.
struct angle_set {
    std::vector<double> thetas;

    int parties() const { return static_cast<int>(thetas.size()); }

    double sum() const {
        double s = 0.0;
        for (double t : thetas) s += t;
        return s;
    }

    bool valid() const {
        for (double t : thetas) {
            if (!(t >= 0.0) || t >= std::numbers::pi) return false;
        }
        const double s = sum();
        return std::abs(s - std::round(s / std::numbers::pi) * std::numbers::pi) <
               angle_tolerance;
    }
};

// Draws n-1 angles uniformly on [0, pi); the last angle absorbs the
// multiple-of-pi constraint.
inline angle_set generate_angles(int n, random_source& rng) {
    if (n < 2) {
        throw too_few_parties("generate_angles: need at least two parties");
    }
    angle_set angles;
    angles.thetas.reserve(static_cast<std::size_t>(n));
    double partial = 0.0;
    for (int j = 0; j < n - 1; ++j) {
        const double t = std::numbers::pi * rng.next_double();
        angles.thetas.push_back(t);
        partial += t;
    }
    double last = std::fmod(std::numbers::pi - std::fmod(partial, std::numbers::pi),
                            std::numbers::pi);
    if (last < 0.0 || last >= std::numbers::pi) last = 0.0;
    angles.thetas.push_back(last);
    return angles;
}

// round(sum/pi) mod 2 - the parity the XOR of honest outcomes must match.
inline int target_parity(const angle_set& angles) {
    if (!angles.valid()) {
        throw bad_angle_set("target_parity: angle sum is not a multiple of pi");
    }
    return static_cast<int>(std::llround(angles.sum() / std::numbers::pi)) & 1;
}

struct verification_round {
    angle_set angles;
    std::vector<int> outcomes;  // raw measurement results Y_j
    std::vector<int> reported;  // after each node's strategy
    int target = 0;
    bool pass = false;
};

// One verification round with caller-supplied angles. Parties measure the
// shared state sequentially in index order; the order does not affect the
// joint outcome statistics of these commuting measurements.
inline verification_round run_round(const state_vector& block,
                                    std::span<const node_strategy> strategies,
                                    const angle_set& angles, random_source& rng) {
    const int n = block.num_qubits();
    if (n != static_cast<int>(strategies.size())) {
        throw arity_mismatch("run_round: one strategy per qubit");
    }
    if (angles.parties() != n) {
        throw arity_mismatch("run_round: one angle per qubit");
    }
    verification_round round;
    round.angles = angles;
    round.target = target_parity(angles);

    state_vector s = block;
    int xor_reported = 0;
    for (int j = 0; j < n; ++j) {
        auto m = measure_theta_basis(s, j, angles.thetas[static_cast<std::size_t>(j)], rng);
        s = std::move(m.post_state);
        round.outcomes.push_back(m.outcome);
        int rep = m.outcome;
        switch (strategies[static_cast<std::size_t>(j)]) {
            case node_strategy::honest: break;
            case node_strategy::flip_report: rep = 1 - rep; break;
            case node_strategy::random_report: rep = rng.next_bit(); break;
        }
        round.reported.push_back(rep);
        xor_reported ^= rep;
    }
    round.pass = xor_reported == round.target;
    return round;
}

inline verification_round run_round(const state_vector& block,
                                    std::span<const node_strategy> strategies,
                                    random_source& rng) {
    const angle_set angles = generate_angles(block.num_qubits(), rng);
    return run_round(block, strategies, angles, rng);
}

// Fraction of passing rounds over independently angled trials, each on a
// fresh copy of the block state.
inline double estimate_pass_rate(const state_vector& block,
                                 std::span<const node_strategy> strategies, int trials,
                                 random_source& rng) {
    if (trials < 1) {
        throw error("estimate_pass_rate: need at least one trial");
    }
    int passes = 0;
    for (int t = 0; t < trials; ++t) {
        if (run_round(block, strategies, rng).pass) ++passes;
    }
    return static_cast<double>(passes) / static_cast<double>(trials);
}

}  // namespace qbc
