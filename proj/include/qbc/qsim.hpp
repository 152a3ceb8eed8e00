#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "random.hpp"
#include "state_vector.hpp"

namespace qbc {

// One of the four Bell states. x is the phase bit, y the parity bit:
// (0,0) phi+, (1,0) phi-, (0,1) psi+, (1,1) psi-.
struct bell_label {
    int x = 0;
    int y = 0;

    static bell_label phi_plus() { return {0, 0}; }
    static bell_label phi_minus() { return {1, 0}; }
    static bell_label psi_plus() { return {0, 1}; }
    static bell_label psi_minus() { return {1, 1}; }

    const char* name() const {
        if (y == 0) return x == 0 ? "phi+" : "phi-";
        return x == 0 ? "psi+" : "psi-";
    }

    friend bool operator==(const bell_label&, const bell_label&) = default;
};

namespace detail {

inline int to_bit(char c, const char* who) {
    if (c == '0') return 0;
    if (c == '1') return 1;
    throw bad_record(std::string(who) + ": bit string may contain only 0 and 1");
}

inline constexpr double inv_sqrt2 = 0.70710678118654752440;

}  // namespace detail

// (|0,y> + (-1)^x |1,~y>)/sqrt(2)
inline state_vector bell_state(int x, int y) {
    if ((x & ~1) || (y & ~1)) {
        throw bad_record("bell_state: x and y must be bits");
    }
    std::vector<amplitude> amps(4);
    amps[static_cast<std::uint64_t>(y)] = amplitude{detail::inv_sqrt2, 0};
    amps[2 + (1 - y)] = amplitude{x ? -detail::inv_sqrt2 : detail::inv_sqrt2, 0};
    return state_vector::from_amplitudes(2, std::move(amps));
}

inline state_vector bell_state(bell_label label) { return bell_state(label.x, label.y); }

// (|0, r2, ..., rL> + (-1)^{r1} |1, ~r2, ..., ~rL>)/sqrt(2). The family over
// all L-bit labels is a complete orthonormal basis; the two-qubit members
// are exactly the Bell states.
inline state_vector ghz_state(std::string_view bits) {
    const int L = static_cast<int>(bits.size());
    if (L < 2) {
        throw invalid_arity("ghz_state: need at least two qubits");
    }
    const std::uint64_t dim = std::uint64_t{1} << L;
    std::uint64_t first = 0;  // |0, r2, ..., rL>
    int phase = detail::to_bit(bits[0], "ghz_state");
    for (int j = 1; j < L; ++j) {
        first = (first << 1) | static_cast<std::uint64_t>(detail::to_bit(bits[j], "ghz_state"));
    }
    std::vector<amplitude> amps(dim);
    amps[first] = amplitude{detail::inv_sqrt2, 0};
    amps[~first & (dim - 1)] = amplitude{phase ? -detail::inv_sqrt2 : detail::inv_sqrt2, 0};
    return state_vector::from_amplitudes(L, std::move(amps));
}

struct ghz_measurement {
    std::string bits;
    double probability = 0.0;
    state_vector post_state;
};

// Projective measurement in the complete GHZ basis over all L-bit labels,
// sampled with Born probabilities. The post state is the sampled basis state.
inline ghz_measurement ghz_basis_measure(const state_vector& s, random_source& rng) {
    const int L = s.num_qubits();
    if (L < 2) {
        throw invalid_arity("ghz_basis_measure: need at least two qubits");
    }
    const std::uint64_t dim = s.dim();
    const std::uint64_t half = dim >> 1;

    // Basis state for label (r1, rest): amplitudes at |0,rest> and its
    // complement, so each overlap needs only two reads.
    auto label_prob = [&](std::uint64_t rest, int r1) {
        const amplitude a = s[rest];
        const amplitude b = s[~rest & (dim - 1)];
        const amplitude ov = (r1 ? (a - b) : (a + b)) * detail::inv_sqrt2;
        return std::norm(ov);
    };

    const double u = rng.next_double();
    double cum = 0.0;
    std::uint64_t picked_rest = 0;
    int picked_r1 = 0;
    double picked_p = 0.0;
    bool done = false;
    for (std::uint64_t rest = 0; rest < half && !done; ++rest) {
        for (int r1 = 0; r1 < 2; ++r1) {
            const double p = label_prob(rest, r1);
            cum += p;
            if (u < cum) {
                picked_rest = rest;
                picked_r1 = r1;
                picked_p = p;
                done = true;
                break;
            }
            if (p > picked_p) {  // fallback against rounding shortfall
                picked_rest = rest;
                picked_r1 = r1;
                picked_p = p;
            }
        }
    }

    std::string bits(static_cast<std::size_t>(L), '0');
    bits[0] = picked_r1 ? '1' : '0';
    for (int j = 1; j < L; ++j) {
        bits[j] = ((picked_rest >> (L - 1 - j)) & 1u) ? '1' : '0';
    }
    return ghz_measurement{bits, picked_p, ghz_state(bits)};
}

struct theta_measurement {
    int outcome = 0;  // 0 picks |+_theta>, 1 picks |-_theta>
    state_vector post_state;
};

// Projects one qubit onto {(|0> + e^{i theta}|1>)/sqrt2, (|0> - e^{i theta}|1>)/sqrt2}.
inline theta_measurement measure_theta_basis(const state_vector& s, int qubit, double theta,
                                             random_source& rng) {
    if (qubit < 0 || qubit >= s.num_qubits()) {
        throw bad_index("measure_theta_basis: qubit index out of range");
    }
    if (!(theta >= 0.0) || theta >= std::numbers::pi) {
        throw bad_angle("measure_theta_basis: theta must lie in [0, pi)");
    }
    const std::uint64_t mask = s.qubit_mask(qubit);
    const amplitude phase = std::polar(1.0, theta);

    double p_plus = 0.0;
    for (std::uint64_t i0 = 0; i0 < s.dim(); ++i0) {
        if (i0 & mask) continue;
        const amplitude c = (s[i0] + std::conj(phase) * s[i0 | mask]) * detail::inv_sqrt2;
        p_plus += std::norm(c);
    }
    p_plus = std::clamp(p_plus, 0.0, 1.0);

    const int outcome = rng.next_double() < p_plus ? 0 : 1;
    const double sign = outcome == 0 ? 1.0 : -1.0;

    std::vector<amplitude> out(s.dim());
    double n2 = 0.0;
    for (std::uint64_t i0 = 0; i0 < s.dim(); ++i0) {
        if (i0 & mask) continue;
        const std::uint64_t i1 = i0 | mask;
        const amplitude c = (s[i0] + sign * std::conj(phase) * s[i1]) * detail::inv_sqrt2;
        out[i0] = c * detail::inv_sqrt2;
        out[i1] = c * sign * phase * detail::inv_sqrt2;
        n2 += std::norm(out[i0]) + std::norm(out[i1]);
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : out) a *= inv;
    return theta_measurement{outcome, state_vector::from_amplitudes(s.num_qubits(), std::move(out))};
}

struct bell_projection {
    bell_label label;
    double probability = 0.0;
    state_vector post_state;
};

// Bell-basis projection of the designated pair. All qubits are retained;
// the pair is left in the sampled Bell state and the rest renormalized.
inline bell_projection project_bell(const state_vector& s, int qubit_a, int qubit_b,
                                    random_source& rng) {
    const int n = s.num_qubits();
    if (qubit_a == qubit_b || qubit_a < 0 || qubit_b < 0 || qubit_a >= n || qubit_b >= n) {
        throw bad_index("project_bell: need two distinct in-range qubits");
    }
    const std::uint64_t ma = s.qubit_mask(qubit_a);
    const std::uint64_t mb = s.qubit_mask(qubit_b);

    constexpr bell_label order[4] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    double probs[4] = {0, 0, 0, 0};
    for (int li = 0; li < 4; ++li) {
        const auto [x, y] = order[li];
        double p = 0.0;
        for (std::uint64_t base = 0; base < s.dim(); ++base) {
            if (base & (ma | mb)) continue;
            const std::uint64_t i0y = base | (y ? mb : 0);
            const std::uint64_t i1ny = base | ma | (y ? 0 : mb);
            const amplitude c = (s[i0y] + (x ? -1.0 : 1.0) * s[i1ny]) * detail::inv_sqrt2;
            p += std::norm(c);
        }
        probs[li] = p;
    }

    const double u = rng.next_double();
    int pick = 0;
    double cum = 0.0;
    double best = -1.0;
    int best_i = 0;
    bool done = false;
    for (int li = 0; li < 4; ++li) {
        cum += probs[li];
        if (u < cum) {
            pick = li;
            done = true;
            break;
        }
        if (probs[li] > best) {
            best = probs[li];
            best_i = li;
        }
    }
    if (!done) pick = best_i;

    const auto [x, y] = order[pick];
    std::vector<amplitude> out(s.dim());
    double n2 = 0.0;
    for (std::uint64_t base = 0; base < s.dim(); ++base) {
        if (base & (ma | mb)) continue;
        const std::uint64_t i0y = base | (y ? mb : 0);
        const std::uint64_t i1ny = base | ma | (y ? 0 : mb);
        const amplitude c = (s[i0y] + (x ? -1.0 : 1.0) * s[i1ny]) * detail::inv_sqrt2;
        out[i0y] = c * detail::inv_sqrt2;
        out[i1ny] = c * (x ? -detail::inv_sqrt2 : detail::inv_sqrt2);
        n2 += std::norm(out[i0y]) + std::norm(out[i1ny]);
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : out) a *= inv;
    return bell_projection{order[pick], probs[pick],
                           state_vector::from_amplitudes(n, std::move(out))};
}

struct pbs_fusion {
    bool success = false;
    double success_probability = 0.0;  // Born weight of the coincidence branch
    state_vector post_state;
};

// Polarizing-beam-splitter coincidence on two qubits. Success keeps the
// equal-polarization subspace span{|00>, |11>} of the pair, failure keeps
// the complement; the branch is sampled with its Born probability and the
// coincidence probability is always reported.
inline pbs_fusion fuse_pbs(const state_vector& s, int qubit_a, int qubit_b, random_source& rng) {
    const int n = s.num_qubits();
    if (qubit_a == qubit_b || qubit_a < 0 || qubit_b < 0 || qubit_a >= n || qubit_b >= n) {
        throw bad_index("fuse_pbs: need two distinct in-range qubits");
    }
    const std::uint64_t ma = s.qubit_mask(qubit_a);
    const std::uint64_t mb = s.qubit_mask(qubit_b);

    double p_succ = 0.0;
    for (std::uint64_t i = 0; i < s.dim(); ++i) {
        const bool equal = ((i & ma) != 0) == ((i & mb) != 0);
        if (equal) p_succ += std::norm(s[i]);
    }
    p_succ = std::clamp(p_succ, 0.0, 1.0);

    const bool success = rng.next_double() < p_succ;
    std::vector<amplitude> out(s.dim());
    double n2 = 0.0;
    for (std::uint64_t i = 0; i < s.dim(); ++i) {
        const bool equal = ((i & ma) != 0) == ((i & mb) != 0);
        if (equal == success) {
            out[i] = s[i];
            n2 += std::norm(s[i]);
        }
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : out) a *= inv;
    return pbs_fusion{success, p_succ, state_vector::from_amplitudes(n, std::move(out))};
}

// True iff a two-qubit state factors into a product of single-qubit states,
// decided by the determinant of its 2x2 amplitude matrix.
inline bool is_separable_pair(const state_vector& s) {
    if (s.num_qubits() != 2) {
        throw invalid_arity("is_separable_pair: expects a two-qubit state");
    }
    const amplitude det = s[0] * s[3] - s[1] * s[2];
    return std::abs(det) < 1e-9;
}

// Haar-random element of U(2): a Gaussian column normalized to the sphere,
// completed by its orthogonal complement with a uniform phase.
inline mat2 random_unitary2(random_source& rng) {
    auto gaussian = [&rng]() {
        const double u1 = 1.0 - rng.next_double();  // (0, 1]
        const double u2 = rng.next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return std::pair{r * std::cos(2.0 * std::numbers::pi * u2),
                         r * std::sin(2.0 * std::numbers::pi * u2)};
    };
    const auto [ar, ai] = gaussian();
    const auto [br, bi] = gaussian();
    amplitude a{ar, ai};
    amplitude b{br, bi};
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    a /= n;
    b /= n;
    const amplitude phase = std::polar(1.0, 2.0 * std::numbers::pi * rng.next_double());
    return mat2{{{a, -phase * std::conj(b)}, {b, phase * std::conj(a)}}};
}

}  // namespace qbc
