#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace qbc {

using amplitude = std::complex<double>;
using mat2 = std::array<std::array<amplitude, 2>, 2>;

inline constexpr double norm_tolerance = 1e-10;

// Dense normalized state vector over num_qubits qubits. Qubit 0 is the
// most significant bit of the basis index, so basis states are ordered by
// the integer value of their bit string read left to right.
class state_vector {
public:
    // Computational basis state |basis_index>.
    explicit state_vector(int num_qubits, std::uint64_t basis_index = 0)
        : num_qubits_(num_qubits) {
        if (num_qubits < 1) {
            throw invalid_arity("state_vector: need at least one qubit");
        }
        amps_.assign(std::uint64_t{1} << num_qubits, amplitude{});
        if (basis_index >= amps_.size()) {
            throw bad_index("state_vector: basis index out of range");
        }
        amps_[basis_index] = amplitude{1.0, 0.0};
    }

    // Adopts the given amplitudes; they must already be normalized.
    static state_vector from_amplitudes(int num_qubits, std::vector<amplitude> amps) {
        state_vector s(num_qubits);
        if (amps.size() != s.dim()) {
            throw dimension_mismatch("state_vector: amplitude count is not 2^num_qubits");
        }
        double n2 = 0.0;
        for (const auto& a : amps) {
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
                throw error("state_vector: non-finite amplitude");
            }
            n2 += std::norm(a);
        }
        if (std::abs(std::sqrt(n2) - 1.0) > norm_tolerance) {
            throw error("state_vector: amplitudes are not normalized");
        }
        s.amps_ = std::move(amps);
        return s;
    }

    // Scales arbitrary (nonzero) amplitudes to norm one, then adopts them.
    static state_vector normalized(int num_qubits, std::vector<amplitude> amps) {
        double n2 = 0.0;
        for (const auto& a : amps) n2 += std::norm(a);
        if (n2 <= 0.0) {
            throw error("state_vector: cannot normalize the zero vector");
        }
        const double inv = 1.0 / std::sqrt(n2);
        for (auto& a : amps) a *= inv;
        return from_amplitudes(num_qubits, std::move(amps));
    }

    int num_qubits() const { return num_qubits_; }
    std::uint64_t dim() const { return amps_.size(); }
    const amplitude& operator[](std::uint64_t i) const { return amps_[i]; }
    std::span<const amplitude> amplitudes() const { return amps_; }

    // Bit carried by qubit q in basis index i.
    int bit(std::uint64_t i, int q) const {
        return static_cast<int>((i >> (num_qubits_ - 1 - q)) & 1u);
    }

    std::uint64_t qubit_mask(int q) const {
        return std::uint64_t{1} << (num_qubits_ - 1 - q);
    }

    double norm() const {
        double n2 = 0.0;
        for (const auto& a : amps_) n2 += std::norm(a);
        return std::sqrt(n2);
    }

private:
    int num_qubits_;
    std::vector<amplitude> amps_;
};

inline amplitude inner_product(const state_vector& a, const state_vector& b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw dimension_mismatch("inner_product: qubit counts differ");
    }
    amplitude acc{};
    for (std::uint64_t i = 0; i < a.dim(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

// |<a|b>|^2, insensitive to global phase.
inline double fidelity(const state_vector& a, const state_vector& b) {
    return std::norm(inner_product(a, b));
}

inline state_vector tensor(const state_vector& a, const state_vector& b) {
    std::vector<amplitude> out(a.dim() * b.dim());
    for (std::uint64_t i = 0; i < a.dim(); ++i) {
        for (std::uint64_t j = 0; j < b.dim(); ++j) {
            out[i * b.dim() + j] = a[i] * b[j];
        }
    }
    return state_vector::from_amplitudes(a.num_qubits() + b.num_qubits(), std::move(out));
}

inline bool is_unitary_2x2(const mat2& u, double tol = norm_tolerance) {
    // u^dagger u == identity
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            amplitude acc{};
            for (int k = 0; k < 2; ++k) {
                acc += std::conj(u[k][r]) * u[k][c];
            }
            const amplitude want = (r == c) ? amplitude{1.0, 0.0} : amplitude{};
            if (std::abs(acc - want) > tol) return false;
        }
    }
    return true;
}

// Applies a 2x2 unitary to one qubit, identity elsewhere.
inline state_vector apply_single_qubit(const state_vector& s, int qubit, const mat2& u) {
    if (qubit < 0 || qubit >= s.num_qubits()) {
        throw bad_index("apply_single_qubit: qubit index out of range");
    }
    if (!is_unitary_2x2(u)) {
        throw not_unitary("apply_single_qubit: matrix is not unitary");
    }
    const std::uint64_t mask = s.qubit_mask(qubit);
    std::vector<amplitude> out(s.dim());
    for (std::uint64_t i0 = 0; i0 < s.dim(); ++i0) {
        if (i0 & mask) continue;
        const std::uint64_t i1 = i0 | mask;
        out[i0] = u[0][0] * s[i0] + u[0][1] * s[i1];
        out[i1] = u[1][0] * s[i0] + u[1][1] * s[i1];
    }
    return state_vector::from_amplitudes(s.num_qubits(), std::move(out));
}

inline mat2 pauli_x() {
    return mat2{{{amplitude{0, 0}, amplitude{1, 0}}, {amplitude{1, 0}, amplitude{0, 0}}}};
}

inline mat2 pauli_z() {
    return mat2{{{amplitude{1, 0}, amplitude{0, 0}}, {amplitude{0, 0}, amplitude{-1, 0}}}};
}

inline mat2 hadamard() {
    const double h = 1.0 / std::sqrt(2.0);
    return mat2{{{amplitude{h, 0}, amplitude{h, 0}}, {amplitude{h, 0}, amplitude{-h, 0}}}};
}

}  // namespace qbc
