#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "errors.hpp"

// Minimal hash-linked chain used as the tamper-sensitivity baseline:
// time-stamped blocks, each committing to its predecessor's digest, and a
// link-only validator whose surviving prefix is the property the quantum
// chain is measured against.
namespace qbc::classical {

using digest256 = std::array<std::uint8_t, 32>;

struct block {
    std::uint64_t index = 0;
    std::uint64_t timestamp = 0;
    std::vector<std::uint8_t> payload;
    digest256 prev_hash{};
};

struct chain {
    std::vector<block> blocks;
};

inline digest256 sha256(std::span<const std::uint8_t> data) {
    digest256 out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size()) {
        throw error("sha256: digest computation failed");
    }
    return out;
}

namespace detail {

inline void put_be64(std::vector<std::uint8_t>& buf, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) {
        buf.push_back(static_cast<std::uint8_t>(v >> shift));
    }
}

}  // namespace detail

// Digest input: 8-byte big-endian index, timestamp, and payload length,
// then the payload bytes, then the previous hash.
inline digest256 block_digest(const block& b) {
    std::vector<std::uint8_t> buf;
    buf.reserve(24 + b.payload.size() + 32);
    detail::put_be64(buf, b.index);
    detail::put_be64(buf, b.timestamp);
    detail::put_be64(buf, b.payload.size());
    buf.insert(buf.end(), b.payload.begin(), b.payload.end());
    buf.insert(buf.end(), b.prev_hash.begin(), b.prev_hash.end());
    return sha256(buf);
}

inline chain build_chain(std::span<const std::vector<std::uint8_t>> payloads) {
    chain c;
    digest256 prev{};  // genesis links to the all-zero digest
    for (std::size_t k = 0; k < payloads.size(); ++k) {
        block b{k, k, payloads[k], prev};
        prev = block_digest(b);
        c.blocks.push_back(std::move(b));
    }
    return c;
}

inline chain build_chain(std::span<const std::string> payloads) {
    std::vector<std::vector<std::uint8_t>> raw;
    raw.reserve(payloads.size());
    for (const auto& p : payloads) {
        raw.emplace_back(p.begin(), p.end());
    }
    return build_chain(raw);
}

// Replaces one block's payload without repairing downstream links.
inline void tamper_block(chain& c, std::size_t k, std::vector<std::uint8_t> new_payload) {
    if (k >= c.blocks.size()) {
        throw bad_index("tamper_block: block index out of range");
    }
    c.blocks[k].payload = std::move(new_payload);
}

// First block whose stored link no longer matches its predecessor's
// recomputed digest, or nothing when every link holds. Blocks before the
// returned index still pass their own link checks; a tampered final block
// has no successor and is invisible to link-only validation.
inline std::optional<std::size_t> validate_chain(const chain& c) {
    for (std::size_t k = 1; k < c.blocks.size(); ++k) {
        if (c.blocks[k].prev_hash != block_digest(c.blocks[k - 1])) {
            return k;
        }
    }
    return std::nullopt;
}

}  // namespace qbc::classical
