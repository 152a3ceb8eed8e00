#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace qbc {

// Discrete time in units of the inter-block interval.
using tick = std::uint64_t;

enum class spatial_mode { a, b };
enum class photon_status { live, absorbed };

struct photon_record {
    std::uint64_t id = 0;
    spatial_mode mode = spatial_mode::a;
    tick created_at = 0;
    std::optional<tick> absorbed_at;  // scheduled absorption tick
    photon_status status = photon_status::live;
    bool measured = false;  // consumed by detection, fusion, or measurement
};

// Photon registry with a forward-only clock. A photon is reachable while
// its absorption tick has not strictly passed and nothing has measured it;
// a photon exactly at its absorption tick is still in flight, which is the
// one-last-photon window the chain's tamper rule relies on.
class timeline {
public:
    tick clock() const { return clock_; }

    void advance(tick to) {
        if (to < clock_) {
            throw clock_violation("advance: clock only moves forward");
        }
        clock_ = to;
        for (auto& p : photons_) {
            if (p.absorbed_at && *p.absorbed_at <= clock_) {
                p.status = photon_status::absorbed;
            }
        }
    }

    // Registers the photon pair of block k. The early photon is detected
    // the instant it is created; the late photon survives one tick in the
    // delay line.
    std::pair<photon_record, photon_record> emit_block_pair(tick k) {
        if (clock_ != k) {
            throw clock_violation("emit_block_pair: clock must sit at the block's tick");
        }
        photon_record early{next_id_++, spatial_mode::a, k, k, photon_status::absorbed, true};
        photon_record late{next_id_++, spatial_mode::b, k, k + 1, photon_status::live, false};
        photons_.push_back(early);
        photons_.push_back(late);
        return {early, late};
    }

    const photon_record& photon(std::uint64_t id) const {
        if (id >= photons_.size()) {
            throw unknown_photon("photon: no record with id " + std::to_string(id));
        }
        return photons_[id];
    }

    bool accessible(std::uint64_t id) const {
        const auto& p = photon(id);
        return !p.measured && (!p.absorbed_at || *p.absorbed_at >= clock_);
    }

    // Photons an attacker could still reach at the current clock.
    std::vector<photon_record> accessible_photons() const {
        std::vector<photon_record> out;
        for (const auto& p : photons_) {
            if (accessible(p.id)) out.push_back(p);
        }
        return out;
    }

    void mark_measured(std::uint64_t id) {
        if (id >= photons_.size()) {
            throw unknown_photon("mark_measured: no record with id " + std::to_string(id));
        }
        photons_[id].measured = true;
        photons_[id].status = photon_status::absorbed;
    }

    std::size_t photon_count() const { return photons_.size(); }
    const std::vector<photon_record>& photons() const { return photons_; }

private:
    tick clock_ = 0;
    std::uint64_t next_id_ = 0;
    std::vector<photon_record> photons_;  // id doubles as the index
};

}  // namespace qbc
