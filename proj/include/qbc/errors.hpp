#pragma once

#include <stdexcept>

namespace qbc {

// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invalid_arity : error { using error::error; };
struct not_unitary : error { using error::error; };
struct bad_index : error { using error::error; };
struct bad_angle : error { using error::error; };
struct dimension_mismatch : error { using error::error; };

struct clock_violation : error { using error::error; };
struct unknown_photon : error { using error::error; };

// The targeted photon no longer exists (its absorption tick has passed)
// or has already been measured.
struct temporal_access_error : error { using error::error; };

struct bad_record : error { using error::error; };
struct empty_chain : error { using error::error; };
struct bad_expectation : error { using error::error; };

struct too_few_parties : error { using error::error; };
struct bad_angle_set : error { using error::error; };
struct arity_mismatch : error { using error::error; };

struct no_nodes : error { using error::error; };
struct unknown_node : error { using error::error; };

struct config_error : error { using error::error; };
struct write_error : error { using error::error; };

}  // namespace qbc
