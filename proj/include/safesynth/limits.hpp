#ifndef SAFESYNTH_LIMITS_HPP_
#define SAFESYNTH_LIMITS_HPP_

#include <chrono>
#include <cstddef>
#include <optional>

#include "safesynth/errors.hpp"

namespace safesynth {

// Caps shared by the construction and solving stages. Passed by value;
// all fields have workable defaults.
struct RunLimits {
    std::size_t state_cap = std::size_t{1} << 20;
    // Horn enumeration is exponential in |X|+|Y|; refuse beyond this.
    unsigned horn_var_cap = 16;
    // Explicit transducer rows are states * 2^|X|; refuse beyond this.
    std::size_t transducer_row_cap = std::size_t{1} << 22;
    std::optional<std::chrono::steady_clock::time_point> deadline;

    void check_deadline(const char* where) const {
        if (deadline && std::chrono::steady_clock::now() > *deadline)
            throw ResourceError(std::string("timeout exceeded during ") + where);
    }
};

}  // namespace safesynth

#endif  // SAFESYNTH_LIMITS_HPP_
