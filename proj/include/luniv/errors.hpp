#pragma once

#include <stdexcept>
#include <string>

namespace luniv {

// Internal error estimate exceeded the requested tolerance.
struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The log branch could not be tracked (possible zero on the horizontal path,
// or the point lies outside the branch domain).
struct branch_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A construction step failed; `step` names it.
struct pipeline_error : std::runtime_error {
    std::string step;
    pipeline_error(std::string step_, const std::string& what_)
        : std::runtime_error(what_), step(std::move(step_)) {}
};

}  // namespace luniv
