#pragma once

#include <stdexcept>
#include <string>

namespace veroweb {

// Violated operation precondition (bad mathematical input).
struct precondition_error : std::runtime_error {
    explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

// Shape mismatch between operands (dimensions, variable lists, grades).
struct dimension_error : std::runtime_error {
    explicit dimension_error(const std::string& what) : std::runtime_error(what) {}
};

// Input is degenerate where the operation needs regularity (zero form, zero pencil).
struct degenerate_error : std::runtime_error {
    explicit degenerate_error(const std::string& what) : std::runtime_error(what) {}
};

// Requested computation exceeds the truncation order of the jets involved.
struct truncation_error : std::runtime_error {
    explicit truncation_error(const std::string& what) : std::runtime_error(what) {}
};

// An internal certificate failed (sampling did not stabilize, a per-order
// linear solve was singular).  Indicates a bug or an out-of-contract input.
struct internal_error : std::runtime_error {
    explicit internal_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed serialized input.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace veroweb
