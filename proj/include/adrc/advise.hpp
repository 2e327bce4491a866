#pragma once

#include <string>

namespace adrc {

enum class DerivativeAvailability { none, partial, all };

struct AdviseAnswers {
    DerivativeAvailability derivatives = DerivativeAvailability::none;
    bool transient_shaping = false;
    bool simplicity_priority = false;
    int num_derivatives = 1;  // used for the partial branch
};

struct Advice {
    std::string scheme;  // eADRC, oADRC-A, oADRC-A<m>, oADRC-B
    std::string rationale;
};

/// Throws std::invalid_argument for an unknown availability string.
DerivativeAvailability parse_availability(const std::string& s);

Advice advise(const AdviseAnswers& a);

}  // namespace adrc
