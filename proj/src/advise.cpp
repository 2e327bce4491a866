#include "adrc/advise.hpp"

#include <stdexcept>

namespace adrc {

namespace {

const char* kEadrc =
    "Error-based ADRC: the observer and controller see only the tracking error, so no pre-filter "
    "has to be built or tuned. The feedback path and the disturbance and noise responses are the "
    "same as for output-based ADRC with equal tuning, so nothing is lost in rejection or "
    "robustness; only the separate shaping of the reference transient is given up.";

const char* kCaseA =
    "Output-based ADRC, case A: no reference derivatives are needed. The built-in pre-filter "
    "reshapes the response to set-point changes (smaller overshoot than the error-based scheme) "
    "while disturbance rejection and stability margins stay unchanged.";

const char* kCaseB =
    "Output-based ADRC, case B: all n reference derivatives enter the control law, which cancels "
    "the pre-filter dynamics and gives the best reference tracking, including for smooth "
    "time-varying references. It requires a sufficiently smooth reference with known derivatives.";

const char* kIntermediate =
    "Output-based ADRC, intermediate case: only the available reference derivatives are fed "
    "forward. Tracking improves with every derivative added, between case A and case B, without "
    "affecting disturbance rejection.";

}  // namespace

DerivativeAvailability parse_availability(const std::string& s) {
    if (s == "none") {
        return DerivativeAvailability::none;
    }
    if (s == "partial") {
        return DerivativeAvailability::partial;
    }
    if (s == "all") {
        return DerivativeAvailability::all;
    }
    throw std::invalid_argument("derivatives must be none, partial or all (got '" + s + "')");
}

Advice advise(const AdviseAnswers& a) {
    switch (a.derivatives) {
        case DerivativeAvailability::none:
            if (a.transient_shaping) {
                return {"oADRC-A", kCaseA};
            }
            return {"eADRC", kEadrc};
        case DerivativeAvailability::all:
            if (a.simplicity_priority) {
                return {"eADRC", kEadrc};
            }
            return {"oADRC-B", kCaseB};
        case DerivativeAvailability::partial:
            if (a.num_derivatives < 1) {
                throw std::invalid_argument("num-derivatives must be >= 1 for partial availability");
            }
            if (a.simplicity_priority) {
                return {"eADRC", kEadrc};
            }
            return {"oADRC-A" + std::to_string(a.num_derivatives), kIntermediate};
    }
    throw std::invalid_argument("unknown derivative availability");
}

}  // namespace adrc
