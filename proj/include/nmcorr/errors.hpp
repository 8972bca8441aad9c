// errors.hpp - exception types raised by the nmcorr library
//
// Two families: NumericalError covers failures of an otherwise valid
// computation (quadrature did not converge, a state is degenerate, ...);
// std::invalid_argument / std::domain_error cover caller mistakes.  The CLI
// maps the first family to exit code 3 and the second to exit code 2.

#pragma once

#include <stdexcept>
#include <string>

namespace nmcorr {

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define NMCORR_NUMERICAL_ERROR(Name)                                  \
    class Name : public NumericalError {                              \
    public:                                                           \
        explicit Name(const std::string& what)                        \
            : NumericalError(std::string(#Name ": ") + what) {}       \
    }

NMCORR_NUMERICAL_ERROR(NonConvergence);
NMCORR_NUMERICAL_ERROR(NoBracket);
NMCORR_NUMERICAL_ERROR(StepTooCoarse);
NMCORR_NUMERICAL_ERROR(NotConverged);
NMCORR_NUMERICAL_ERROR(ImaginaryLeak);
NMCORR_NUMERICAL_ERROR(UZero);
NMCORR_NUMERICAL_ERROR(DegenerateState);
NMCORR_NUMERICAL_ERROR(ExactZero);
NMCORR_NUMERICAL_ERROR(NoDecay);

#undef NMCORR_NUMERICAL_ERROR

class PoleOutOfRange : public std::invalid_argument {
public:
    explicit PoleOutOfRange(const std::string& what)
        : std::invalid_argument("PoleOutOfRange: " + what) {}
};

class DegenerateArgument : public std::domain_error {
public:
    explicit DegenerateArgument(const std::string& what)
        : std::domain_error("DegenerateArgument: " + what) {}
};

}  // namespace nmcorr
