#pragma once

#include <stdexcept>
#include <string>

namespace wvote {

// Every recoverable failure in the library derives from Error so callers can
// catch the whole family or a single kind.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define WVOTE_DEFINE_ERROR(Name)                  \
    class Name : public Error {                   \
    public:                                       \
        using Error::Error;                       \
    }

WVOTE_DEFINE_ERROR(InvalidRanking);
WVOTE_DEFINE_ERROR(InvalidValue);
WVOTE_DEFINE_ERROR(DegenerateWeights);
WVOTE_DEFINE_ERROR(ShapeMismatch);
WVOTE_DEFINE_ERROR(InvalidPair);
WVOTE_DEFINE_ERROR(BadMixture);
WVOTE_DEFINE_ERROR(EnumerationRefused);
WVOTE_DEFINE_ERROR(EstimatorUndefined);
WVOTE_DEFINE_ERROR(NoWitness);
WVOTE_DEFINE_ERROR(HypothesisViolated);
WVOTE_DEFINE_ERROR(ConfigError);

#undef WVOTE_DEFINE_ERROR

// Raised when an internal invariant from a construction is broken. Never
// expected in a correct build; distinct from Error so tests can tell them apart.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace wvote
