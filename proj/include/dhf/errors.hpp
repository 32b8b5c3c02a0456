#pragma once

#include <stdexcept>
#include <string>

namespace dhf {

// Base for all domain errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define DHF_DEFINE_ERROR(NAME)                                                 \
    struct NAME final : Error {                                                \
        explicit NAME(const std::string& msg) : Error(msg) {}                  \
    }

// timeseries
DHF_DEFINE_ERROR(EmptyIntersectionError);
DHF_DEFINE_ERROR(TooShortError);
DHF_DEFINE_ERROR(ParseError);
DHF_DEFINE_ERROR(DuplicateTimestampError);

// features
DHF_DEFINE_ERROR(InsufficientHistoryError);
DHF_DEFINE_ERROR(MissingForecastError);

// experts
DHF_DEFINE_ERROR(InvalidSpecError);
DHF_DEFINE_ERROR(SingularError);
DHF_DEFINE_ERROR(NonConvergenceError);
DHF_DEFINE_ERROR(NonFiniteError);
DHF_DEFINE_ERROR(KindMismatchError);

// aggregation / backtest
DHF_DEFINE_ERROR(ZeroActualError);
DHF_DEFINE_ERROR(LengthMismatchError);
DHF_DEFINE_ERROR(ZeroVarianceError);
DHF_DEFINE_ERROR(EmptyRangeError);

// io
DHF_DEFINE_ERROR(IoError);

#undef DHF_DEFINE_ERROR

} // namespace dhf
