// errors.hpp
// Typed error conditions shared by the C++ core and the C API.

#pragma once

#include <stdexcept>
#include <string>

namespace statarb {

// Values are part of the shared-library ABI (see statarb.h); keep stable.
enum class ErrorCode : int {
    Ok = 0,
    ConfigError = 1,
    IoError = 2,
    MalformedRow = 10,
    OverlappingMembership = 11,
    UnknownSicDivision = 12,
    NonPositivePrice = 13,
    TickerMismatch = 14,
    ReturnMismatch = 15,
    OutOfRangeValue = 20,
    MissingMonthlyLevel = 21,
    DuplicateMonth = 22,
    EmptyUniverse = 23,
    InsufficientHistory = 30,
    NegativeSvi = 31,
    ZeroPriorVolume = 32,
    DegenerateDay = 33,
    SingleClassTrainingSet = 40,
    EmptyPanel = 41,
    MissingVariable = 42,
    RangeTooShort = 50,
    TooFewScores = 60,
    MissingRealizedReturn = 61,
    SingleClass = 70,
    TooFewObservations = 71,
    DateMismatch = 72,
    DegenerateMoments = 73,
    GeometricUndefined = 74,
    InvalidConfig = 80,
    InternalError = 99,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace statarb
