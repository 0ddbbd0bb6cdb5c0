#include "statarb/errors.hpp"

namespace statarb {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::Ok: return "Ok";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::OverlappingMembership: return "OverlappingMembership";
        case ErrorCode::UnknownSicDivision: return "UnknownSicDivision";
        case ErrorCode::NonPositivePrice: return "NonPositivePrice";
        case ErrorCode::TickerMismatch: return "TickerMismatch";
        case ErrorCode::ReturnMismatch: return "ReturnMismatch";
        case ErrorCode::OutOfRangeValue: return "OutOfRangeValue";
        case ErrorCode::MissingMonthlyLevel: return "MissingMonthlyLevel";
        case ErrorCode::DuplicateMonth: return "DuplicateMonth";
        case ErrorCode::EmptyUniverse: return "EmptyUniverse";
        case ErrorCode::InsufficientHistory: return "InsufficientHistory";
        case ErrorCode::NegativeSvi: return "NegativeSvi";
        case ErrorCode::ZeroPriorVolume: return "ZeroPriorVolume";
        case ErrorCode::DegenerateDay: return "DegenerateDay";
        case ErrorCode::SingleClassTrainingSet: return "SingleClassTrainingSet";
        case ErrorCode::EmptyPanel: return "EmptyPanel";
        case ErrorCode::MissingVariable: return "MissingVariable";
        case ErrorCode::RangeTooShort: return "RangeTooShort";
        case ErrorCode::TooFewScores: return "TooFewScores";
        case ErrorCode::MissingRealizedReturn: return "MissingRealizedReturn";
        case ErrorCode::SingleClass: return "SingleClass";
        case ErrorCode::TooFewObservations: return "TooFewObservations";
        case ErrorCode::DateMismatch: return "DateMismatch";
        case ErrorCode::DegenerateMoments: return "DegenerateMoments";
        case ErrorCode::GeometricUndefined: return "GeometricUndefined";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::InternalError: return "InternalError";
    }
    return "Unknown";
}

}  // namespace statarb
