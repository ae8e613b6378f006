#include "qfl/errors.hpp"

namespace qfl {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::TowerMismatch: return "TowerMismatch";
    case ErrorCode::ZeroArgument: return "ZeroArgument";
    case ErrorCode::UnsupportedLevel: return "UnsupportedLevel";
    case ErrorCode::NotIntegralUnit: return "NotIntegralUnit";
    case ErrorCode::SingularForm: return "SingularForm";
    case ErrorCode::UnsupportedTower: return "UnsupportedTower";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ZeroScalar: return "ZeroScalar";
    case ErrorCode::RuleNotApplicable: return "RuleNotApplicable";
    case ErrorCode::PreconditionSpanViolated: return "PreconditionSpanViolated";
    case ErrorCode::WitnessInvalid: return "WitnessInvalid";
    case ErrorCode::FoldMismatch: return "FoldMismatch";
    case ErrorCode::ConfigUnsupported: return "ConfigUnsupported";
    case ErrorCode::NoGoodSlot: return "NoGoodSlot";
    case ErrorCode::NotIsotropic: return "NotIsotropic";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace qfl
