#include "dcm/error.hpp"

namespace dcm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::ComplexSpectrum: return "ComplexSpectrum";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::UndefinedMetric: return "UndefinedMetric";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace dcm
