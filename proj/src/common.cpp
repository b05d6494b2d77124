#include "stumpscope/error.hpp"
#include "stumpscope/types.hpp"

namespace stumpscope {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::MoreThanTwoClasses: return "MoreThanTwoClasses";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::UnknownPositiveLabel: return "UnknownPositiveLabel";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::ClassTooSmall: return "ClassTooSmall";
    case ErrorCode::InvalidRatio: return "InvalidRatio";
    case ErrorCode::DegenerateTraining: return "DegenerateTraining";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::MissingIndex: return "MissingIndex";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::DuplicateIndex: return "DuplicateIndex";
    case ErrorCode::RangeTooSmall: return "RangeTooSmall";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::StumpIndexOutOfRange: return "StumpIndexOutOfRange";
    case ErrorCode::ThresholdOutOfDomain: return "ThresholdOutOfDomain";
    case ErrorCode::NothingToUndo: return "NothingToUndo";
    case ErrorCode::InvalidPrecision: return "InvalidPrecision";
    case ErrorCode::InvalidDocument: return "InvalidDocument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
  }
  return "Unknown";
}

std::string_view to_string(Side side) noexcept {
  return side == Side::Left ? "left" : "right";
}

std::string to_string(Precision p) {
  if (p == Precision::Full) return "full";
  return std::to_string(static_cast<int>(p));
}

Precision parse_precision(std::string_view text) {
  if (text == "full") return Precision::Full;
  if (text.size() == 1 && text[0] >= '1' && text[0] <= '4') {
    return static_cast<Precision>(text[0] - '0');
  }
  throw Error(ErrorCode::InvalidPrecision,
              "precision must be 1, 2, 3, 4 or full, got '" + std::string(text) + "'");
}

Matrix select_rows(const Matrix& X, const IndexList& rows) {
  Matrix out(static_cast<Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Index>(i)) = X.row(rows[i]);
  }
  return out;
}

Labels select_rows(const Labels& y, const IndexList& rows) {
  Labels out(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out(static_cast<Index>(i)) = y(rows[i]);
  }
  return out;
}

}  // namespace stumpscope
