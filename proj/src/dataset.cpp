#include "stumpscope/dataset.hpp"

#include "stumpscope/error.hpp"
#include "stumpscope/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>

namespace stumpscope {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return std::string(s);
}

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

bool parse_finite(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size() && std::isfinite(out);
}

}  // namespace

Dataset load_csv(std::istream& source, const std::string& label_column,
                 const std::string& positive_label) {
  std::string line;
  if (!std::getline(source, line)) {
    throw Error(ErrorCode::EmptyDataset, "CSV has no header row");
  }
  const auto header_cells = split_line(line);
  std::vector<std::string> header;
  header.reserve(header_cells.size());
  for (auto cell : header_cells) header.push_back(unquote(cell));

  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) {
    throw Error(ErrorCode::MissingColumn, "label column '" + label_column + "' not in header");
  }
  const auto label_col = static_cast<std::size_t>(label_it - header.begin());

  Dataset ds;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != label_col) ds.feature_names.push_back(header[c]);
  }
  const auto d = ds.feature_names.size();

  std::vector<double> values;
  std::vector<std::string> labels;
  std::size_t row = 0;
  while (std::getline(source, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::NonNumericCell,
                  "row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                      " cells, header has " + std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == label_col) {
        labels.push_back(unquote(cells[c]));
        continue;
      }
      double v = 0.0;
      if (!parse_finite(cells[c], v)) {
        throw Error(ErrorCode::NonNumericCell,
                    "row " + std::to_string(row) + ", column '" + header[c] +
                        "': '" + std::string(trim(cells[c])) + "' is not a finite number");
      }
      values.push_back(v);
    }
  }
  if (labels.empty()) throw Error(ErrorCode::EmptyDataset, "CSV has no data rows");

  std::vector<std::string> distinct;
  for (const auto& l : labels) {
    if (std::find(distinct.begin(), distinct.end(), l) == distinct.end()) {
      distinct.push_back(l);
      if (distinct.size() > 2) {
        throw Error(ErrorCode::MoreThanTwoClasses,
                    "label column '" + label_column + "' has more than two distinct values");
      }
    }
  }
  if (std::find(distinct.begin(), distinct.end(), positive_label) == distinct.end()) {
    throw Error(ErrorCode::UnknownPositiveLabel,
                "positive label '" + positive_label + "' does not occur in column '" +
                    label_column + "'");
  }
  if (distinct.size() < 2) {
    throw Error(ErrorCode::SingleClass, "label column holds a single class");
  }
  const std::string negative = distinct[0] == positive_label ? distinct[1] : distinct[0];
  ds.class_names = {negative, positive_label};

  const auto n = static_cast<Index>(labels.size());
  ds.X_raw.resize(n, static_cast<Index>(d));
  ds.y.resize(n);
  for (Index i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      ds.X_raw(i, static_cast<Index>(j)) = values[static_cast<std::size_t>(i) * d + j];
    }
    ds.y(i) = labels[static_cast<std::size_t>(i)] == positive_label ? 1 : 0;
  }
  std::tie(ds.X, ds.norm_params) = normalize_minmax(ds.X_raw);
  return ds;
}

std::pair<Matrix, std::vector<NormParam>> normalize_minmax(const Matrix& X_raw) {
  if (!X_raw.allFinite()) {
    throw Error(ErrorCode::NonFiniteInput, "feature matrix contains non-finite values");
  }
  Matrix X = Matrix::Zero(X_raw.rows(), X_raw.cols());
  std::vector<NormParam> params(static_cast<std::size_t>(X_raw.cols()));
  for (Index j = 0; j < X_raw.cols(); ++j) {
    if (X_raw.rows() == 0) continue;
    const double lo = X_raw.col(j).minCoeff();
    const double hi = X_raw.col(j).maxCoeff();
    params[static_cast<std::size_t>(j)] = {lo, hi};
    if (hi > lo) {
      X.col(j) = ((X_raw.col(j).array() - lo) / (hi - lo)).matrix();
      // Guard the endpoints against rounding.
      X.col(j) = X.col(j).cwiseMax(0.0).cwiseMin(1.0);
    }
  }
  return {X, params};
}

Matrix denormalize(const Matrix& X, const std::vector<NormParam>& params) {
  Matrix out(X.rows(), X.cols());
  for (Index j = 0; j < X.cols(); ++j) {
    const auto& p = params[static_cast<std::size_t>(j)];
    out.col(j) = (X.col(j).array() * (p.max - p.min) + p.min).matrix();
  }
  return out;
}

Split stratified_split(const Dataset& ds, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorCode::InvalidRatio, "split ratio must lie strictly between 0 and 1");
  }
  Split split;
  split.seed = seed;
  split.ratio = ratio;
  SplitMix64 rng(seed);
  for (int c = 0; c < 2; ++c) {
    IndexList members;
    for (Index i = 0; i < ds.y.size(); ++i) {
      if (ds.y(i) == c) members.push_back(i);
    }
    if (members.size() < 2) {
      throw Error(ErrorCode::ClassTooSmall,
                  "class '" + ds.class_names[static_cast<std::size_t>(c)] +
                      "' has fewer than 2 samples");
    }
    shuffle(members, rng);
    const auto size = static_cast<long>(members.size());
    const long n_train = std::clamp(std::lround(ratio * static_cast<double>(size)), 1L, size - 1);
    split.train_idx.insert(split.train_idx.end(), members.begin(), members.begin() + n_train);
    split.test_idx.insert(split.test_idx.end(), members.begin() + n_train, members.end());
  }
  std::sort(split.train_idx.begin(), split.train_idx.end());
  std::sort(split.test_idx.begin(), split.test_idx.end());
  return split;
}

}  // namespace stumpscope
