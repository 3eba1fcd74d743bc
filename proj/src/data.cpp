// Copyright 2026 The pconf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pconf/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string_view>

namespace pconf {

namespace {

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace

std::size_t LabeledDataset::count(int label) const {
  std::size_t n = 0;
  for (int y : labels) n += (y == label) ? 1 : 0;
  return n;
}

Matrix LabeledDataset::positives() const {
  Matrix out(static_cast<Eigen::Index>(count(+1)), features.cols());
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == +1) out.row(row++) = features.row(static_cast<Eigen::Index>(i));
  }
  return out;
}

void LabeledDataset::validate() const {
  require(rows() == labels.size(), ErrorCode::InvalidData, "feature rows and labels differ in count");
  require(dim() >= 1, ErrorCode::InvalidData, "dataset needs at least one feature column");
  require(all_finite(features), ErrorCode::InvalidData, "non-finite feature value");
  for (int y : labels) {
    require(y == 1 || y == -1, ErrorCode::InvalidData, "labels must be +1 or -1");
  }
}

void PconfDataset::validate() const {
  require(rows() == static_cast<std::size_t>(confidence.size()), ErrorCode::InvalidData,
          "feature rows and confidence values differ in count");
  require(dim() >= 1, ErrorCode::InvalidData, "dataset needs at least one feature column");
  require(all_finite(features), ErrorCode::InvalidData, "non-finite feature value");
  for (Eigen::Index i = 0; i < confidence.size(); ++i) {
    const double r = confidence[i];
    if (!(r > 0.0 && r <= 1.0)) {
      fail(ErrorCode::InvalidData, "confidence at row " + std::to_string(i) + " outside (0, 1]");
    }
  }
}

GaussianSpec GaussianSpec::isotropic(Vector mu_pos, Vector mu_neg) {
  GaussianSpec spec;
  const auto d = mu_pos.size();
  spec.mu_pos = std::move(mu_pos);
  spec.mu_neg = std::move(mu_neg);
  spec.covariance = Matrix::Identity(d, d);
  return spec;
}

void GaussianSpec::validate() const {
  const auto d = mu_pos.size();
  require(d >= 1, ErrorCode::InvalidSpec, "Gaussian dimension must be at least 1");
  require(mu_neg.size() == d, ErrorCode::InvalidSpec, "mean vectors differ in dimension");
  require(covariance.rows() == d && covariance.cols() == d, ErrorCode::InvalidSpec,
          "covariance shape does not match the means");
  require(mu_pos.allFinite() && mu_neg.allFinite() && covariance.allFinite(), ErrorCode::InvalidSpec,
          "non-finite Gaussian parameter");
  require((covariance - covariance.transpose()).cwiseAbs().maxCoeff() <= 1e-12, ErrorCode::InvalidSpec,
          "covariance is not symmetric");
  require(prior_pos > 0.0 && prior_pos < 1.0, ErrorCode::InvalidSpec, "prior_pos must lie in (0, 1)");
}

void SplitSpec::validate() const {
  for (std::size_t n : {n_train_pos, n_train_neg, n_valid_pos, n_test_pos, n_test_neg, n_confest_pos,
                        n_confest_neg}) {
    require(n >= 1, ErrorCode::InvalidSpec, "every split count must be at least 1");
  }
}

double NormalSource::next() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  const double u1 = static_cast<double>((engine_() >> 11) + 1) * kScale;
  const double u2 = static_cast<double>(engine_() >> 11) * kScale;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

namespace {

Matrix cholesky_factor(const GaussianSpec& spec) {
  Eigen::LLT<Matrix> llt(spec.covariance);
  if (llt.info() != Eigen::Success) {
    fail(ErrorCode::InvalidSpec, "covariance is not positive definite");
  }
  return llt.matrixL();
}

void fill_gaussian_rows(Matrix& out, Eigen::Index first, std::size_t n, const Vector& mean,
                        const Matrix& chol, NormalSource& normals) {
  const auto d = mean.size();
  Vector z(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) z[j] = normals.next();
    out.row(first + static_cast<Eigen::Index>(i)) = (mean + chol * z).transpose();
  }
}

}  // namespace

LabeledDataset gen_gaussian_dataset(const GaussianSpec& spec, std::size_t n_pos, std::size_t n_neg,
                                    std::uint64_t seed) {
  spec.validate();
  const Matrix chol = cholesky_factor(spec);
  NormalSource normals(seed);
  LabeledDataset data;
  data.features.resize(static_cast<Eigen::Index>(n_pos + n_neg), spec.mu_pos.size());
  data.labels.assign(n_pos, +1);
  data.labels.insert(data.labels.end(), n_neg, -1);
  fill_gaussian_rows(data.features, 0, n_pos, spec.mu_pos, chol, normals);
  fill_gaussian_rows(data.features, static_cast<Eigen::Index>(n_pos), n_neg, spec.mu_neg, chol, normals);
  return data;
}

Splits make_splits(const GaussianSpec& spec, const SplitSpec& split) {
  split.validate();
  Splits out;
  out.train = gen_gaussian_dataset(spec, split.n_train_pos, split.n_train_neg, split.seed + 0);
  out.valid_pos = gen_gaussian_dataset(spec, split.n_valid_pos, 0, split.seed + 1).features;
  out.test = gen_gaussian_dataset(spec, split.n_test_pos, split.n_test_neg, split.seed + 2);
  out.conf_est = gen_gaussian_dataset(spec, split.n_confest_pos, split.n_confest_neg, split.seed + 3);
  return out;
}

double true_gaussian_posterior(const Vector& x, const GaussianSpec& spec) {
  spec.validate();
  require(x.size() == spec.mu_pos.size(), ErrorCode::Contract, "point dimension does not match the spec");
  Eigen::LDLT<Matrix> ldlt(spec.covariance);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().cwiseAbs().minCoeff() <= 0.0) {
    fail(ErrorCode::InvalidSpec, "covariance is singular");
  }
  const Vector inv_pos = ldlt.solve(spec.mu_pos);
  const Vector inv_neg = ldlt.solve(spec.mu_neg);
  const Vector w = inv_pos - inv_neg;
  const double c = 0.5 * (spec.mu_neg.dot(inv_neg) - spec.mu_pos.dot(inv_pos)) +
                   std::log(spec.prior_pos / (1.0 - spec.prior_pos));
  const double logit = w.dot(x) + c;
  return 1.0 / (1.0 + std::exp(-logit));
}

// ---------------------------------------------------------------------------
// CSV

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void parse_fail(const std::string& source, std::size_t row, const std::string& column,
                             const std::string& what) {
  fail(ErrorCode::Parse, source + ": row " + std::to_string(row) + ", column '" + column + "': " + what);
}

double parse_number(std::string_view cell, const std::string& source, std::size_t row,
                    const std::string& column) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    parse_fail(source, row, column, "not a number: '" + std::string(cell) + "'");
  }
  if (!std::isfinite(value)) parse_fail(source, row, column, "non-finite value");
  return value;
}

enum class ColumnRole { Feature, Label, Confidence };

struct Column {
  ColumnRole role;
  std::size_t feature_index = 0;
  std::string name;
};

std::vector<Column> parse_header(std::string_view line, const std::string& source, std::size_t& dim,
                                 bool& has_label, bool& has_conf) {
  std::vector<Column> columns;
  std::vector<bool> seen;
  dim = 0;
  has_label = has_conf = false;
  for (auto raw : split_fields(line)) {
    const std::string name(trim(raw));
    Column col{ColumnRole::Feature, 0, name};
    if (name == "label") {
      if (has_label) parse_fail(source, 1, name, "duplicate column");
      col.role = ColumnRole::Label;
      has_label = true;
    } else if (name == "confidence") {
      if (has_conf) parse_fail(source, 1, name, "duplicate column");
      col.role = ColumnRole::Confidence;
      has_conf = true;
    } else if (name.size() >= 2 && name[0] == 'f') {
      std::size_t idx = 0;
      const auto res = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
      if (res.ec != std::errc() || res.ptr != name.data() + name.size() ||
          (name.size() > 2 && name[1] == '0')) {
        parse_fail(source, 1, name, "unrecognised header column");
      }
      if (idx >= seen.size()) seen.resize(idx + 1, false);
      if (seen[idx]) parse_fail(source, 1, name, "duplicate column");
      seen[idx] = true;
      col.feature_index = idx;
      ++dim;
    } else {
      parse_fail(source, 1, name, "unrecognised header column");
    }
    columns.push_back(col);
  }
  if (dim == 0) parse_fail(source, 1, "f0", "header has no feature columns");
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) parse_fail(source, 1, "f" + std::to_string(i), "missing feature column");
  }
  return columns;
}

}  // namespace

CsvTable parse_csv_table(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<Column> columns;
  std::size_t dim = 0;
  bool has_label = false;
  bool has_conf = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) parse_fail(source, 1, "", "missing header row");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
      static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF) {
    line.erase(0, 3);
  }
  columns = parse_header(line, source, dim, has_label, has_conf);

  std::vector<double> feats;
  std::vector<int> labels;
  std::vector<double> conf;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != columns.size()) {
      parse_fail(source, line_no, "", "expected " + std::to_string(columns.size()) + " fields, found " +
                                          std::to_string(fields.size()));
    }
    feats.resize((n + 1) * dim);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const Column& col = columns[c];
      const double v = parse_number(fields[c], source, line_no, col.name);
      switch (col.role) {
        case ColumnRole::Feature:
          feats[n * dim + col.feature_index] = v;
          break;
        case ColumnRole::Label:
          if (v != 1.0 && v != -1.0) parse_fail(source, line_no, col.name, "label must be 1 or -1");
          labels.push_back(v > 0 ? 1 : -1);
          break;
        case ColumnRole::Confidence:
          if (!(v > 0.0 && v <= 1.0)) parse_fail(source, line_no, col.name, "confidence outside (0, 1]");
          conf.push_back(v);
          break;
      }
    }
    ++n;
  }

  CsvTable table;
  table.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      table.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = feats[i * dim + j];
    }
  }
  if (has_label) table.labels = std::move(labels);
  if (has_conf) table.confidence = Eigen::Map<const Vector>(conf.data(), static_cast<Eigen::Index>(conf.size()));
  return table;
}

CsvTable read_csv_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv_table(buf.str(), path);
}

AnyDataset load_csv(const std::string& path) {
  CsvTable table = read_csv_table(path);
  if (table.labels && table.confidence) {
    fail(ErrorCode::Parse, path + ": row 1: header has both 'label' and 'confidence' columns");
  }
  if (table.labels) {
    LabeledDataset data{std::move(table.features), std::move(*table.labels)};
    data.validate();
    return data;
  }
  if (table.confidence) {
    PconfDataset data{std::move(table.features), std::move(*table.confidence)};
    data.validate();
    return data;
  }
  fail(ErrorCode::Parse, path + ": row 1: header needs a 'label' or 'confidence' column");
}

void write_csv_table(const CsvTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  const auto n = table.features.rows();
  const auto d = table.features.cols();
  for (Eigen::Index j = 0; j < d; ++j) out << (j ? "," : "") << 'f' << j;
  if (table.labels) out << ",label";
  if (table.confidence) out << ",confidence";
  out << '\n';
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) out << (j ? "," : "") << format_double(table.features(i, j));
    if (table.labels) out << ',' << (*table.labels)[static_cast<std::size_t>(i)];
    if (table.confidence) out << ',' << format_double((*table.confidence)[i]);
    out << '\n';
  }
  if (!out) fail(ErrorCode::Io, "failed writing '" + path + "'");
}

void write_csv(const LabeledDataset& data, const std::string& path) {
  data.validate();
  write_csv_table(CsvTable{data.features, data.labels, std::nullopt}, path);
}

void write_csv(const PconfDataset& data, const std::string& path) {
  data.validate();
  write_csv_table(CsvTable{data.features, std::nullopt, data.confidence}, path);
}

}  // namespace pconf
