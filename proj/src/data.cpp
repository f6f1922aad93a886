#include "gradstop/data.hpp"

#include "gradstop/models.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string_view>

namespace gradstop::data {
namespace {

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string choose_positive(const std::set<std::string>& values) {
  if (values.size() == 2 && values.count("0") && values.count("1")) return "1";
  const auto lo = *values.begin();
  const auto hi = *values.rbegin();
  const auto a = parse_double(lo);
  const auto b = parse_double(hi);
  if (a && b) return *a > *b ? lo : hi;
  return hi;
}

}  // namespace

Dataset parse_csv(std::istream& in, const std::string& label_column,
                  const std::string& positive_label) {
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) throw EmptyDataset("CSV has no header row");
  const auto header = split_fields(line);
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) throw MissingColumn("label column not found: " + label_column);
  const auto label_pos = static_cast<std::size_t>(label_it - header.begin());

  Dataset ds;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j != label_pos) ds.feature_names.emplace_back(header[j]);
  }
  const std::size_t p = ds.feature_names.size();

  std::vector<double> values;
  std::vector<std::string> raw_labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    bool ok = fields.size() == header.size() && !fields[label_pos].empty();
    std::vector<double> row;
    row.reserve(p);
    for (std::size_t j = 0; ok && j < fields.size(); ++j) {
      if (j == label_pos) continue;
      const auto v = parse_double(fields[j]);
      if (!v) ok = false;
      else row.push_back(*v);
    }
    if (!ok) {
      ++ds.dropped_rows;
      spdlog::debug("dropping malformed CSV line {}", line_no);
      continue;
    }
    values.insert(values.end(), row.begin(), row.end());
    raw_labels.emplace_back(fields[label_pos]);
  }
  if (ds.dropped_rows > 0) spdlog::warn("dropped {} malformed CSV row(s)", ds.dropped_rows);
  if (raw_labels.empty()) throw EmptyDataset("CSV has no usable rows");

  const std::set<std::string> distinct(raw_labels.begin(), raw_labels.end());
  if (distinct.size() > 2) {
    throw NonBinaryLabels("label column has " + std::to_string(distinct.size()) + " distinct values");
  }
  const std::string positive = positive_label.empty() ? choose_positive(distinct) : positive_label;
  ds.labels.reserve(raw_labels.size());
  for (const auto& l : raw_labels) ds.labels.push_back(l == positive ? 1 : 0);

  ds.features = Eigen::Map<RowMatrix>(values.data(), static_cast<Eigen::Index>(raw_labels.size()),
                                      static_cast<Eigen::Index>(p));
  return ds;
}

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 const std::string& positive_label) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_csv(in, label_column, positive_label);
}

void write_csv(const std::filesystem::path& path, const Dataset& ds,
               const std::string& label_column) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& name : ds.feature_names) out << name << ',';
  out << label_column << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < ds.n(); ++i) {
    for (std::size_t j = 0; j < ds.p(); ++j) {
      out << ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) << ',';
    }
    out << ds.labels[i] << '\n';
  }
}

Fractions default_fractions(bool with_validation) {
  if (!with_validation) return {0.8, 0.0, 0.2};
  return {0.8 * 0.8, 0.8 * 0.2, 0.2};
}

Standardization fit_standardization(const RowMatrix& features, std::span<const std::size_t> rows) {
  if (rows.empty()) throw std::invalid_argument("standardization needs at least one row");
  const RowMatrix sub = select_rows(features, rows);
  Standardization s;
  s.mean = sub.colwise().mean().transpose();
  const RowMatrix c = sub.rowwise() - s.mean.transpose();
  s.std = (c.colwise().squaredNorm() / static_cast<double>(sub.rows())).cwiseSqrt().transpose();
  // Columns whose spread is at rounding level count as constant.
  for (Eigen::Index j = 0; j < s.std.size(); ++j) {
    if (s.std(j) <= 1e-12 * std::max(1.0, std::abs(s.mean(j)))) s.std(j) = 0.0;
  }
  return s;
}

RowMatrix apply_standardization(const RowMatrix& features, const Standardization& s) {
  if (features.cols() != s.mean.size()) throw std::invalid_argument("standardization width mismatch");
  RowMatrix out(features.rows(), features.cols());
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    if (s.std(j) == 0.0) {
      out.col(j).setZero();
    } else {
      out.col(j) = (features.col(j).array() - s.mean(j)) / s.std(j);
    }
  }
  return out;
}

RowMatrix select_rows(const RowMatrix& m, std::span<const std::size_t> rows) {
  RowMatrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= static_cast<std::size_t>(m.rows())) throw std::out_of_range("row index out of range");
    out.row(static_cast<Eigen::Index>(k)) = m.row(static_cast<Eigen::Index>(rows[k]));
  }
  return out;
}

std::vector<int> select_labels(std::span<const int> labels, std::span<const std::size_t> rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(labels[r]);
  return out;
}

SplitResult split_standardize(const Dataset& ds, const Fractions& f, std::uint64_t seed) {
  if (f.train < 0.0 || f.val < 0.0 || f.test < 0.0 ||
      std::abs(f.train + f.val + f.test - 1.0) > 1e-9) {
    throw std::invalid_argument("split fractions must be non-negative and sum to 1");
  }
  const std::size_t n = ds.n();
  const auto n_test = static_cast<std::size_t>(std::llround(f.test * static_cast<double>(n)));
  const auto n_val = static_cast<std::size_t>(std::llround(f.val * static_cast<double>(n)));
  if (n_test + n_val + 2 > n) throw std::invalid_argument("split leaves fewer than 2 training rows");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);

  SplitResult res;
  res.split.seed = seed;
  res.split.fractions = f;
  const auto b = idx.begin();
  const auto t = static_cast<std::ptrdiff_t>(n_test);
  const auto v = static_cast<std::ptrdiff_t>(n_val);
  res.split.test_idx.assign(b, b + t);
  res.split.val_idx.assign(b + t, b + t + v);
  res.split.train_idx.assign(b + t + v, idx.end());

  const Standardization s = fit_standardization(ds.features, res.split.train_idx);
  res.standardized = ds;
  res.standardized.features = apply_standardization(ds.features, s);
  res.standardized.standardization = s;
  return res;
}

Dataset make_synthetic(const SyntheticSpec& spec) {
  if (spec.n < 1 || spec.informative < 1) {
    throw std::invalid_argument("synthetic data needs rows and informative features");
  }
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto draw = [&](Eigen::Index r, Eigen::Index c) {
    RowMatrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = normal(rng);
    return m;
  };
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto k = static_cast<Eigen::Index>(spec.informative);
  const auto r = static_cast<Eigen::Index>(spec.redundant);
  const auto z = static_cast<Eigen::Index>(spec.noise);

  const RowMatrix x_inf = draw(n, k);
  const Vector w = spec.weight_scale * draw(k, 1).col(0);
  const RowMatrix mix = draw(k, r);
  const RowMatrix x_red = spec.redundant_mix * (x_inf * mix) + spec.redundant_jitter * draw(n, r);
  const RowMatrix x_noise = draw(n, z);

  Dataset ds;
  ds.features.resize(n, k + r + z);
  ds.features << x_inf, x_red, x_noise;
  const Vector logits = x_inf * w;
  ds.labels.reserve(spec.n);
  for (Eigen::Index i = 0; i < n; ++i) ds.labels.push_back(unif(rng) < models::sigmoid(logits(i)) ? 1 : 0);
  for (Eigen::Index j = 0; j < k; ++j) ds.feature_names.push_back("inf" + std::to_string(j));
  for (Eigen::Index j = 0; j < r; ++j) ds.feature_names.push_back("red" + std::to_string(j));
  for (Eigen::Index j = 0; j < z; ++j) ds.feature_names.push_back("noise" + std::to_string(j));
  return ds;
}

}  // namespace gradstop::data
