#pragma once
// CSV ingestion, seeded train/validation/test splits, train-only
// standardization and a synthetic binary-classification generator.

#include "gradstop/gradient_matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gradstop::data {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class MissingColumn : public DataError {
 public:
  using DataError::DataError;
};
class EmptyDataset : public DataError {
 public:
  using DataError::DataError;
};
class NonBinaryLabels : public DataError {
 public:
  using DataError::DataError;
};

// Per-column statistics; a zero std marks a constant column.
struct Standardization {
  Vector mean;
  Vector std;
};

struct Dataset {
  RowMatrix features;
  std::vector<int> labels;  // 0 or 1
  std::vector<std::string> feature_names;
  std::optional<Standardization> standardization;
  // Rows dropped during ingestion.
  std::size_t dropped_rows = 0;

  std::size_t n() const { return labels.size(); }
  std::size_t p() const { return static_cast<std::size_t>(features.cols()); }
};

// Header row required, comma separated, '.' decimals. Every column other than
// the label is a numeric feature. Rows with a wrong field count or an
// unparseable feature are dropped and counted. Rows whose label equals
// `positive_label` map to 1, the rest to 0; with an empty `positive_label`,
// labels "0"/"1" are taken as is and otherwise the larger of the two values
// (numerically when both parse, else lexically) is positive.
// Throws MissingColumn, EmptyDataset or NonBinaryLabels (more than two
// distinct label values).
Dataset parse_csv(std::istream& in, const std::string& label_column,
                  const std::string& positive_label = "");
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 const std::string& positive_label = "");

void write_csv(const std::filesystem::path& path, const Dataset& ds,
               const std::string& label_column = "label");

struct Fractions {
  double train = 0.8;
  double val = 0.0;
  double test = 0.2;
};

// Test 0.2 of all rows; validation 0.2 of the remainder when enabled.
Fractions default_fractions(bool with_validation);

struct Split {
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> val_idx;
  std::vector<std::size_t> test_idx;
  std::uint64_t seed = 0;
  Fractions fractions;
};

Standardization fit_standardization(const RowMatrix& features, std::span<const std::size_t> rows);
// (x - mean) / std per column; constant columns become 0.
RowMatrix apply_standardization(const RowMatrix& features, const Standardization& s);

struct SplitResult {
  Split split;
  Dataset standardized;
};

// Seeded shuffle, then test, validation and train blocks. Standardization is
// fitted on the training rows and applied to every row. Throws
// std::invalid_argument if fractions are negative, do not sum to 1, or leave
// fewer than 2 training rows.
SplitResult split_standardize(const Dataset& ds, const Fractions& f, std::uint64_t seed);

RowMatrix select_rows(const RowMatrix& m, std::span<const std::size_t> rows);
std::vector<int> select_labels(std::span<const int> labels, std::span<const std::size_t> rows);

// Binary classification data: `informative` standard normal features drive
// P(y = 1) = sigmoid(x_inf . w); each redundant feature is
// redundant_mix * (x_inf . a_k) + redundant_jitter * noise; the remaining
// `noise` features are independent standard normals.
struct SyntheticSpec {
  std::size_t n = 100;
  std::size_t informative = 5;
  std::size_t redundant = 8;
  std::size_t noise = 26;
  double redundant_mix = 0.5;
  double redundant_jitter = 0.3;
  double weight_scale = 1.0;
  std::uint64_t seed = 0;
};

Dataset make_synthetic(const SyntheticSpec& spec);

}  // namespace gradstop::data
