#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bblr/types.hpp"

namespace bblr {

// Feature matrix plus binary labels in {0, 1}. Row i of x pairs with y[i].
struct Dataset {
  Mat x;
  IntVec y;
  bool standardized = false;

  Index rows() const { return x.rows(); }
  Index dims() const { return x.cols(); }

  // {0,1} -> {-1,+1}
  int target(Index i) const { return 2 * y[i] - 1; }

  // Throws std::invalid_argument on shape mismatch, non-binary labels,
  // or non-finite feature values.
  void validate() const;

  bool operator==(const Dataset& other) const;
};

Dataset subset(const Dataset& ds, const std::vector<Index>& idx);

// How to read a CSV file. label_column may be negative to count from the
// last column (-1 = last). Only missing_policy "error" is supported.
struct CsvManifest {
  Index label_column = -1;
  Scalar positive_label = 1.0;
  std::string missing_policy = "error";
  bool has_header = false;

  void validate() const;
};

CsvManifest load_manifest(const std::string& path);

// CSV with numeric cells and a binary label column. Exactly two distinct
// label values are required; the one equal to the manifest's
// positive_label maps to 1. Errors carry 1-based line numbers.
Dataset parse_csv(std::istream& in, const CsvManifest& manifest);

// Sparse "label idx:val ..." rows, indices 1-based and strictly
// ascending per row. Labels +1/1 map to 1, -1/0 map to 0. Duplicate or
// descending indices raise with the offending line number.
Dataset parse_libsvm(std::istream& in);

// Writes labels as +1/-1 and nonzero features only, with enough digits
// that parse_libsvm(write_libsvm(ds)) == ds bit for bit.
void write_libsvm(const Dataset& ds, std::ostream& out);

Dataset load_csv_file(const std::string& path, const CsvManifest& manifest);
Dataset load_libsvm_file(const std::string& path);

// format "csv" or "libsvm". For csv, manifest_path defaults to the data
// file's path with its extension replaced by ".manifest.json".
Dataset load_dataset(const std::string& path, const std::string& format,
                     const std::string& manifest_path = "");

// Per-column affine transform fit on a training split.
struct Scaler {
  Vec mean;
  Vec std;  // floored at 1e-12

  // Throws if ds was already standardized.
  void apply(Dataset& ds) const;
};

// Fits on train, applies to train and to every dataset in others.
Scaler standardize(Dataset& train, const std::vector<Dataset*>& others = {});

struct SplitPlan {
  std::uint64_t seed = 1;
  int folds = 5;
  int repetitions = 10;
  bool stratified = true;
};

struct FoldSplit {
  int repetition = 0;
  int fold = 0;
  std::vector<Index> train_idx;
  std::vector<Index> test_idx;
};

// Deterministic k-fold assignments; stratified plans keep per-fold class
// counts within one of each other. Results are ordered by (rep, fold)
// with sorted index lists.
std::vector<FoldSplit> make_splits(const IntVec& labels, const SplitPlan& plan);
std::vector<FoldSplit> make_splits(const Dataset& ds, const SplitPlan& plan);

// Flips floor(rate * rows) labels chosen without replacement.
Dataset inject_label_noise(const Dataset& ds, Scalar rate, std::uint64_t seed);

}  // namespace bblr
