#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bblr/cv.hpp"
#include "bblr/dataset.hpp"

namespace bblr {

struct TableOptions {
  std::uint64_t seed = 1;
  int jobs = 1;
  bool full = false;  // also run the columns that carry no gate
};

struct TableRow {
  std::string dataset;
  std::string metric;
  Scalar ours = 0;
  Scalar reference = 0;  // NaN when nothing was published for the cell
  Scalar band = 0;       // NaN when the row is informational
  bool pass = true;
};

struct TableCheck {
  std::string text;
  bool pass = true;
};

struct TableReport {
  std::string id;
  std::vector<TableRow> rows;
  std::vector<TableCheck> checks;

  bool all_pass() const;
};

// Valid ids: training-01, clean-cv, noisy-cv, kernel-compare,
// sparse-kernel.
std::vector<std::string> table_ids();

// Recomputes one results table on the benchmark CSVs under data_dir and
// lays our numbers beside the reference ones, with the acceptance
// bands and orderings evaluated as checks.
TableReport reproduce_table(const std::string& id, const std::string& data_dir,
                            const TableOptions& opt);

std::string format_table(const TableReport& report);

struct SweepPoint {
  Index rows = 0;
  Index support = 0;
};

// Sparse kernel fits over nested stratified subsamples of the given
// sizes; reports the retained expansion size per subsample.
std::vector<SweepPoint> sparsity_sweep(const Dataset& raw,
                                       const std::vector<Index>& sizes,
                                       const CvOptions& opt,
                                       std::uint64_t seed);

}  // namespace bblr
