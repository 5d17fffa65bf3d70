#pragma once

#include <vector>

#include "bblr/types.hpp"

namespace bblr::detail {

inline Mat rows_of(const Mat& m, const std::vector<Index>& idx) {
  Mat out(static_cast<Index>(idx.size()), m.cols());
  for (std::size_t r = 0; r < idx.size(); ++r)
    out.row(static_cast<Index>(r)) = m.row(idx[r]);
  return out;
}

inline IntVec labels_of(const IntVec& y, const std::vector<Index>& idx) {
  IntVec out(static_cast<Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r)
    out[static_cast<Index>(r)] = y[idx[r]];
  return out;
}

}  // namespace bblr::detail
