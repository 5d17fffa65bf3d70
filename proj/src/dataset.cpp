#include "bblr/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bblr/rng.hpp"

namespace bblr {

namespace {

[[noreturn]] void fail_line(const std::string& what, long line) {
  throw std::invalid_argument(what + " at line " + std::to_string(line));
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

Scalar parse_number(const std::string& token, long line) {
  const std::string t = trim(token);
  if (t.empty()) fail_line("empty cell", line);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size())
    fail_line("non-numeric cell '" + t + "'", line);
  if (!std::isfinite(v)) fail_line("non-finite cell '" + t + "'", line);
  return v;
}

}  // namespace

void Dataset::validate() const {
  if (x.rows() != y.size())
    throw std::invalid_argument("feature rows and label count differ");
  for (Index i = 0; i < y.size(); ++i)
    if (y[i] != 0 && y[i] != 1)
      throw std::invalid_argument("labels must be 0 or 1");
  if (!x.allFinite())
    throw std::invalid_argument("features must be finite");
}

bool Dataset::operator==(const Dataset& other) const {
  return x.rows() == other.x.rows() && x.cols() == other.x.cols() &&
         x == other.x && y.size() == other.y.size() && y == other.y &&
         standardized == other.standardized;
}

Dataset subset(const Dataset& ds, const std::vector<Index>& idx) {
  Dataset out;
  out.x.resize(static_cast<Index>(idx.size()), ds.dims());
  out.y.resize(static_cast<Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (idx[r] < 0 || idx[r] >= ds.rows())
      throw std::out_of_range("subset index out of range");
    out.x.row(static_cast<Index>(r)) = ds.x.row(idx[r]);
    out.y[static_cast<Index>(r)] = ds.y[idx[r]];
  }
  out.standardized = ds.standardized;
  return out;
}

void CsvManifest::validate() const {
  if (missing_policy != "error")
    throw std::invalid_argument("unsupported missing_policy '" +
                                missing_policy + "'");
}

CsvManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path);
  nlohmann::json j;
  in >> j;
  CsvManifest m;
  if (j.contains("label_column")) m.label_column = j.at("label_column").get<Index>();
  if (j.contains("positive_label"))
    m.positive_label = j.at("positive_label").get<Scalar>();
  if (j.contains("missing_policy"))
    m.missing_policy = j.at("missing_policy").get<std::string>();
  if (j.contains("has_header")) m.has_header = j.at("has_header").get<bool>();
  m.validate();
  return m;
}

Dataset parse_csv(std::istream& in, const CsvManifest& manifest) {
  manifest.validate();
  std::vector<std::vector<Scalar>> rows;
  std::vector<Scalar> raw_labels;
  std::string line;
  long line_no = 0;
  Index width = -1;
  Index label_col = -1;
  bool skipped_header = !manifest.has_header;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");

    const Index ncell = static_cast<Index>(cells.size());
    if (width < 0) {
      width = ncell;
      if (width < 2) fail_line("need at least one feature and a label", line_no);
      label_col = manifest.label_column >= 0 ? manifest.label_column
                                             : width + manifest.label_column;
      if (label_col < 0 || label_col >= width)
        fail_line("label column out of range", line_no);
    } else if (ncell != width) {
      fail_line("expected " + std::to_string(width) + " columns, got " +
                    std::to_string(ncell),
                line_no);
    }

    std::vector<Scalar> feats;
    feats.reserve(static_cast<std::size_t>(width - 1));
    for (Index c = 0; c < width; ++c) {
      const Scalar v = parse_number(cells[static_cast<std::size_t>(c)], line_no);
      if (c == label_col)
        raw_labels.push_back(v);
      else
        feats.push_back(v);
    }
    rows.push_back(std::move(feats));
  }

  if (rows.empty()) throw std::invalid_argument("no data rows");

  std::set<Scalar> distinct(raw_labels.begin(), raw_labels.end());
  if (distinct.size() != 2)
    throw std::invalid_argument("expected exactly 2 distinct label values, got " +
                                std::to_string(distinct.size()));
  if (distinct.count(manifest.positive_label) == 0)
    throw std::invalid_argument("positive_label not present in label column");

  Dataset ds;
  ds.x.resize(static_cast<Index>(rows.size()), width - 1);
  ds.y.resize(static_cast<Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (Index c = 0; c < width - 1; ++c)
      ds.x(static_cast<Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
    ds.y[static_cast<Index>(r)] = raw_labels[r] == manifest.positive_label ? 1 : 0;
  }
  ds.validate();
  return ds;
}

Dataset parse_libsvm(std::istream& in) {
  std::vector<std::vector<std::pair<Index, Scalar>>> rows;
  std::vector<int> labels;
  std::string line;
  long line_no = 0;
  Index max_index = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::stringstream ss(line);
    std::string token;
    if (!(ss >> token)) continue;

    int label;
    if (token == "+1" || token == "1")
      label = 1;
    else if (token == "-1" || token == "0")
      label = 0;
    else
      fail_line("unrecognized label '" + token + "'", line_no);

    std::vector<std::pair<Index, Scalar>> feats;
    Index prev = 0;
    while (ss >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos)
        fail_line("expected index:value, got '" + token + "'", line_no);
      char* end = nullptr;
      const std::string idx_s = token.substr(0, colon);
      const long idx = std::strtol(idx_s.c_str(), &end, 10);
      if (end != idx_s.c_str() + idx_s.size() || idx < 1)
        fail_line("bad feature index '" + idx_s + "'", line_no);
      if (idx == prev)
        fail_line("duplicate feature index " + std::to_string(idx), line_no);
      if (idx < prev)
        fail_line("feature indices not ascending at index " + std::to_string(idx),
                  line_no);
      const Scalar v = parse_number(token.substr(colon + 1), line_no);
      feats.emplace_back(static_cast<Index>(idx), v);
      prev = idx;
    }
    max_index = std::max(max_index, prev);
    rows.push_back(std::move(feats));
    labels.push_back(label);
  }

  if (rows.empty()) throw std::invalid_argument("no data rows");

  Dataset ds;
  ds.x = Mat::Zero(static_cast<Index>(rows.size()), max_index);
  ds.y.resize(static_cast<Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& [idx, v] : rows[r]) ds.x(static_cast<Index>(r), idx - 1) = v;
    ds.y[static_cast<Index>(r)] = labels[r];
  }
  ds.validate();
  return ds;
}

void write_libsvm(const Dataset& ds, std::ostream& out) {
  char buf[64];
  for (Index r = 0; r < ds.rows(); ++r) {
    out << (ds.y[r] == 1 ? "+1" : "-1");
    for (Index c = 0; c < ds.dims(); ++c) {
      const Scalar v = ds.x(r, c);
      if (v == 0.0) continue;
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ' ' << (c + 1) << ':' << buf;
    }
    out << '\n';
  }
}

Dataset load_csv_file(const std::string& path, const CsvManifest& manifest) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_csv(in, manifest);
}

Dataset load_libsvm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_libsvm(in);
}

Dataset load_dataset(const std::string& path, const std::string& format,
                     const std::string& manifest_path) {
  if (format == "libsvm") return load_libsvm_file(path);
  if (format == "csv") {
    std::string mpath = manifest_path;
    if (mpath.empty()) {
      const auto dot = path.find_last_of('.');
      mpath = (dot == std::string::npos ? path : path.substr(0, dot)) +
              ".manifest.json";
    }
    return load_csv_file(path, load_manifest(mpath));
  }
  throw std::invalid_argument("unknown dataset format '" + format + "'");
}

void Scaler::apply(Dataset& ds) const {
  if (ds.standardized)
    throw std::logic_error("dataset is already standardized");
  if (ds.dims() != mean.size())
    throw std::invalid_argument("scaler dimension mismatch");
  ds.x.rowwise() -= mean.transpose();
  ds.x.array().rowwise() /= std.transpose().array();
  ds.standardized = true;
}

Scaler standardize(Dataset& train, const std::vector<Dataset*>& others) {
  if (train.standardized)
    throw std::logic_error("dataset is already standardized");
  Scaler s;
  s.mean = train.x.colwise().mean();
  Mat centered = train.x.rowwise() - s.mean.transpose();
  s.std = (centered.array().square().colwise().mean()).sqrt();
  s.std = s.std.cwiseMax(1e-12);
  s.apply(train);
  for (Dataset* d : others) s.apply(*d);
  return s;
}

std::vector<FoldSplit> make_splits(const IntVec& labels, const SplitPlan& plan) {
  const Index n = labels.size();
  if (plan.folds < 2) throw std::invalid_argument("need at least 2 folds");
  if (plan.repetitions < 1) throw std::invalid_argument("need at least 1 repetition");
  if (n < plan.folds) throw std::invalid_argument("fewer rows than folds");

  std::vector<std::vector<Index>> groups;
  if (plan.stratified) {
    std::vector<Index> pos, neg;
    for (Index i = 0; i < n; ++i) (labels[i] == 1 ? pos : neg).push_back(i);
    if (pos.empty() || neg.empty())
      throw std::invalid_argument("stratified split needs both classes");
    groups = {std::move(neg), std::move(pos)};
  } else {
    std::vector<Index> all(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    groups = {std::move(all)};
  }

  std::mt19937_64 gen(plan.seed);
  std::vector<FoldSplit> out;
  out.reserve(static_cast<std::size_t>(plan.repetitions * plan.folds));

  for (int rep = 0; rep < plan.repetitions; ++rep) {
    std::vector<std::vector<Index>> fold_members(
        static_cast<std::size_t>(plan.folds));
    for (auto grp : groups) {
      shuffle_vec(grp, gen);
      // Chunk sizes differ by at most one; earlier folds take the remainder.
      const std::size_t m = grp.size();
      const std::size_t base = m / static_cast<std::size_t>(plan.folds);
      const std::size_t extra = m % static_cast<std::size_t>(plan.folds);
      std::size_t at = 0;
      for (int f = 0; f < plan.folds; ++f) {
        const std::size_t take =
            base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
        auto& dst = fold_members[static_cast<std::size_t>(f)];
        dst.insert(dst.end(), grp.begin() + static_cast<std::ptrdiff_t>(at),
                   grp.begin() + static_cast<std::ptrdiff_t>(at + take));
        at += take;
      }
    }
    for (int f = 0; f < plan.folds; ++f) {
      FoldSplit fs;
      fs.repetition = rep;
      fs.fold = f;
      fs.test_idx = fold_members[static_cast<std::size_t>(f)];
      std::sort(fs.test_idx.begin(), fs.test_idx.end());
      std::vector<char> in_test(static_cast<std::size_t>(n), 0);
      for (Index i : fs.test_idx) in_test[static_cast<std::size_t>(i)] = 1;
      for (Index i = 0; i < n; ++i)
        if (!in_test[static_cast<std::size_t>(i)]) fs.train_idx.push_back(i);
      out.push_back(std::move(fs));
    }
  }
  return out;
}

std::vector<FoldSplit> make_splits(const Dataset& ds, const SplitPlan& plan) {
  return make_splits(ds.y, plan);
}

Dataset inject_label_noise(const Dataset& ds, Scalar rate, std::uint64_t seed) {
  if (rate < 0 || rate > 1) throw std::invalid_argument("noise rate outside [0,1]");
  Dataset out = ds;
  const Index n = ds.rows();
  const auto m = static_cast<Index>(std::floor(rate * static_cast<Scalar>(n)));
  if (m == 0) return out;

  std::vector<Index> idx(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  std::mt19937_64 gen(seed);
  // Partial Fisher-Yates: first m entries are a uniform sample without
  // replacement.
  for (Index i = 0; i < m; ++i) {
    const auto j =
        i + static_cast<Index>(bounded_rand(gen, static_cast<std::uint64_t>(n - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  for (Index i = 0; i < m; ++i)
    out.y[idx[static_cast<std::size_t>(i)]] ^= 1;
  return out;
}

}  // namespace bblr
