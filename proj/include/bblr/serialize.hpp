#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bblr/dataset.hpp"
#include "bblr/hyper.hpp"
#include "bblr/kernel.hpp"
#include "bblr/model.hpp"
#include "bblr/optimizer.hpp"
#include "bblr/prior.hpp"

namespace bblr {

using Json = nlohmann::json;

// JSON codecs for everything a fit produces. Writers emit every field;
// readers run the struct's validate() so a corrupt file fails loudly.

Json to_json(const Vec& v);
Vec vec_from_json(const Json& j);

Json to_json(const BBHyper& h);
BBHyper hyper_from_json(const Json& j);

Json to_json(const SlaConfig& c);
SlaConfig sla_config_from_json(const Json& j);

Json to_json(const MixturePrior& p);
MixturePrior mixture_from_json(const Json& j);

Json to_json(const FitReport& r);
FitReport fit_report_from_json(const Json& j);

// A linear fit is the coefficient vector plus the plateau settings it
// was trained under.
struct LinearFit {
  LinearModel model;
  BBHyper hyper;
};

Json to_json(const LinearFit& f);
LinearFit linear_fit_from_json(const Json& j);

// Kernel fits reference the training rows instead of embedding them:
// the file they came from, the row subset used, and the scaler that was
// applied. materialize() re-reads the file and rebuilds the expansion.
struct TrainInputsRef {
  std::string path;
  std::string format;       // "csv" or "libsvm"
  std::vector<Index> rows;  // empty keeps every row
};

struct KernelFitRef {
  Vec alphas;
  KernelSpec spec;
  TrainInputsRef inputs;
  bool has_scaler = false;
  Scaler scaler;
};

Json to_json(const KernelFitRef& f);
KernelFitRef kernel_fit_from_json(const Json& j);

KernelModel materialize(const KernelFitRef& ref);

void save_json(const Json& j, const std::string& path);
Json load_json(const std::string& path);

}  // namespace bblr
