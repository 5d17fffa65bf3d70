#include "bblr/serialize.hpp"

#include <fstream>
#include <stdexcept>

namespace bblr {

namespace {

// at() on a json object throws a generic key error; this names the
// enclosing record so a truncated file points at itself.
const Json& field(const Json& j, const char* key, const char* record) {
  const auto it = j.find(key);
  if (it == j.end())
    throw std::invalid_argument(std::string(record) + ": missing field '" +
                                key + "'");
  return *it;
}

}  // namespace

Json to_json(const Vec& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vec vec_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected a numeric array");
  Vec v(static_cast<Index>(j.size()));
  Index i = 0;
  for (const auto& x : j) v[i++] = x.get<Scalar>();
  return v;
}

Json to_json(const BBHyper& h) {
  // The mixture view is redundant with the counts but kept in the file
  // so a fit record is readable without doing arithmetic.
  return Json{{"alpha", h.alpha}, {"beta", h.beta},       {"n", h.n},
              {"w", h.mix_w},     {"theta_B", h.theta_b}, {"gamma", h.gamma}};
}

BBHyper hyper_from_json(const Json& j) {
  BBHyper h = BBHyper::from_counts(field(j, "alpha", "hyper").get<Scalar>(),
                                   field(j, "beta", "hyper").get<Scalar>(),
                                   field(j, "n", "hyper").get<Scalar>(),
                                   field(j, "gamma", "hyper").get<Scalar>());
  h.validate();
  return h;
}

Json to_json(const SlaConfig& c) {
  return Json{{"r0", c.r0},
              {"eps_s0", c.eps_s0},
              {"gamma_min", c.gamma_min},
              {"gamma_max", c.gamma_max},
              {"r_gamma", c.r_gamma},
              {"r_r", c.r_r},
              {"r_eps", c.r_eps},
              {"rg_max", c.rg_max},
              {"rg_min", c.rg_min},
              {"r_g", c.r_g},
              {"eps_l", c.eps_l},
              {"eps_g", c.eps_g}};
}

SlaConfig sla_config_from_json(const Json& j) {
  SlaConfig c;
  c.r0 = field(j, "r0", "sla_config").get<Scalar>();
  c.eps_s0 = field(j, "eps_s0", "sla_config").get<Scalar>();
  c.gamma_min = field(j, "gamma_min", "sla_config").get<Scalar>();
  c.gamma_max = field(j, "gamma_max", "sla_config").get<Scalar>();
  c.r_gamma = field(j, "r_gamma", "sla_config").get<Scalar>();
  c.r_r = field(j, "r_r", "sla_config").get<Scalar>();
  c.r_eps = field(j, "r_eps", "sla_config").get<Scalar>();
  c.rg_max = field(j, "rg_max", "sla_config").get<Scalar>();
  c.rg_min = field(j, "rg_min", "sla_config").get<Scalar>();
  c.r_g = field(j, "r_g", "sla_config").get<Scalar>();
  c.eps_l = field(j, "eps_l", "sla_config").get<Scalar>();
  c.eps_g = field(j, "eps_g", "sla_config").get<Scalar>();
  c.validate();
  return c;
}

Json to_json(const MixturePrior& p) {
  Json assign = Json::array();
  for (const Cluster c : p.assign)
    assign.push_back(c == Cluster::Laplace ? 1 : 0);
  return Json{{"pi_g", p.pi_g},
              {"pi_l", p.pi_l},
              {"sigma_g", p.sigma_g},
              {"b_l", p.b_l},
              {"assign", std::move(assign)}};
}

MixturePrior mixture_from_json(const Json& j) {
  MixturePrior p;
  p.pi_g = field(j, "pi_g", "mixture").get<Scalar>();
  p.pi_l = field(j, "pi_l", "mixture").get<Scalar>();
  p.sigma_g = field(j, "sigma_g", "mixture").get<Scalar>();
  p.b_l = field(j, "b_l", "mixture").get<Scalar>();
  for (const auto& x : field(j, "assign", "mixture")) {
    const int v = x.get<int>();
    if (v != 0 && v != 1)
      throw std::invalid_argument("mixture: assign entries must be 0 or 1");
    p.assign.push_back(v == 1 ? Cluster::Laplace : Cluster::Gauss);
  }
  p.validate();
  return p;
}

Json to_json(const FitReport& r) {
  Json stages = Json::array();
  for (const auto& s : r.stages)
    stages.push_back(Json{{"gamma", s.gamma},
                          {"objective", s.objective},
                          {"train01", s.train01}});
  return Json{{"coefficients", to_json(r.coefficients)},
              {"stages", std::move(stages)},
              {"probe_accepts", r.probe_accepts},
              {"wall_ms", r.wall_ms},
              {"seed", r.seed}};
}

FitReport fit_report_from_json(const Json& j) {
  FitReport r;
  r.coefficients = vec_from_json(field(j, "coefficients", "fit_report"));
  for (const auto& s : field(j, "stages", "fit_report"))
    r.stages.push_back({field(s, "gamma", "stage").get<Scalar>(),
                        field(s, "objective", "stage").get<Scalar>(),
                        field(s, "train01", "stage").get<int>()});
  r.probe_accepts = field(j, "probe_accepts", "fit_report").get<long>();
  r.wall_ms = field(j, "wall_ms", "fit_report").get<double>();
  r.seed = field(j, "seed", "fit_report").get<std::uint64_t>();
  return r;
}

Json to_json(const LinearFit& f) {
  return Json{{"weights", to_json(f.model.weights)},
              {"hyper", to_json(f.hyper)}};
}

LinearFit linear_fit_from_json(const Json& j) {
  LinearFit f;
  f.model.weights = vec_from_json(field(j, "weights", "linear_fit"));
  if (f.model.weights.size() < 2)
    throw std::invalid_argument(
        "linear_fit: weights needs a feature part and an intercept");
  f.hyper = hyper_from_json(field(j, "hyper", "linear_fit"));
  return f;
}

Json to_json(const KernelFitRef& f) {
  Json inputs{{"path", f.inputs.path},
              {"format", f.inputs.format},
              {"rows", f.inputs.rows}};
  Json scaler = nullptr;
  if (f.has_scaler)
    scaler = Json{{"mean", to_json(f.scaler.mean)},
                  {"std", to_json(f.scaler.std)}};
  return Json{{"alphas", to_json(f.alphas)},
              {"kernel", Json{{"kind", "rbf"}, {"sigma", f.spec.sigma}}},
              {"train_inputs_ref", std::move(inputs)},
              {"scaler", std::move(scaler)}};
}

KernelFitRef kernel_fit_from_json(const Json& j) {
  KernelFitRef f;
  f.alphas = vec_from_json(field(j, "alphas", "kernel_fit"));
  const Json& k = field(j, "kernel", "kernel_fit");
  if (field(k, "kind", "kernel").get<std::string>() != "rbf")
    throw std::invalid_argument("kernel: only kind 'rbf' is known");
  f.spec.kind = KernelKind::Rbf;
  f.spec.sigma = field(k, "sigma", "kernel").get<Scalar>();
  f.spec.validate();

  const Json& in = field(j, "train_inputs_ref", "kernel_fit");
  f.inputs.path = field(in, "path", "train_inputs_ref").get<std::string>();
  f.inputs.format = field(in, "format", "train_inputs_ref").get<std::string>();
  for (const auto& r : field(in, "rows", "train_inputs_ref"))
    f.inputs.rows.push_back(r.get<Index>());

  const Json& sc = field(j, "scaler", "kernel_fit");
  if (!sc.is_null()) {
    f.has_scaler = true;
    f.scaler.mean = vec_from_json(field(sc, "mean", "scaler"));
    f.scaler.std = vec_from_json(field(sc, "std", "scaler"));
    if (f.scaler.mean.size() != f.scaler.std.size())
      throw std::invalid_argument("scaler: mean/std length mismatch");
  }
  return f;
}

KernelModel materialize(const KernelFitRef& ref) {
  Dataset ds = load_dataset(ref.inputs.path, ref.inputs.format);
  if (!ref.inputs.rows.empty()) ds = subset(ds, ref.inputs.rows);
  if (ref.has_scaler) ref.scaler.apply(ds);
  if (ref.alphas.size() != ds.rows() + 1)
    throw std::invalid_argument(
        "kernel_fit: coefficient count does not match the referenced rows");
  return {ref.alphas, ds.x, ref.spec};
}

void save_json(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return Json::parse(in);
}

}  // namespace bblr
