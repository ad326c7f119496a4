#include "ncs/config.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ncs {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(where + ": expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) fail(where + ": unknown key '" + key + "'");
}

double get_number(const json& obj, const std::string& where,
                  const std::string& key) {
  if (!obj.contains(key)) fail(where + ": missing key '" + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(where + "." + key + ": expected a number");
  return v.get<double>();
}

Matrix get_matrix(const json& obj, const std::string& where,
                  const std::string& key) {
  if (!obj.contains(key)) fail(where + ": missing key '" + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_array() || v.empty()) fail(where + "." + key + ": expected rows");
  // A flat array of numbers is a column vector.
  if (v.front().is_number()) {
    Matrix out(static_cast<Eigen::Index>(v.size()), 1);
    for (size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(where + "." + key + ": ragged entries");
      out(static_cast<Eigen::Index>(i), 0) = v[i].get<double>();
    }
    return out;
  }
  const size_t cols = v.front().size();
  Matrix out(static_cast<Eigen::Index>(v.size()),
             static_cast<Eigen::Index>(cols));
  for (size_t i = 0; i < v.size(); ++i) {
    const auto& row = v[i];
    if (!row.is_array() || row.size() != cols)
      fail(where + "." + key + ": ragged rows");
    for (size_t j = 0; j < cols; ++j) {
      if (!row[j].is_number()) fail(where + "." + key + ": non-numeric entry");
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          row[j].get<double>();
    }
  }
  return out;
}

RenewalDistribution parse_intervals(const json& obj) {
  if (!obj.is_object() || !obj.contains("kind"))
    fail("intervals: missing key 'kind'");
  const std::string kind = obj.at("kind").get<std::string>();
  if (kind == "exponential") {
    reject_unknown(obj, "intervals", {"kind", "rate"});
    return RenewalDistribution::exponential(
        get_number(obj, "intervals", "rate"));
  }
  if (kind == "gamma") {
    if (obj.contains("mean") || obj.contains("cv2")) {
      reject_unknown(obj, "intervals", {"kind", "mean", "cv2"});
      return RenewalDistribution::gamma_mean_cv2(
          get_number(obj, "intervals", "mean"),
          get_number(obj, "intervals", "cv2"));
    }
    reject_unknown(obj, "intervals", {"kind", "shape", "scale"});
    return RenewalDistribution::gamma(get_number(obj, "intervals", "shape"),
                                      get_number(obj, "intervals", "scale"));
  }
  if (kind == "lognormal") {
    if (obj.contains("mean") || obj.contains("cv2")) {
      reject_unknown(obj, "intervals", {"kind", "mean", "cv2"});
      return RenewalDistribution::lognormal_mean_cv2(
          get_number(obj, "intervals", "mean"),
          get_number(obj, "intervals", "cv2"));
    }
    reject_unknown(obj, "intervals", {"kind", "location", "scale"});
    return RenewalDistribution::lognormal(
        get_number(obj, "intervals", "location"),
        get_number(obj, "intervals", "scale"));
  }
  if (kind == "deterministic") {
    reject_unknown(obj, "intervals", {"kind", "period"});
    return RenewalDistribution::deterministic(
        get_number(obj, "intervals", "period"));
  }
  if (kind == "uniform") {
    reject_unknown(obj, "intervals", {"kind", "lo", "hi"});
    return RenewalDistribution::uniform(get_number(obj, "intervals", "lo"),
                                        get_number(obj, "intervals", "hi"));
  }
  fail("intervals: unknown kind '" + kind + "'");
}

json parse_text(const std::string& text) {
  json root = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded()) fail("invalid JSON");
  return root;
}

NCSModel model_from_json(const json& root) {
  // Command blocks (simulation/design/sweep) ride alongside the model.
  reject_unknown(root, "config",
                 {"schema_version", "plant", "reset", "intervals", "simulation",
                  "design", "sweep"});
  if (!root.contains("schema_version") ||
      root.at("schema_version") != json(1))
    fail("config: schema_version must be 1");

  if (!root.contains("plant")) fail("config: missing key 'plant'");
  const json& jp = root.at("plant");
  reject_unknown(jp, "plant", {"a_hat", "A", "B", "C", "D"});
  NCSModel model;
  model.plant.a_hat = get_matrix(jp, "plant", "a_hat").col(0);
  model.plant.A = get_matrix(jp, "plant", "A");
  model.plant.B = get_matrix(jp, "plant", "B");
  model.plant.C = get_matrix(jp, "plant", "C");
  model.plant.D = get_matrix(jp, "plant", "D");

  if (!root.contains("reset")) fail("config: missing key 'reset'");
  const json& jr = root.at("reset");
  reject_unknown(jr, "reset", {"K", "sigma_diag", "Sigma"});
  model.reset.K = get_matrix(jr, "reset", "K");
  const auto m = model.reset.K.rows();
  if (jr.contains("Sigma")) {
    model.reset.Sigma = get_matrix(jr, "reset", "Sigma");
  } else if (jr.contains("sigma_diag")) {
    const Vector d = get_matrix(jr, "reset", "sigma_diag").col(0);
    model.reset.Sigma = Matrix(d.cwiseProduct(d).asDiagonal());
  } else {
    model.reset.Sigma = Matrix::Zero(m, m);
  }

  if (!root.contains("intervals")) fail("config: missing key 'intervals'");
  model.intervals = parse_intervals(root.at("intervals"));

  const auto problems = validate(model);
  if (!problems.empty()) fail("config: " + problems.front());
  return model;
}

SimConfig sim_from_json(const json& obj) {
  reject_unknown(obj, "simulation",
                 {"dt", "horizon", "burn_in", "trajectories", "seed",
                  "record_stride", "threads"});
  SimConfig cfg;
  if (obj.contains("dt")) cfg.dt = get_number(obj, "simulation", "dt");
  if (obj.contains("horizon"))
    cfg.horizon = get_number(obj, "simulation", "horizon");
  if (obj.contains("burn_in"))
    cfg.burn_in = get_number(obj, "simulation", "burn_in");
  if (obj.contains("trajectories"))
    cfg.trajectories =
        static_cast<int>(get_number(obj, "simulation", "trajectories"));
  if (obj.contains("seed"))
    cfg.seed = obj.at("seed").get<std::uint64_t>();
  if (obj.contains("record_stride"))
    cfg.record_stride =
        static_cast<int>(get_number(obj, "simulation", "record_stride"));
  if (obj.contains("threads"))
    cfg.threads = static_cast<int>(get_number(obj, "simulation", "threads"));
  return cfg;
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

json stability_json(const StabilityReport& s) {
  return json{{"expectation_exists", s.expectation_exists},
              {"first_moment_stable", s.first_moment_stable},
              {"second_moment_stable", s.second_moment_stable},
              {"first_spectral_radius", s.first_spectral_radius},
              {"second_spectral_radius", s.second_spectral_radius}};
}

}  // namespace

NCSModel parse_model(const std::string& json_text) {
  return model_from_json(parse_text(json_text));
}

SimConfig parse_sim_config(const std::string& json_text,
                           const NCSModel& model) {
  const json root = parse_text(json_text);
  SimConfig cfg;
  if (root.contains("simulation")) cfg = sim_from_json(root.at("simulation"));
  return cfg.resolved(model);
}

DesignProblem parse_design_problem(const std::string& json_text) {
  const json root = parse_text(json_text);
  if (!root.contains("design")) fail("config: missing key 'design'");
  DesignProblem pb;
  pb.model_template = model_from_json([&] {
    json m = root;
    m.erase("design");
    m.erase("simulation");
    return m;
  }());
  const json& jd = root.at("design");
  reject_unknown(jd, "design",
                 {"free_mask", "target_mean", "objective", "component",
                  "mean_tolerance"});
  const auto n = pb.model_template.plant.n();
  const auto m = pb.model_template.plant.m();
  if (jd.contains("free_mask")) {
    const Matrix fm = get_matrix(jd, "design", "free_mask");
    if (fm.rows() != m || fm.cols() != n)
      fail("design.free_mask: must be m x n");
    pb.free_mask = fm.array() != 0.0;
  } else {
    pb.free_mask.setConstant(m, n, true);
  }
  pb.target_mean = Vector::Constant(n, std::nan(""));
  if (jd.contains("target_mean")) {
    const auto& tm = jd.at("target_mean");
    if (!tm.is_array() || static_cast<Eigen::Index>(tm.size()) != n)
      fail("design.target_mean: must have length n");
    for (Eigen::Index i = 0; i < n; ++i)
      if (!tm[static_cast<size_t>(i)].is_null())
        pb.target_mean(i) = tm[static_cast<size_t>(i)].get<double>();
  }
  if (jd.contains("objective")) {
    const std::string obj = jd.at("objective").get<std::string>();
    if (obj == "none")
      pb.objective = DesignObjective::None;
    else if (obj == "trace_covariance")
      pb.objective = DesignObjective::TraceCovariance;
    else if (obj == "component_variance")
      pb.objective = DesignObjective::ComponentVariance;
    else
      fail("design.objective: unknown value '" + obj + "'");
  }
  if (jd.contains("component")) {
    const auto& c = jd.at("component");
    if (!c.is_array() || c.size() != 2) fail("design.component: expected [i,j]");
    pb.component_row = c[0].get<int>();
    pb.component_col = c[1].get<int>();
  }
  if (jd.contains("mean_tolerance"))
    pb.mean_tolerance = get_number(jd, "design", "mean_tolerance");
  return pb;
}

std::string report_to_json(const MomentReport& r, int indent) {
  json out{{"stability", stability_json(r.stability)},
           {"moments_valid", r.moments_valid}};
  if (r.moments_valid) {
    out["mean_x"] = to_json(r.mean_x);
    out["mean_u"] = to_json(r.mean_u);
    out["covariance"] = to_json(r.covariance);
    out["variance_channel"] = to_json(r.variance_channel);
    out["variance_disturbance"] = to_json(r.variance_disturbance);
  }
  return out.dump(indent);
}

std::string stability_to_json(const StabilityReport& r, int indent) {
  return stability_json(r).dump(indent);
}

std::string ensemble_to_json(const EnsembleStats& s, int indent) {
  json out{{"mean_x", to_json(s.mean_x)},
           {"var_x", to_json(s.var_x)},
           {"ci95_mean", to_json(s.ci95_mean)},
           {"ci95_var", to_json(s.ci95_var)},
           {"effective_samples", s.effective_samples},
           {"divergent", s.divergent},
           {"mean_interval_observed", s.mean_interval_observed}};
  return out.dump(indent);
}

std::string design_to_json(const DesignResult& r, int indent) {
  json out{{"K", to_json(r.K)},
           {"achieved_mean", to_json(r.achieved_mean)},
           {"achieved_covariance", to_json(r.achieved_covariance)},
           {"stability", stability_json(r.stability)},
           {"feasible", r.feasible},
           {"iterations", r.iterations},
           {"objective_value", r.objective_value}};
  return out.dump(indent);
}

SweepConfig parse_sweep_config(const std::string& json_text,
                               const NCSModel& model) {
  const json root = parse_text(json_text);
  if (!root.contains("sweep")) fail("config: missing key 'sweep'");
  const json& js = root.at("sweep");
  reject_unknown(js, "sweep",
                 {"parameter", "values", "from", "to", "count", "monte_carlo"});
  SweepConfig sweep;
  if (!js.contains("parameter")) fail("sweep: missing key 'parameter'");
  const std::string param = js.at("parameter").get<std::string>();
  if (param == "mean_interval")
    sweep.parameter = SweepConfig::Parameter::MeanInterval;
  else if (param == "cv2")
    sweep.parameter = SweepConfig::Parameter::Cv2;
  else
    fail("sweep.parameter: unknown value '" + param + "'");
  if (js.contains("values")) {
    for (const auto& v : js.at("values")) sweep.values.push_back(v.get<double>());
  } else if (js.contains("from") && js.contains("to") && js.contains("count")) {
    const double lo = get_number(js, "sweep", "from");
    const double hi = get_number(js, "sweep", "to");
    const int count = static_cast<int>(get_number(js, "sweep", "count"));
    if (count < 1) fail("sweep.count: must be >= 1");
    for (int i = 0; i < count; ++i)
      sweep.values.push_back(
          count == 1 ? lo : lo + (hi - lo) * i / (count - 1.0));
  }
  if (sweep.values.empty()) fail("sweep: empty grid");
  if (js.contains("monte_carlo"))
    sweep.with_monte_carlo = js.at("monte_carlo").get<bool>();
  if (root.contains("simulation"))
    sweep.sim = sim_from_json(root.at("simulation"));
  (void)model;
  return sweep;
}

std::string run_sweep(const NCSModel& model, const SweepConfig& sweep) {
  require_valid(model);
  if (sweep.values.empty()) throw DomainError("sweep: empty grid");
  const auto n = model.plant.n();
  const double base_mean = model.intervals.mean();

  std::ostringstream csv;
  csv.precision(12);
  csv << "sweep_value";
  for (Eigen::Index i = 0; i < n; ++i) csv << ",mean_x_" << (i + 1);
  for (const char* block : {"var_total", "var_channel", "var_disturbance"})
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        csv << "," << block << "_" << (i + 1) << (j + 1);
  csv << ",spectral_radius_1,spectral_radius_2";
  if (sweep.with_monte_carlo) csv << ",mc_var,mc_ci_lo,mc_ci_hi";
  csv << "\n";

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double value : sweep.values) {
    NCSModel point = model;
    if (sweep.parameter == SweepConfig::Parameter::MeanInterval) {
      point.intervals = model.intervals.scaled_to_mean(value);
    } else {
      point.intervals = RenewalDistribution::gamma_mean_cv2(base_mean, value);
    }
    const MomentReport rep = analyze(point, sweep.quadrature);
    csv << value;
    auto dump_matrix = [&](const Matrix& mtx) {
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          csv << "," << (rep.moments_valid ? mtx(i, j) : nan);
    };
    for (Eigen::Index i = 0; i < n; ++i)
      csv << "," << (rep.moments_valid ? rep.mean_x(i) : nan);
    dump_matrix(rep.covariance);
    dump_matrix(rep.variance_channel);
    dump_matrix(rep.variance_disturbance);
    csv << "," << rep.stability.first_spectral_radius << ","
        << rep.stability.second_spectral_radius;
    if (sweep.with_monte_carlo) {
      if (rep.moments_valid) {
        const EnsembleStats mc = estimate(point, sweep.sim);
        csv << "," << mc.var_x(0, 0) << ","
            << mc.var_x(0, 0) - mc.ci95_var(0, 0) << ","
            << mc.var_x(0, 0) + mc.ci95_var(0, 0);
      } else {
        csv << "," << nan << "," << nan << "," << nan;
      }
    }
    csv << "\n";
  }
  return csv.str();
}

}  // namespace ncs
