#include "ncs/ncs.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "ncs/config.hpp"

namespace {

thread_local std::string g_last_error;

ncs_status status_of(const ncs::Error& e) {
  switch (e.code()) {
    case ncs::ErrorCode::Dimension: return NCS_ERR_DIMENSION;
    case ncs::ErrorCode::Domain: return NCS_ERR_DOMAIN;
    case ncs::ErrorCode::Divergence: return NCS_ERR_DIVERGENCE;
    case ncs::ErrorCode::NonConvergence: return NCS_ERR_NONCONVERGENCE;
    case ncs::ErrorCode::Unstable: return NCS_ERR_UNSTABLE;
    case ncs::ErrorCode::Infeasible: return NCS_ERR_INFEASIBLE;
    case ncs::ErrorCode::InvalidModel: return NCS_ERR_INVALID_MODEL;
    case ncs::ErrorCode::Parse: return NCS_ERR_PARSE;
    case ncs::ErrorCode::Internal: return NCS_ERR_INTERNAL;
  }
  return NCS_ERR_INTERNAL;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
ncs_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return NCS_OK;
  } catch (const ncs::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NCS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return NCS_ERR_INTERNAL;
  }
}

ncs_status require(bool ok, const char* what) {
  if (ok) return NCS_OK;
  g_last_error = what;
  return NCS_ERR_DOMAIN;
}

}  // namespace

struct ncs_model {
  ncs::NCSModel model;
};

extern "C" {

const char* ncs_version(void) { return "1.0.0"; }

const char* ncs_last_error_message(void) { return g_last_error.c_str(); }

void ncs_string_free(char* text) { std::free(text); }

ncs_status ncs_model_parse(const char* json_text, ncs_model** out) {
  if (ncs_status s = require(json_text && out, "null argument")) return s;
  *out = nullptr;
  return guarded([&] { *out = new ncs_model{ncs::parse_model(json_text)}; });
}

void ncs_model_free(ncs_model* model) { delete model; }

ncs_status ncs_model_validate(const ncs_model* model) {
  if (ncs_status s = require(model != nullptr, "null model")) return s;
  return guarded([&] { ncs::require_valid(model->model); });
}

ncs_status ncs_analyze(const ncs_model* model, double rel_tol,
                       char** json_out) {
  if (ncs_status s = require(model && json_out, "null argument")) return s;
  return guarded([&] {
    ncs::QuadratureSpec spec;
    if (rel_tol > 0) spec.relative_tolerance = rel_tol;
    const ncs::MomentReport rep = ncs::analyze(model->model, spec);
    *json_out = dup_string(ncs::report_to_json(rep));
  });
}

ncs_status ncs_simulate(const ncs_model* model, const char* sim_json,
                        char** json_out) {
  if (ncs_status s = require(model && json_out, "null argument")) return s;
  return guarded([&] {
    ncs::SimConfig cfg;
    if (sim_json) cfg = ncs::parse_sim_config(sim_json, model->model);
    const ncs::EnsembleStats stats = ncs::estimate(model->model, cfg);
    *json_out = dup_string(ncs::ensemble_to_json(stats));
  });
}

ncs_status ncs_design(const char* config_json, char** json_out) {
  if (ncs_status s = require(config_json && json_out, "null argument"))
    return s;
  return guarded([&] {
    const ncs::DesignProblem pb = ncs::parse_design_problem(config_json);
    const ncs::DesignResult result = ncs::design_gain(pb);
    *json_out = dup_string(ncs::design_to_json(result));
  });
}

ncs_status ncs_sweep(const ncs_model* model, const char* sweep_json,
                     char** csv_out) {
  if (ncs_status s = require(model && sweep_json && csv_out, "null argument"))
    return s;
  return guarded([&] {
    const ncs::SweepConfig sweep =
        ncs::parse_sweep_config(sweep_json, model->model);
    *csv_out = dup_string(ncs::run_sweep(model->model, sweep));
  });
}

}  // extern "C"
