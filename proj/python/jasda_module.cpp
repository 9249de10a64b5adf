#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jasda/clearing.hpp"
#include "jasda/config.hpp"
#include "jasda/engine.hpp"
#include "jasda/errors.hpp"
#include "jasda/fmp.hpp"
#include "jasda/scoring.hpp"
#include "jasda/trust.hpp"

namespace py = pybind11;
using namespace jasda;

namespace {

// Workload-level entry point: JSON in, JSON out, optional trace file.
std::string run_simulation_json(const std::string& config_json,
                                const std::string& policy,
                                const std::string& trace_path) {
  WorkloadConfig config = parse_config(config_json);
  SimulationResult result = run_simulation(config, policy_from_string(policy));
  if (!trace_path.empty()) {
    write_trace_file(result.trace, trace_path);
  }
  nlohmann::json metrics = result.metrics;
  metrics["trace_hash"] = result.trace_hash;
  return metrics.dump();
}

std::string generate_workload_json(Tick horizon, double arrival_rate,
                                   int n_slices, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.horizon = horizon;
  spec.arrival_rate = arrival_rate;
  spec.n_slices = n_slices;
  return write_config(generate_workload(spec, seed));
}

std::string replay_trace_file(const std::string& trace_path) {
  auto trace = read_trace_file(trace_path);
  audit_trace(trace);
  return compute_metrics(trace).dump();
}

}  // namespace

PYBIND11_MODULE(_jasda, m) {
  m.doc() = "window-auction scheduling engine for sliced accelerators";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<AuditError>(m, "AuditError");
  py::register_exception<IoError>(m, "IoError");

  py::class_<PolicyParams>(m, "PolicyParams")
      .def(py::init<>())
      .def_readwrite("lambda_", &PolicyParams::lambda)
      .def_readwrite("alpha", &PolicyParams::alpha)
      .def_readwrite("beta", &PolicyParams::beta)
      .def_readwrite("theta", &PolicyParams::theta)
      .def_readwrite("tau_min", &PolicyParams::tau_min)
      .def_readwrite("gamma", &PolicyParams::gamma)
      .def_readwrite("kappa", &PolicyParams::kappa)
      .def_readwrite("verification_weights",
                     &PolicyParams::verification_weights)
      .def_readwrite("age_horizon", &PolicyParams::age_horizon)
      .def_readwrite("lead_time", &PolicyParams::lead_time);
  m.def("validate_policy", &validate_policy, "check every policy invariant");

  py::class_<FmpSegment>(m, "FmpSegment")
      .def(py::init<double, double, double>(), py::arg("fraction"),
           py::arg("mem_mean"), py::arg("mem_std"))
      .def_readwrite("fraction", &FmpSegment::fraction)
      .def_readwrite("mem_mean", &FmpSegment::mem_mean_gb)
      .def_readwrite("mem_std", &FmpSegment::mem_std_gb);

  py::class_<Fmp>(m, "Fmp")
      .def(py::init<>())
      .def_readwrite("segments", &Fmp::segments)
      .def_readwrite("duration_mean", &Fmp::duration_mean)
      .def_readwrite("duration_std", &Fmp::duration_std);

  m.def("predict_duration", &predict_duration, py::arg("fmp"),
        py::arg("quantile"));
  m.def("prob_exceeds_capacity", &prob_exceeds_capacity, py::arg("fmp"),
        py::arg("capacity"), py::arg("duration"));
  m.def("is_safe", &is_safe, py::arg("fmp"), py::arg("capacity"),
        py::arg("duration"), py::arg("theta"));
  m.def("scale_fmp", &scale_fmp, py::arg("fmp"), py::arg("nominal_work"));

  py::class_<RealizedExecution>(m, "RealizedExecution")
      .def_readonly("actual_duration", &RealizedExecution::actual_duration)
      .def_readonly("peak_mem_per_segment",
                    &RealizedExecution::peak_mem_per_segment);
  m.def("sample_execution", &sample_execution, py::arg("fmp"),
        py::arg("committed_duration"), py::arg("seed"));

  m.def("normalize_jct", &normalize_jct);
  m.def("normalize_energy", &normalize_energy);
  m.def("qos_indicator", &qos_indicator);
  m.def("mem_headroom", &mem_headroom);
  m.def("job_utility", &job_utility);
  m.def("system_utility", &system_utility);
  m.def("composite_score", &composite_score, py::arg("h_hat"),
        py::arg("f_sys_tilde"), py::arg("lambda_"));

  py::class_<Variant>(m, "Variant")
      .def(py::init<>())
      .def_readwrite("variant_id", &Variant::variant_id)
      .def_readwrite("job_id", &Variant::job_id)
      .def_readwrite("slice_id", &Variant::slice_id)
      .def_readwrite("t_start", &Variant::t_start)
      .def_readwrite("predicted_duration", &Variant::predicted_duration)
      .def_readwrite("nominal_work", &Variant::nominal_work)
      .def_readwrite("fmp", &Variant::fmp)
      .def_readwrite("declared_features", &Variant::declared_features)
      .def_property_readonly("end", &Variant::end);

  py::class_<ScoredVariant>(m, "ScoredVariant")
      .def(py::init<>())
      .def_readwrite("variant", &ScoredVariant::variant)
      .def_readwrite("h_tilde", &ScoredVariant::h_tilde)
      .def_readwrite("f_sys_tilde", &ScoredVariant::f_sys_tilde)
      .def_readwrite("h_hat", &ScoredVariant::h_hat)
      .def_readwrite("score", &ScoredVariant::score)
      .def_readwrite("age_anchor", &ScoredVariant::age_anchor);

  py::class_<ClearingResult>(m, "ClearingResult")
      .def_readonly("selected", &ClearingResult::selected)
      .def_readonly("total_score", &ClearingResult::total_score)
      .def_readonly("rejected", &ClearingResult::rejected);
  m.def("select_best_compatible", &select_best_compatible, py::arg("pool"));
  m.def("max_score_variant", &max_score_variant, py::arg("pool"));

  py::class_<ReliabilityState>(m, "ReliabilityState")
      .def(py::init<>())
      .def_readwrite("job_id", &ReliabilityState::job_id)
      .def_readwrite("hist_avg", &ReliabilityState::hist_avg)
      .def_readwrite("mean_error", &ReliabilityState::mean_error)
      .def_readwrite("verified_count", &ReliabilityState::verified_count)
      .def_readwrite("rho", &ReliabilityState::rho);

  py::class_<VerificationRecord>(m, "VerificationRecord")
      .def(py::init<>())
      .def_readwrite("variant_id", &VerificationRecord::variant_id)
      .def_readwrite("job_id", &VerificationRecord::job_id)
      .def_readwrite("per_feature_error",
                     &VerificationRecord::per_feature_error)
      .def_readwrite("variant_error", &VerificationRecord::variant_error)
      .def_readwrite("observed_utility",
                     &VerificationRecord::observed_utility)
      .def_readwrite("verified_at", &VerificationRecord::verified_at);

  m.def("calibrate", &calibrate, py::arg("h_tilde"), py::arg("state"),
        py::arg("gamma"));
  m.def("per_feature_error", &per_feature_error);
  m.def("variant_error", &variant_error);
  m.def("update_reliability", &update_reliability, py::arg("state"),
        py::arg("record"), py::arg("kappa"));

  m.def("run_simulation_json", &run_simulation_json, py::arg("config_json"),
        py::arg("policy") = "jasda", py::arg("trace_path") = "",
        "run a workload given as a JSON string; returns the metrics JSON");
  m.def("generate_workload_json", &generate_workload_json, py::arg("horizon"),
        py::arg("arrival_rate"), py::arg("n_slices"), py::arg("seed"));
  m.def("replay_trace", &replay_trace_file, py::arg("trace_path"),
        "audit a trace file and return recomputed metrics JSON");

  m.attr("__version__") = "0.1.0";
}
