#include "jasda/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "jasda/errors.hpp"
#include "jasda/rng.hpp"

namespace jasda {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::string& path,
                  const std::set<std::string>& required,
                  const std::set<std::string>& optional = {}) {
  if (!obj.is_object()) {
    throw ConfigError(path + ": expected an object");
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!required.count(it.key()) && !optional.count(it.key())) {
      throw ConfigError(path + ": unknown key '" + it.key() + "'");
    }
  }
  for (const auto& key : required) {
    if (!obj.contains(key)) {
      throw ConfigError(path + ": missing key '" + key + "'");
    }
  }
}

template <typename T>
T get_field(const json& obj, const std::string& path, const std::string& key) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(path + "." + key + ": " + e.what());
  }
}

Fmp parse_fmp(const json& obj, const std::string& path) {
  require_keys(obj, path, {"duration_mean", "duration_std", "segments"});
  Fmp fmp;
  fmp.duration_mean = get_field<double>(obj, path, "duration_mean");
  fmp.duration_std = get_field<double>(obj, path, "duration_std");
  const json& segs = obj.at("segments");
  if (!segs.is_array()) {
    throw ConfigError(path + ".segments: expected an array");
  }
  for (std::size_t i = 0; i < segs.size(); ++i) {
    std::string seg_path = path + ".segments[" + std::to_string(i) + "]";
    require_keys(segs[i], seg_path, {"fraction", "mem_mean", "mem_std"});
    FmpSegment seg;
    seg.fraction = get_field<double>(segs[i], seg_path, "fraction");
    seg.mem_mean_gb = get_field<double>(segs[i], seg_path, "mem_mean");
    seg.mem_std_gb = get_field<double>(segs[i], seg_path, "mem_std");
    fmp.segments.push_back(seg);
  }
  try {
    validate_fmp(fmp);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return fmp;
}

json fmp_to_json(const Fmp& fmp) {
  json segs = json::array();
  for (const auto& seg : fmp.segments) {
    segs.push_back({{"fraction", seg.fraction},
                    {"mem_mean", seg.mem_mean_gb},
                    {"mem_std", seg.mem_std_gb}});
  }
  return {{"duration_mean", fmp.duration_mean},
          {"duration_std", fmp.duration_std},
          {"segments", segs}};
}

PolicyParams parse_policy(const json& obj, const std::string& path) {
  require_keys(obj, path,
               {"lambda", "alpha", "beta", "theta", "tau_min", "gamma",
                "kappa", "verification_weights", "age_horizon", "lead_time"});
  PolicyParams p;
  p.lambda = get_field<double>(obj, path, "lambda");
  p.alpha = get_field<std::vector<double>>(obj, path, "alpha");
  p.beta = get_field<std::vector<double>>(obj, path, "beta");
  p.theta = get_field<double>(obj, path, "theta");
  p.tau_min = get_field<Tick>(obj, path, "tau_min");
  p.gamma = get_field<double>(obj, path, "gamma");
  p.kappa = get_field<double>(obj, path, "kappa");
  p.verification_weights =
      get_field<std::vector<double>>(obj, path, "verification_weights");
  p.age_horizon = get_field<Tick>(obj, path, "age_horizon");
  p.lead_time = get_field<Tick>(obj, path, "lead_time");
  try {
    validate_policy(p);
  } catch (const std::invalid_argument& e) {
    // Name the offending field for the common single-value violations.
    std::string what = e.what();
    std::string field = what.substr(0, what.find(' '));
    throw ConfigError(path + "." + field + ": " + what);
  }
  return p;
}

json policy_to_json(const PolicyParams& p) {
  return {{"lambda", p.lambda},
          {"alpha", p.alpha},
          {"beta", p.beta},
          {"theta", p.theta},
          {"tau_min", p.tau_min},
          {"gamma", p.gamma},
          {"kappa", p.kappa},
          {"verification_weights", p.verification_weights},
          {"age_horizon", p.age_horizon},
          {"lead_time", p.lead_time}};
}

JobSpec parse_job(const json& obj, const std::string& path) {
  require_keys(obj, path,
               {"job_id", "arrival", "total_work", "fmp"},
               {"qos_deadline", "declared_bias", "strategy", "max_variants"});
  JobSpec job;
  job.job_id = get_field<std::string>(obj, path, "job_id");
  job.arrival = get_field<Tick>(obj, path, "arrival");
  job.total_work = get_field<Tick>(obj, path, "total_work");
  job.fmp = parse_fmp(obj.at("fmp"), path + ".fmp");
  if (obj.contains("qos_deadline") && !obj.at("qos_deadline").is_null()) {
    job.qos_deadline = get_field<Tick>(obj, path, "qos_deadline");
  }
  if (obj.contains("declared_bias")) {
    job.declared_bias = get_field<double>(obj, path, "declared_bias");
  }
  if (obj.contains("strategy")) {
    try {
      job.strategy =
          bid_strategy_from_string(get_field<std::string>(obj, path, "strategy"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path + ".strategy: " + e.what());
    }
  }
  if (obj.contains("max_variants")) {
    job.max_variants = get_field<int>(obj, path, "max_variants");
  }
  if (job.arrival < 0) throw ConfigError(path + ".arrival: negative");
  if (job.total_work <= 0) throw ConfigError(path + ".total_work: not positive");
  if (job.max_variants < 1) throw ConfigError(path + ".max_variants: below 1");
  return job;
}

json job_to_json(const JobSpec& job) {
  json j = {{"job_id", job.job_id},
            {"arrival", job.arrival},
            {"total_work", job.total_work},
            {"fmp", fmp_to_json(job.fmp)},
            {"declared_bias", job.declared_bias},
            {"strategy", to_string(job.strategy)},
            {"max_variants", job.max_variants}};
  if (job.qos_deadline) {
    j["qos_deadline"] = *job.qos_deadline;
  }
  return j;
}

}  // namespace

std::string to_string(BidStrategy strategy) {
  switch (strategy) {
    case BidStrategy::kGreedyFill:
      return "greedy-fill";
    case BidStrategy::kSingleSpan:
      return "single-span";
  }
  return "greedy-fill";
}

BidStrategy bid_strategy_from_string(const std::string& name) {
  if (name == "greedy-fill") return BidStrategy::kGreedyFill;
  if (name == "single-span") return BidStrategy::kSingleSpan;
  throw std::invalid_argument("unknown strategy '" + name + "'");
}

bool WorkloadConfig::operator==(const WorkloadConfig& other) const {
  return schema_version == other.schema_version && horizon == other.horizon &&
         seed == other.seed && delta_jct_max == other.delta_jct_max &&
         e_max == other.e_max && duration_quantile == other.duration_quantile &&
         announce_lookahead == other.announce_lookahead &&
         slices == other.slices && jobs == other.jobs && policy == other.policy;
}

WorkloadConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  require_keys(root, "config",
               {"schema_version", "horizon", "seed", "delta_jct_max", "e_max",
                "slices", "jobs", "policy"},
               {"duration_quantile", "announce_lookahead"});
  WorkloadConfig config;
  config.schema_version = get_field<int>(root, "config", "schema_version");
  if (config.schema_version != 1) {
    throw ConfigError("config.schema_version: unsupported version");
  }
  config.horizon = get_field<Tick>(root, "config", "horizon");
  if (config.horizon <= 0) throw ConfigError("config.horizon: not positive");
  config.seed = get_field<std::uint64_t>(root, "config", "seed");
  config.delta_jct_max = get_field<Tick>(root, "config", "delta_jct_max");
  if (config.delta_jct_max <= 0) {
    throw ConfigError("config.delta_jct_max: not positive");
  }
  config.e_max = get_field<double>(root, "config", "e_max");
  if (!(config.e_max > 0.0)) throw ConfigError("config.e_max: not positive");
  if (root.contains("duration_quantile")) {
    config.duration_quantile =
        get_field<double>(root, "config", "duration_quantile");
    if (!(config.duration_quantile > 0.0 && config.duration_quantile < 1.0)) {
      throw ConfigError("config.duration_quantile: out of (0,1)");
    }
  }
  if (root.contains("announce_lookahead")) {
    config.announce_lookahead =
        get_field<Tick>(root, "config", "announce_lookahead");
  }

  const json& slices = root.at("slices");
  if (!slices.is_array()) throw ConfigError("config.slices: expected an array");
  std::set<std::string> slice_ids;
  for (std::size_t i = 0; i < slices.size(); ++i) {
    std::string path = "config.slices[" + std::to_string(i) + "]";
    require_keys(slices[i], path, {"slice_id", "capacity"});
    SliceSpec slice;
    slice.slice_id = get_field<std::string>(slices[i], path, "slice_id");
    slice.capacity_gb = get_field<double>(slices[i], path, "capacity");
    if (!(slice.capacity_gb > 0.0)) {
      throw ConfigError(path + ".capacity: not positive");
    }
    if (!slice_ids.insert(slice.slice_id).second) {
      throw ConfigError(path + ".slice_id: duplicate");
    }
    config.slices.push_back(slice);
  }
  if (config.slices.empty()) {
    throw ConfigError("config.slices: at least one slice required");
  }

  const json& jobs = root.at("jobs");
  if (!jobs.is_array()) throw ConfigError("config.jobs: expected an array");
  std::set<std::string> job_ids;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    std::string path = "config.jobs[" + std::to_string(i) + "]";
    JobSpec job = parse_job(jobs[i], path);
    if (!job_ids.insert(job.job_id).second) {
      throw ConfigError(path + ".job_id: duplicate");
    }
    config.jobs.push_back(std::move(job));
  }

  config.policy = parse_policy(root.at("policy"), "config.policy");
  // Engine feature dimensions: (jct, qos, progress) job-side and
  // (util_gain, mem_headroom) system-side plus the age entry.
  if (config.policy.alpha.size() != 3) {
    throw ConfigError("config.policy.alpha: expected 3 entries");
  }
  if (config.policy.beta.size() != 3) {
    throw ConfigError("config.policy.beta: expected 3 entries");
  }
  if (config.policy.verification_weights.size() != 3) {
    throw ConfigError("config.policy.verification_weights: expected 3 entries");
  }
  return config;
}

WorkloadConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file: " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string write_config(const WorkloadConfig& config) {
  json jobs = json::array();
  for (const auto& job : config.jobs) {
    jobs.push_back(job_to_json(job));
  }
  json slices = json::array();
  for (const auto& slice : config.slices) {
    slices.push_back(
        {{"slice_id", slice.slice_id}, {"capacity", slice.capacity_gb}});
  }
  json root = {{"schema_version", config.schema_version},
               {"horizon", config.horizon},
               {"seed", config.seed},
               {"delta_jct_max", config.delta_jct_max},
               {"e_max", config.e_max},
               {"duration_quantile", config.duration_quantile},
               {"announce_lookahead", config.announce_lookahead},
               {"slices", slices},
               {"jobs", jobs},
               {"policy", policy_to_json(config.policy)}};
  return root.dump(2) + "\n";
}

void save_config(const WorkloadConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write config file: " + path);
  }
  out << write_config(config);
}

WorkloadConfig generate_workload(const GeneratorSpec& spec,
                                 std::uint64_t seed) {
  if (spec.horizon <= 0) {
    throw ConfigError("generator.horizon: not positive");
  }
  if (spec.arrival_rate < 0.0) {
    throw ConfigError("generator.arrival_rate: negative");
  }
  if (spec.n_slices < 1) {
    throw ConfigError("generator.n_slices: below 1");
  }

  WorkloadConfig config;
  config.horizon = spec.horizon;
  config.seed = seed;
  config.delta_jct_max = spec.horizon;
  config.e_max = 1000.0;
  config.duration_quantile = 0.9;
  config.announce_lookahead = -1;

  config.policy.lambda = 0.5;
  config.policy.alpha = {0.3, 0.2, 0.3};
  config.policy.beta = {0.35, 0.35, 0.2};
  config.policy.theta = 0.05;
  config.policy.tau_min = 2;
  config.policy.gamma = 1.0;
  config.policy.kappa = 2.0;
  config.policy.verification_weights = {0.5, 0.2, 0.3};
  config.policy.age_horizon = std::max<Tick>(1, spec.horizon / 10);
  config.policy.lead_time = 0;

  SplitMix64 slice_rng(derive_stream_seed(seed, "slices"));
  for (int k = 0; k < spec.n_slices; ++k) {
    SliceSpec slice;
    slice.slice_id = "s" + std::to_string(k + 1);
    slice.capacity_gb =
        spec.capacity_min_gb +
        (spec.capacity_max_gb - spec.capacity_min_gb) * slice_rng.next_double();
    slice.capacity_gb = std::round(slice.capacity_gb * 2.0) / 2.0;
    config.slices.push_back(slice);
  }

  if (spec.arrival_rate > 0.0) {
    SplitMix64 arrival_rng(derive_stream_seed(seed, "arrivals"));
    SplitMix64 shape_rng(derive_stream_seed(seed, "job-shapes"));
    double t = 0.0;
    int index = 0;
    while (true) {
      t += -std::log(arrival_rng.next_open01()) / spec.arrival_rate;
      Tick arrival = static_cast<Tick>(std::floor(t));
      if (arrival >= spec.horizon) break;
      JobSpec job;
      job.job_id = "J" + std::to_string(++index);
      job.arrival = arrival;
      job.total_work =
          spec.work_min +
          static_cast<Tick>(static_cast<double>(spec.work_max - spec.work_min) *
                            shape_rng.next_double());
      double cap_floor = spec.capacity_min_gb;
      job.fmp.duration_mean = std::max<double>(
          2.0, std::round(static_cast<double>(job.total_work) *
                          (0.2 + 0.3 * shape_rng.next_double())));
      job.fmp.duration_std =
          job.fmp.duration_mean * spec.duration_cv_max * shape_rng.next_double();
      double mem_mean = cap_floor * (0.3 + 0.6 * shape_rng.next_double());
      double mem_std = mem_mean * 0.1 * shape_rng.next_double();
      job.fmp.segments = {FmpSegment{0.5, mem_mean, mem_std},
                          FmpSegment{0.5, mem_mean * 0.7, mem_std}};
      if (shape_rng.next_double() < spec.qos_probability) {
        job.qos_deadline =
            arrival + job.total_work * 4 + static_cast<Tick>(
                          40.0 * shape_rng.next_double());
      }
      job.declared_bias = 0.0;
      job.strategy = shape_rng.next_double() < 0.5 ? BidStrategy::kGreedyFill
                                                   : BidStrategy::kSingleSpan;
      job.max_variants = 1 + static_cast<int>(3.0 * shape_rng.next_double());
      config.jobs.push_back(std::move(job));
    }
  }
  return config;
}

}  // namespace jasda
