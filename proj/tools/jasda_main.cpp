#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jasda/config.hpp"
#include "jasda/engine.hpp"
#include "jasda/errors.hpp"

namespace fs = std::filesystem;
using jasda::Policy;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitAudit = 3;
constexpr int kExitIo = 4;

int log_level() {
  const char* env = std::getenv("JASDA_LOG");
  if (!env || !*env) return 0;
  return std::atoi(env);
}

void log_info(const std::string& message) {
  if (log_level() >= 1) std::cerr << "[jasda] " << message << "\n";
}

constexpr const char* kCsvHeader =
    "policy,seed,utilization,mean_jct,p95_jct,max_wait,frag_count,frag_ticks,"
    "mean_rho";

std::string csv_row(const json& metrics) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s,%llu,%.6g,%.6g,%.6g,%.6g,%lld,%lld,%.6g",
                metrics.at("policy").get<std::string>().c_str(),
                static_cast<unsigned long long>(
                    metrics.at("seed").get<std::uint64_t>()),
                metrics.at("utilization").get<double>(),
                metrics.at("mean_jct").get<double>(),
                metrics.at("p95_jct").get<double>(),
                metrics.at("max_wait").get<double>(),
                static_cast<long long>(
                    metrics.at("frag_count").get<std::int64_t>()),
                static_cast<long long>(
                    metrics.at("frag_ticks").get<std::int64_t>()),
                metrics.at("mean_rho").get<double>());
  return buf;
}

void print_table(const json& metrics) {
  auto row = [](const std::string& k, const std::string& v) {
    std::printf("  %-18s %s\n", k.c_str(), v.c_str());
  };
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
  };
  std::printf("metrics (%s, seed %llu)\n",
              metrics.at("policy").get<std::string>().c_str(),
              static_cast<unsigned long long>(
                  metrics.at("seed").get<std::uint64_t>()));
  row("jobs completed",
      std::to_string(metrics.at("jobs_completed").get<std::int64_t>()) + "/" +
          std::to_string(metrics.at("n_jobs").get<std::int64_t>()));
  row("utilization", num(metrics.at("utilization").get<double>()));
  row("mean JCT", num(metrics.at("mean_jct").get<double>()));
  row("median JCT", num(metrics.at("median_jct").get<double>()));
  row("p95 JCT", num(metrics.at("p95_jct").get<double>()));
  row("mean max-wait", num(metrics.at("mean_wait").get<double>()));
  row("max wait", num(metrics.at("max_wait").get<double>()));
  row("frag gaps",
      std::to_string(metrics.at("frag_count").get<std::int64_t>()) + " (" +
          std::to_string(metrics.at("frag_ticks").get<std::int64_t>()) +
          " ticks)");
  row("mean rho", num(metrics.at("mean_rho").get<double>()));
  row("windows cleared",
      std::to_string(metrics.at("windows_cleared").get<std::int64_t>()));
}

json run_one(const jasda::WorkloadConfig& config, Policy policy,
             const fs::path& out_dir) {
  jasda::SimulationResult result = jasda::run_simulation(config, policy);
  fs::create_directories(out_dir);
  jasda::write_trace_file(result.trace, (out_dir / "trace.jsonl").string());
  json metrics = result.metrics;
  metrics["trace_hash"] = result.trace_hash;
  std::ofstream out(out_dir / "metrics.json");
  if (!out) {
    throw jasda::IoError("cannot write " + (out_dir / "metrics.json").string());
  }
  out << metrics.dump(2) << "\n";
  log_info("wrote " + (out_dir / "trace.jsonl").string() + " (hash " +
           result.trace_hash + ")");
  return metrics;
}

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  std::string policy = "jasda";
  std::string format;
};

jasda::WorkloadConfig load_with_overrides(const CommonOptions& opts) {
  jasda::WorkloadConfig config = jasda::load_config(opts.config_path);
  if (opts.seed) config.seed = *opts.seed;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"JASDA scheduling engine and simulator"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string trace_path;
  std::string metrics_path;

  auto* cmd_run = app.add_subcommand("run", "run one policy on a workload");
  cmd_run->add_option("--config", opts.config_path, "workload config JSON")
      ->required();
  cmd_run->add_option("--seed", opts.seed, "override the config seed");
  cmd_run->add_option("--out", opts.out_dir, "output directory");
  cmd_run->add_option("--policy", opts.policy, "jasda|fifo|greedy");

  auto* cmd_compare =
      app.add_subcommand("compare", "run jasda vs baselines, emit CSV");
  cmd_compare->add_option("--config", opts.config_path, "workload config JSON")
      ->required();
  cmd_compare->add_option("--seed", opts.seed, "override the config seed");
  cmd_compare->add_option("--out", opts.out_dir, "output directory");

  auto* cmd_generate =
      app.add_subcommand("generate", "generate a synthetic workload");
  std::string gen_out = "workload.json";
  std::uint64_t gen_seed = 1;
  jasda::GeneratorSpec gen;
  cmd_generate->add_option("--out", gen_out, "output config path");
  cmd_generate->add_option("--seed", gen_seed, "generator seed");
  cmd_generate->add_option("--rate", gen.arrival_rate, "arrivals per tick");
  cmd_generate->add_option("--horizon", gen.horizon, "horizon in ticks");
  cmd_generate->add_option("--slices", gen.n_slices, "number of slices");
  cmd_generate->add_option("--work-min", gen.work_min, "min job work");
  cmd_generate->add_option("--work-max", gen.work_max, "max job work");

  auto* cmd_replay =
      app.add_subcommand("replay", "audit a trace and recompute its metrics");
  cmd_replay->add_option("--trace", trace_path, "trace.jsonl path")->required();
  cmd_replay->add_option("--metrics", metrics_path,
                         "metrics.json to check against");

  auto* cmd_report = app.add_subcommand("report", "render a metrics summary");
  cmd_report->add_option("--metrics", metrics_path, "metrics.json path");
  cmd_report->add_option("--trace", trace_path,
                         "trace.jsonl path (metrics recomputed)");
  cmd_report->add_option("--format", opts.format, "csv|json (default table)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (cmd_run->parsed()) {
      jasda::WorkloadConfig config = load_with_overrides(opts);
      Policy policy = jasda::policy_from_string(opts.policy);
      json metrics = run_one(config, policy, fs::path(opts.out_dir));
      print_table(metrics);
      std::printf("trace hash: %s\n",
                  metrics.at("trace_hash").get<std::string>().c_str());
    } else if (cmd_compare->parsed()) {
      jasda::WorkloadConfig config = load_with_overrides(opts);
      fs::path root(opts.out_dir);
      std::vector<json> rows;
      for (Policy policy : {Policy::kJasda, Policy::kFifo, Policy::kGreedy}) {
        rows.push_back(run_one(config, policy, root / jasda::to_string(policy)));
      }
      fs::create_directories(root);
      std::ofstream csv(root / "compare.csv");
      if (!csv) {
        throw jasda::IoError("cannot write " + (root / "compare.csv").string());
      }
      csv << kCsvHeader << "\n";
      std::printf("%s\n", kCsvHeader);
      for (const auto& row : rows) {
        csv << csv_row(row) << "\n";
        std::printf("%s\n", csv_row(row).c_str());
      }
      log_info("wrote " + (root / "compare.csv").string());
    } else if (cmd_generate->parsed()) {
      jasda::WorkloadConfig config = jasda::generate_workload(gen, gen_seed);
      jasda::save_config(config, gen_out);
      std::printf("generated %zu jobs on %zu slices over %lld ticks -> %s\n",
                  config.jobs.size(), config.slices.size(),
                  static_cast<long long>(config.horizon), gen_out.c_str());
    } else if (cmd_replay->parsed()) {
      std::vector<json> trace = jasda::read_trace_file(trace_path);
      jasda::audit_trace(trace);
      json recomputed = jasda::compute_metrics(trace);
      if (!metrics_path.empty()) {
        std::ifstream in(metrics_path);
        if (!in) throw jasda::IoError("cannot open " + metrics_path);
        json stored = json::parse(in);
        std::string stored_hash = stored.value("trace_hash", "");
        stored.erase("trace_hash");
        if (stored.dump() != recomputed.dump()) {
          throw jasda::AuditError("metrics file disagrees with trace");
        }
        if (!stored_hash.empty() && stored_hash != jasda::hash_trace(trace)) {
          throw jasda::AuditError("trace hash mismatch");
        }
      }
      std::printf("replay ok: hash %s\n", jasda::hash_trace(trace).c_str());
    } else if (cmd_report->parsed()) {
      json metrics;
      if (!metrics_path.empty()) {
        std::ifstream in(metrics_path);
        if (!in) throw jasda::IoError("cannot open " + metrics_path);
        metrics = json::parse(in);
      } else if (!trace_path.empty()) {
        metrics = jasda::compute_metrics(jasda::read_trace_file(trace_path));
      } else {
        std::fprintf(stderr, "report: need --metrics or --trace\n");
        return kExitConfig;
      }
      if (opts.format == "csv") {
        std::printf("%s\n%s\n", kCsvHeader, csv_row(metrics).c_str());
      } else if (opts.format == "json") {
        std::printf("%s\n", metrics.dump(2).c_str());
      } else {
        print_table(metrics);
      }
    }
  } catch (const jasda::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const jasda::AuditError& e) {
    std::fprintf(stderr, "audit failure: %s\n", e.what());
    return kExitAudit;
  } catch (const jasda::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
  return kExitOk;
}
