#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jasda/clearing.hpp"
#include "jasda/config.hpp"
#include "jasda/core.hpp"
#include "jasda/scoring.hpp"
#include "jasda/timeline.hpp"
#include "jasda/trust.hpp"

namespace jasda {

enum class Policy { kJasda, kFifo, kGreedy };

std::string to_string(Policy policy);
Policy policy_from_string(const std::string& name);

// Runtime face of one job: the static spec plus everything the cycle
// mutates. pending_committed_work is nominal work committed but not yet
// completed; bids are capped by remaining_work - pending_committed_work.
struct JobAgent {
  JobSpec spec;
  JobRuntimeState runtime;
  ReliabilityState reliability;
  Tick pending_committed_work = 0;
  Tick completion_time = -1;  // actual end of the chunk that zeroed work
  std::int64_t chunks_committed = 0;

  Tick available_work() const {
    return runtime.remaining_work - pending_committed_work;
  }
  bool finished() const { return runtime.remaining_work == 0; }
};

// Earliest announceable idle gap across all slices: start >= now +
// lead_time, length >= tau_min, start within the announce lookahead when
// one is set (lookahead < 0 means unbounded). Ties between slices break
// on slice order. Returns nullopt when no such gap exists in-horizon.
std::optional<Window> announce_window(const std::vector<SliceTimeline>& timelines,
                                      Tick now, const PolicyParams& params,
                                      Tick horizon, Tick announce_lookahead);

// Agent-side bid construction: zero or more eligible variants, each
// safe-by-construction, tau_min-respecting, inside the window, and backed
// by uncommitted work. Declared features are the truthful values shifted
// by the agent's declared_bias and clamped to [0,1].
std::vector<Variant> generate_variants(const JobAgent& agent,
                                       const Window& window,
                                       const PolicyParams& params,
                                       double duration_quantile,
                                       Tick delta_jct_max,
                                       std::int64_t iteration_index);

// Job-side declared feature order (alpha / verification weight order).
inline constexpr std::size_t kFeatureJct = 0;
inline constexpr std::size_t kFeatureQos = 1;
inline constexpr std::size_t kFeatureProgress = 2;
inline constexpr std::size_t kJobFeatureCount = 3;

struct SimulationResult {
  std::vector<nlohmann::json> trace;  // header, iterations, final metrics
  nlohmann::json metrics;             // the final metrics object
  std::string trace_hash;             // fnv1a64 hex of the serialized trace
};

// Runs the full cycle (announce, bid, score, clear, commit, realize,
// verify) to completion or horizon. Deterministic: identical
// (config, policy) pairs produce byte-identical traces.
SimulationResult run_simulation(const WorkloadConfig& config, Policy policy);

// Serializes trace lines exactly as hashed: compact JSON, one per line.
std::string serialize_trace(const std::vector<nlohmann::json>& trace);
std::string hash_trace(const std::vector<nlohmann::json>& trace);

// Recomputes the metrics object from raw trace lines (header needed).
// The trace is self-auditing: this must reproduce the run's own metrics.
nlohmann::json compute_metrics(const std::vector<nlohmann::json>& trace);

// Structural audit of a trace: commitment disjointness, selection and
// score consistency, safety recheck, per-window dominance, eligibility,
// and metrics agreement. Throws AuditError on the first violation.
void audit_trace(const std::vector<nlohmann::json>& trace);

// Parses a .jsonl trace file into lines. Throws IoError / AuditError.
std::vector<nlohmann::json> read_trace_file(const std::string& path);
void write_trace_file(const std::vector<nlohmann::json>& trace,
                      const std::string& path);

}  // namespace jasda
