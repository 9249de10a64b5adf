#include "jasda/engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "jasda/errors.hpp"
#include "jasda/rng.hpp"

namespace jasda {

using nlohmann::json;

std::string to_string(Policy policy) {
  switch (policy) {
    case Policy::kJasda:
      return "jasda";
    case Policy::kFifo:
      return "fifo";
    case Policy::kGreedy:
      return "greedy";
  }
  return "jasda";
}

Policy policy_from_string(const std::string& name) {
  if (name == "jasda") return Policy::kJasda;
  if (name == "fifo") return Policy::kFifo;
  if (name == "greedy") return Policy::kGreedy;
  throw std::invalid_argument("unknown policy '" + name + "'");
}

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

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

// Truthful job-side features for a candidate chunk, before bias.
std::vector<double> truthful_features(const JobAgent& agent, Tick v_end,
                                      Tick nominal, Tick available,
                                      Tick delta_jct_max) {
  std::vector<double> f(kJobFeatureCount, 0.0);
  f[kFeatureJct] =
      normalize_jct(v_end - agent.runtime.arrival_time, delta_jct_max);
  f[kFeatureQos] = agent.spec.qos_deadline
                       ? qos_indicator(v_end <= *agent.spec.qos_deadline)
                       : 1.0;
  f[kFeatureProgress] =
      available > 0 ? std::min(1.0, static_cast<double>(nominal) /
                                        static_cast<double>(available))
                    : 0.0;
  return f;
}

std::vector<Variant> generate_with(const JobAgent& agent, const Window& window,
                                   const PolicyParams& params,
                                   double duration_quantile,
                                   Tick delta_jct_max,
                                   std::int64_t iteration_index,
                                   BidStrategy strategy, int max_variants) {
  std::vector<Variant> variants;
  const Tick available = agent.available_work();
  if (available <= 0) return variants;
  if (window.delta_t < params.tau_min) return variants;

  auto footprint = [&](Tick nominal) {
    Tick p = predict_duration(scale_fmp(agent.spec.fmp, nominal),
                              duration_quantile);
    return std::max(p, params.tau_min);
  };

  auto make_variant = [&](Tick t_start, Tick nominal, Tick predicted,
                          int index) {
    Variant v;
    v.variant_id = agent.spec.job_id + "#" + std::to_string(iteration_index) +
                   "#" + std::to_string(index);
    v.job_id = agent.spec.job_id;
    v.slice_id = window.slice_id;
    v.t_start = t_start;
    v.predicted_duration = predicted;
    v.nominal_work = nominal;
    v.fmp = scale_fmp(agent.spec.fmp, nominal);
    std::vector<double> truth = truthful_features(agent, v.end(), nominal,
                                                  available, delta_jct_max);
    v.declared_features.reserve(truth.size());
    for (double t : truth) {
      v.declared_features.push_back(clamp01(t + agent.spec.declared_bias));
    }
    return v;
  };

  if (strategy == BidStrategy::kSingleSpan) {
    Tick nominal = available;
    Tick predicted = footprint(nominal);
    if (window.t_min + predicted > window.end()) return variants;
    if (!is_safe(scale_fmp(agent.spec.fmp, nominal), window.capacity_gb,
                 predicted, params.theta)) {
      return variants;
    }
    variants.push_back(make_variant(window.t_min, nominal, predicted, 0));
    return variants;
  }

  // greedy-fill: march preferred-size chunks from the window start,
  // shrinking the last one to fit.
  const Tick preferred = std::max<Tick>(
      1, static_cast<Tick>(std::llround(agent.spec.fmp.duration_mean)));
  Tick cursor = window.t_min;
  Tick left = available;
  int index = 0;
  while (index < max_variants && left > 0 && cursor < window.end()) {
    Tick nominal = std::min(preferred, left);
    Tick predicted = footprint(nominal);
    if (cursor + predicted > window.end()) {
      // Largest nominal whose footprint still fits; footprint is monotone.
      Tick lo = 1, hi = nominal, best = 0;
      while (lo <= hi) {
        Tick mid = lo + (hi - lo) / 2;
        if (cursor + footprint(mid) <= window.end()) {
          best = mid;
          lo = mid + 1;
        } else {
          hi = mid - 1;
        }
      }
      if (best == 0) break;
      nominal = best;
      predicted = footprint(nominal);
    }
    if (!is_safe(scale_fmp(agent.spec.fmp, nominal), window.capacity_gb,
                 predicted, params.theta)) {
      break;
    }
    variants.push_back(make_variant(cursor, nominal, predicted, index));
    cursor += predicted;
    left -= nominal;
    ++index;
  }
  return variants;
}

struct PendingExecution {
  Commitment commitment;
  Tick nominal_work = 0;
  Tick work_available_at_bid = 0;
  std::vector<double> declared_features;
  Fmp fmp;
  RealizedExecution realized;
  Tick actual_end = 0;
};

class Simulator {
 public:
  Simulator(const WorkloadConfig& config, Policy policy)
      : config_(config), policy_(policy) {
    validate_policy(config.policy);
    for (const auto& slice : config.slices) {
      timelines_.emplace_back(slice);
    }
    for (const auto& job : config.jobs) {
      JobAgent agent;
      agent.spec = job;
      agent.runtime.job_id = job.job_id;
      agent.runtime.arrival_time = job.arrival;
      agent.runtime.t_last_scheduled = job.arrival;
      agent.runtime.remaining_work = job.total_work;
      agent.reliability.job_id = job.job_id;
      agents_.push_back(std::move(agent));
    }
    std::sort(agents_.begin(), agents_.end(),
              [](const JobAgent& a, const JobAgent& b) {
                return a.spec.job_id < b.spec.job_id;
              });
  }

  SimulationResult run() {
    json header = {{"type", "header"},
                   {"schema_version", 1},
                   {"policy", to_string(policy_)},
                   {"config", json::parse(write_config(config_))}};
    trace_.push_back(header);

    if (!agents_.empty()) {
      now_ = horizon();
      for (const auto& agent : agents_) {
        now_ = std::min(now_, agent.spec.arrival);
      }
      main_loop();
    }

    // Everything committed ends at or before the horizon.
    for (const auto& exec : pending_) {
      now_ = std::max(now_, exec.commitment.end);
    }
    flush_completions_up_to(horizon());
    if (!verification_buffer_.empty()) {
      emit_iteration(nullptr, {}, ClearingResult{}, std::nullopt);
    }

    SimulationResult result;
    result.metrics = compute_metrics(trace_);
    trace_.push_back(result.metrics);
    result.trace = std::move(trace_);
    result.trace_hash = hash_trace(result.trace);
    return result;
  }

 private:
  Tick horizon() const { return config_.horizon; }

  bool all_done() const {
    for (const auto& agent : agents_) {
      if (!agent.finished()) return false;
    }
    return true;
  }

  void main_loop() {
    while (now_ < horizon()) {
      if (all_done() && pending_.empty()) break;
      bool committed = run_iteration();
      if (committed) continue;  // same instant, more gaps may fit
      auto next = next_event_after(now_);
      if (!next || *next >= horizon()) break;
      flush_completions_up_to(*next);
      now_ = *next;
    }
  }

  // One announce/bid/clear/commit pass at the current instant. Returns
  // true when at least one variant was committed.
  bool run_iteration() {
    auto window = announce_window(timelines_, now_, config_.policy, horizon(),
                                  config_.announce_lookahead);
    if (!window) return false;

    std::vector<ScoredVariant> pool;
    if (policy_ == Policy::kFifo) {
      collect_fifo_bid(*window, pool);
    } else {
      collect_bids(*window, pool);
    }

    ClearingResult result;
    if (policy_ == Policy::kGreedy) {
      auto best = max_score_variant(pool);
      if (best) {
        result.selected.push_back(*best);
        result.total_score = best->score;
        for (const auto& sv : pool) {
          if (sv.variant.variant_id != best->variant.variant_id) {
            result.rejected.push_back(sv.variant.variant_id);
          }
        }
      }
    } else {
      // FIFO pools hold at most one bid; the DP degenerates to taking it.
      result = select_best_compatible(pool);
    }

    for (const auto& sv : result.selected) {
      commit_variant(sv, *window);
    }
    emit_iteration(&*window, pool, result, max_score_variant(pool));
    ++iteration_index_;
    return !result.selected.empty();
  }

  void collect_bids(const Window& window, std::vector<ScoredVariant>& pool) {
    for (auto& agent : agents_) {
      if (agent.spec.arrival > now_ || agent.finished()) continue;
      if (agent.available_work() <= 0) continue;
      auto variants = generate_variants(agent, window, config_.policy,
                                        config_.duration_quantile,
                                        config_.delta_jct_max,
                                        iteration_index_);
      for (auto& v : variants) {
        pool.push_back(score_variant(std::move(v), agent, window));
      }
    }
  }

  // FIFO-first-fit: the oldest job able to produce its default
  // (single-span) variant for this window gets it, nothing else bids.
  void collect_fifo_bid(const Window& window,
                        std::vector<ScoredVariant>& pool) {
    std::vector<JobAgent*> order;
    for (auto& agent : agents_) {
      if (agent.spec.arrival > now_ || agent.finished()) continue;
      if (agent.available_work() <= 0) continue;
      order.push_back(&agent);
    }
    std::sort(order.begin(), order.end(), [](JobAgent* a, JobAgent* b) {
      if (a->spec.arrival != b->spec.arrival) {
        return a->spec.arrival < b->spec.arrival;
      }
      return a->spec.job_id < b->spec.job_id;
    });
    for (JobAgent* agent : order) {
      auto variants = generate_with(*agent, window, config_.policy,
                                    config_.duration_quantile,
                                    config_.delta_jct_max, iteration_index_,
                                    BidStrategy::kSingleSpan, 1);
      if (variants.empty()) continue;
      pool.push_back(score_variant(std::move(variants.front()), *agent, window));
      return;
    }
  }

  ScoredVariant score_variant(Variant variant, JobAgent& agent,
                              const Window& window) {
    ScoredVariant sv;
    sv.h_tilde = job_utility(variant.declared_features, config_.policy.alpha);
    note_declaration(agent.reliability, sv.h_tilde);
    sv.h_hat = calibrate(sv.h_tilde, agent.reliability, config_.policy.gamma);
    double util_gain = static_cast<double>(variant.predicted_duration) /
                       static_cast<double>(window.delta_t);
    double headroom = mem_headroom(variant.fmp, window.capacity_gb,
                                   variant.predicted_duration);
    double age =
        age_factor(agent.runtime, now_, config_.policy.age_horizon);
    sv.f_sys_tilde =
        system_utility({util_gain, headroom}, config_.policy.beta, age);
    sv.score = composite_score(sv.h_hat, sv.f_sys_tilde, config_.policy.lambda);
    sv.age_anchor = agent.runtime.t_last_scheduled;
    bid_context_[variant.variant_id] = {age, agent.reliability.rho,
                                        agent.reliability.hist_avg,
                                        agent.available_work()};
    sv.variant = std::move(variant);
    return sv;
  }

  void commit_variant(const ScoredVariant& sv, const Window& window) {
    JobAgent& agent = agent_by_id(sv.variant.job_id);
    Commitment c;
    c.variant_id = sv.variant.variant_id;
    c.job_id = sv.variant.job_id;
    c.slice_id = sv.variant.slice_id;
    c.start = sv.variant.t_start;
    c.end = sv.variant.end();
    c.committed_at = iteration_index_;
    timeline_for(window.slice_id).commit(c);

    PendingExecution exec;
    exec.commitment = c;
    exec.nominal_work = sv.variant.nominal_work;
    exec.work_available_at_bid =
        bid_context_.at(sv.variant.variant_id).available;
    exec.declared_features = sv.variant.declared_features;
    exec.fmp = sv.variant.fmp;
    std::uint64_t exec_seed =
        derive_stream_seed(config_.seed, "exec/" + sv.variant.job_id,
                           static_cast<std::uint64_t>(agent.chunks_committed));
    exec.realized =
        sample_execution(sv.variant.fmp, sv.variant.predicted_duration,
                         exec_seed);
    exec.actual_end =
        c.start + std::min(exec.realized.actual_duration, c.end - c.start);
    pending_.push_back(std::move(exec));

    agent.pending_committed_work += sv.variant.nominal_work;
    agent.runtime.t_last_scheduled = now_;
    ++agent.chunks_committed;
  }

  void flush_completions_up_to(Tick t) {
    std::sort(pending_.begin(), pending_.end(),
              [](const PendingExecution& a, const PendingExecution& b) {
                if (a.commitment.end != b.commitment.end) {
                  return a.commitment.end < b.commitment.end;
                }
                if (a.commitment.slice_id != b.commitment.slice_id) {
                  return a.commitment.slice_id < b.commitment.slice_id;
                }
                return a.commitment.variant_id < b.commitment.variant_id;
              });
    std::size_t done = 0;
    while (done < pending_.size() && pending_[done].commitment.end <= t) {
      realize_verification(pending_[done]);
      ++done;
    }
    pending_.erase(pending_.begin(), pending_.begin() + done);
  }

  void realize_verification(const PendingExecution& exec) {
    JobAgent& agent = agent_by_id(exec.commitment.job_id);
    const Tick committed_len = exec.commitment.end - exec.commitment.start;
    Tick credited = exec.nominal_work;
    if (exec.realized.actual_duration > committed_len) {
      // Overrun: truncated at the committed end, work credited pro rata,
      // the remainder stays queued; the mismatch feeds the trust loop.
      credited = static_cast<Tick>(
          (static_cast<double>(exec.nominal_work) *
           static_cast<double>(committed_len)) /
          static_cast<double>(exec.realized.actual_duration));
      credited = std::clamp<Tick>(credited, 0, exec.nominal_work);
    }

    std::vector<double> observed(kJobFeatureCount, 0.0);
    std::vector<bool> observable(kJobFeatureCount, true);
    observed[kFeatureJct] = normalize_jct(
        exec.actual_end - agent.runtime.arrival_time, config_.delta_jct_max);
    if (agent.spec.qos_deadline) {
      observed[kFeatureQos] =
          qos_indicator(exec.actual_end <= *agent.spec.qos_deadline);
    } else {
      // No deadline: no QoS ground truth exists for this job.
      observed[kFeatureQos] = exec.declared_features[kFeatureQos];
      observable[kFeatureQos] = false;
    }
    observed[kFeatureProgress] =
        exec.work_available_at_bid > 0
            ? std::min(1.0, static_cast<double>(credited) /
                                static_cast<double>(exec.work_available_at_bid))
            : exec.declared_features[kFeatureProgress];

    VerificationRecord record;
    record.variant_id = exec.commitment.variant_id;
    record.job_id = exec.commitment.job_id;
    record.per_feature_error =
        per_feature_error(exec.declared_features, observed);
    record.variant_error = variant_error(
        record.per_feature_error,
        renormalize_weights(config_.policy.verification_weights, observable));
    // Unobservable features keep their declared value, so the observed
    // utility stays on the same alpha scale as h~.
    record.observed_utility = job_utility(observed, config_.policy.alpha);
    record.verified_at = iteration_index_;

    agent.reliability =
        update_reliability(agent.reliability, record, config_.policy.kappa);
    agent.pending_committed_work -= exec.nominal_work;
    agent.runtime.remaining_work -= credited;
    if (agent.runtime.remaining_work == 0 && agent.completion_time < 0) {
      agent.completion_time = exec.actual_end;
    }

    verification_buffer_.push_back(
        {{"variant_id", record.variant_id},
         {"job_id", record.job_id},
         {"verified_at", record.verified_at},
         {"per_feature_error", record.per_feature_error},
         {"variant_error", record.variant_error},
         {"observed_features", observed},
         {"observed_utility", record.observed_utility},
         {"actual_duration", exec.realized.actual_duration},
         {"actual_end", exec.actual_end},
         {"credited", credited},
         {"rho_after", agent.reliability.rho},
         {"mean_error_after", agent.reliability.mean_error},
         {"hist_avg_after", agent.reliability.hist_avg}});
  }

  std::optional<Tick> next_event_after(Tick t) const {
    std::optional<Tick> next;
    auto consider = [&](Tick candidate) {
      if (candidate > t && (!next || candidate < *next)) next = candidate;
    };
    for (const auto& exec : pending_) {
      consider(exec.commitment.end);
    }
    for (const auto& agent : agents_) {
      if (agent.spec.arrival > t) consider(agent.spec.arrival);
    }
    if (config_.announce_lookahead >= 0) {
      // Time at which the next out-of-reach gap enters the lookahead.
      for (const auto& timeline : timelines_) {
        Tick from = t + config_.policy.lead_time;
        for (const auto& gap : timeline.free_gaps(from, horizon())) {
          if (gap.length() < config_.policy.tau_min) continue;
          Tick entry = gap.start - config_.policy.lead_time -
                       config_.announce_lookahead;
          if (entry > t) consider(entry);
          break;
        }
      }
    }
    return next;
  }

  void emit_iteration(const Window* window,
                      const std::vector<ScoredVariant>& pool,
                      const ClearingResult& result,
                      const std::optional<ScoredVariant>& best_single) {
    json bids = json::array();
    for (const auto& sv : pool) {
      const auto& ctx = bid_context_.at(sv.variant.variant_id);
      bids.push_back({{"variant_id", sv.variant.variant_id},
                      {"job_id", sv.variant.job_id},
                      {"slice_id", sv.variant.slice_id},
                      {"t_start", sv.variant.t_start},
                      {"predicted_duration", sv.variant.predicted_duration},
                      {"nominal_work", sv.variant.nominal_work},
                      {"work_available_at_bid", ctx.available},
                      {"declared_features", sv.variant.declared_features},
                      {"fmp", fmp_to_json(sv.variant.fmp)},
                      {"h_tilde", sv.h_tilde},
                      {"h_hat", sv.h_hat},
                      {"f_sys_tilde", sv.f_sys_tilde},
                      {"score", sv.score},
                      {"age", ctx.age},
                      {"age_anchor", sv.age_anchor},
                      {"rho_at_bid", ctx.rho},
                      {"hist_avg_at_bid", ctx.hist_avg}});
    }
    json selected = json::array();
    json commits = json::array();
    for (const auto& sv : result.selected) {
      selected.push_back(sv.variant.variant_id);
      commits.push_back({{"variant_id", sv.variant.variant_id},
                         {"job_id", sv.variant.job_id},
                         {"slice_id", sv.variant.slice_id},
                         {"start", sv.variant.t_start},
                         {"end", sv.variant.end()},
                         {"nominal_work", sv.variant.nominal_work},
                         {"committed_at", iteration_index_}});
    }
    json event = {{"type", "iteration"},
                  {"index", iteration_index_},
                  {"now", now_},
                  {"bids", bids},
                  {"selected", selected},
                  {"total_score", result.total_score},
                  {"commits", commits},
                  {"verifications", verification_buffer_}};
    if (window) {
      event["window"] = {{"slice_id", window->slice_id},
                         {"capacity", window->capacity_gb},
                         {"t_min", window->t_min},
                         {"delta_t", window->delta_t}};
    } else {
      event["window"] = nullptr;
    }
    if (best_single) {
      event["best_single_id"] = best_single->variant.variant_id;
      event["best_single_score"] = best_single->score;
    } else {
      event["best_single_id"] = nullptr;
      event["best_single_score"] = 0.0;
    }
    trace_.push_back(std::move(event));
    verification_buffer_ = json::array();
    bid_context_.clear();
  }

  JobAgent& agent_by_id(const std::string& job_id) {
    for (auto& agent : agents_) {
      if (agent.spec.job_id == job_id) return agent;
    }
    throw std::logic_error("unknown job id: " + job_id);
  }

  SliceTimeline& timeline_for(const std::string& slice_id) {
    for (auto& timeline : timelines_) {
      if (timeline.slice().slice_id == slice_id) return timeline;
    }
    throw std::logic_error("unknown slice id: " + slice_id);
  }

  struct BidContext {
    double age = 0.0;
    double rho = 1.0;
    double hist_avg = 0.0;
    Tick available = 0;
  };

  WorkloadConfig config_;
  Policy policy_;
  std::vector<JobAgent> agents_;
  std::vector<SliceTimeline> timelines_;
  std::vector<PendingExecution> pending_;
  std::vector<json> trace_;
  json verification_buffer_ = json::array();
  std::map<std::string, BidContext> bid_context_;
  std::int64_t iteration_index_ = 0;
  Tick now_ = 0;
};

}  // namespace

std::optional<Window> announce_window(const std::vector<SliceTimeline>& timelines,
                                      Tick now, const PolicyParams& params,
                                      Tick horizon, Tick announce_lookahead) {
  std::optional<Window> best;
  Tick earliest_allowed = now + params.lead_time;
  for (const auto& timeline : timelines) {
    for (const auto& gap : timeline.free_gaps(earliest_allowed, horizon)) {
      if (gap.length() < params.tau_min) continue;
      if (announce_lookahead >= 0 &&
          gap.start > earliest_allowed + announce_lookahead) {
        break;  // gaps are ordered; later ones are farther out
      }
      if (!best || gap.start < best->t_min) {
        best = Window{timeline.slice().slice_id, timeline.slice().capacity_gb,
                      gap.start, gap.length()};
      }
      break;  // only the earliest gap per slice can win
    }
  }
  return best;
}

std::vector<Variant> generate_variants(const JobAgent& agent,
                                       const Window& window,
                                       const PolicyParams& params,
                                       double duration_quantile,
                                       Tick delta_jct_max,
                                       std::int64_t iteration_index) {
  return generate_with(agent, window, params, duration_quantile, delta_jct_max,
                       iteration_index, agent.spec.strategy,
                       agent.spec.max_variants);
}

SimulationResult run_simulation(const WorkloadConfig& config, Policy policy) {
  Simulator sim(config, policy);
  return sim.run();
}

std::string serialize_trace(const std::vector<json>& trace) {
  std::string out;
  for (const auto& line : trace) {
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::string hash_trace(const std::vector<json>& trace) {
  std::uint64_t h = fnv1a64(serialize_trace(trace));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

void write_trace_file(const std::vector<json>& trace,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write trace file: " + path);
  }
  out << serialize_trace(trace);
}

std::vector<json> read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open trace file: " + path);
  }
  std::vector<json> trace;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      trace.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw AuditError("trace line " + std::to_string(line_no) +
                       ": invalid JSON: " + e.what());
    }
  }
  return trace;
}

}  // namespace jasda
