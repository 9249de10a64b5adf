#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "jasda/engine.hpp"
#include "jasda/errors.hpp"

namespace jasda {

using nlohmann::json;

namespace {

struct JobAccount {
  Tick arrival = 0;
  Tick total_work = 0;
  Tick credited = 0;
  Tick completion = -1;
  std::vector<Tick> commit_times;
  std::vector<double> rho_trajectory;
};

struct TraceView {
  json header;
  WorkloadConfig config;
  std::string policy;
  std::vector<json> iterations;
};

TraceView open_trace(const std::vector<json>& trace) {
  if (trace.empty() || !trace.front().is_object() ||
      trace.front().value("type", "") != "header") {
    throw AuditError("trace: missing header line");
  }
  TraceView view;
  view.header = trace.front();
  view.policy = view.header.at("policy").get<std::string>();
  view.config = parse_config(view.header.at("config").dump());
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const std::string type = trace[i].value("type", "");
    if (type == "iteration") {
      view.iterations.push_back(trace[i]);
    } else if (type != "metrics") {
      throw AuditError("trace: unexpected line type '" + type + "'");
    }
  }
  return view;
}

json strip_volatile(json metrics) {
  metrics.erase("trace_hash");
  return metrics;
}

}  // namespace

json compute_metrics(const std::vector<json>& trace) {
  TraceView view = open_trace(trace);
  const WorkloadConfig& config = view.config;
  const Tick horizon = config.horizon;

  std::map<std::string, JobAccount> accounts;
  for (const auto& job : config.jobs) {
    JobAccount acc;
    acc.arrival = job.arrival;
    acc.total_work = job.total_work;
    accounts[job.job_id] = acc;
  }

  std::map<std::string, std::vector<std::pair<Tick, Tick>>> slice_intervals;
  for (const auto& slice : config.slices) {
    slice_intervals[slice.slice_id] = {};
  }

  Tick busy = 0;
  std::int64_t windows_cleared = 0;
  std::int64_t dominance_violations = 0;
  for (const auto& event : view.iterations) {
    Tick event_now = event.at("now").get<Tick>();
    for (const auto& commit : event.at("commits")) {
      Tick start = commit.at("start").get<Tick>();
      Tick end = commit.at("end").get<Tick>();
      Tick lo = std::max<Tick>(start, 0);
      Tick hi = std::min<Tick>(end, horizon);
      if (hi > lo) busy += hi - lo;
      slice_intervals[commit.at("slice_id").get<std::string>()].emplace_back(
          start, end);
      accounts.at(commit.at("job_id").get<std::string>())
          .commit_times.push_back(event_now);
    }
    if (!event.at("selected").empty()) {
      ++windows_cleared;
      double total = event.at("total_score").get<double>();
      double best_single = event.at("best_single_score").get<double>();
      if (total < best_single - 1e-12) ++dominance_violations;
    }
    for (const auto& verification : event.at("verifications")) {
      JobAccount& acc =
          accounts.at(verification.at("job_id").get<std::string>());
      acc.credited += verification.at("credited").get<Tick>();
      acc.rho_trajectory.push_back(verification.at("rho_after").get<double>());
      if (acc.credited >= acc.total_work && acc.completion < 0) {
        acc.completion = verification.at("actual_end").get<Tick>();
      }
    }
  }

  double utilization =
      static_cast<double>(busy) /
      (static_cast<double>(horizon) * static_cast<double>(config.slices.size()));

  std::vector<double> jcts;
  std::vector<double> max_waits;
  double rho_sum = 0.0;
  std::int64_t completed = 0;
  json per_job = json::object();
  for (auto& [job_id, acc] : accounts) {
    if (acc.completion >= 0) {
      jcts.push_back(static_cast<double>(acc.completion - acc.arrival));
      ++completed;
    }
    std::vector<Tick> anchors;
    anchors.push_back(acc.arrival);
    std::sort(acc.commit_times.begin(), acc.commit_times.end());
    for (Tick t : acc.commit_times) anchors.push_back(t);
    anchors.push_back(acc.completion >= 0 ? acc.completion : horizon);
    Tick max_gap = 0;
    for (std::size_t i = 1; i < anchors.size(); ++i) {
      max_gap = std::max(max_gap, anchors[i] - anchors[i - 1]);
    }
    max_waits.push_back(static_cast<double>(max_gap));
    double final_rho =
        acc.rho_trajectory.empty() ? 1.0 : acc.rho_trajectory.back();
    rho_sum += final_rho;
    per_job[job_id] = {
        {"arrival", acc.arrival},
        {"completion", acc.completion >= 0 ? json(acc.completion) : json()},
        {"jct", acc.completion >= 0 ? json(acc.completion - acc.arrival)
                                    : json()},
        {"max_wait", max_gap},
        {"final_rho", final_rho},
        {"rho_trajectory", acc.rho_trajectory}};
  }

  std::sort(jcts.begin(), jcts.end());
  auto mean_of = [](const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  double median_jct = jcts.empty() ? 0.0 : jcts[(jcts.size() - 1) / 2];
  double p95_jct = 0.0;
  if (!jcts.empty()) {
    std::size_t idx = static_cast<std::size_t>(
        std::ceil(0.95 * static_cast<double>(jcts.size())));
    p95_jct = jcts[std::min(idx > 0 ? idx - 1 : 0, jcts.size() - 1)];
  }
  double max_wait =
      max_waits.empty() ? 0.0 : *std::max_element(max_waits.begin(),
                                                  max_waits.end());

  // Fragmentation: idle gaps too short to ever be announced again.
  std::int64_t frag_count = 0;
  Tick frag_ticks = 0;
  for (auto& [slice_id, intervals] : slice_intervals) {
    std::sort(intervals.begin(), intervals.end());
    Tick cursor = 0;
    for (const auto& [start, end] : intervals) {
      if (start > cursor) {
        Tick len = std::min(start, horizon) - cursor;
        if (len > 0 && len < config.policy.tau_min) {
          ++frag_count;
          frag_ticks += len;
        }
      }
      cursor = std::max(cursor, end);
    }
    if (cursor < horizon) {
      Tick len = horizon - cursor;
      if (len < config.policy.tau_min) {
        ++frag_count;
        frag_ticks += len;
      }
    }
  }

  double mean_rho = accounts.empty()
                        ? 1.0
                        : rho_sum / static_cast<double>(accounts.size());

  return {{"type", "metrics"},
          {"schema_version", 1},
          {"policy", view.policy},
          {"seed", config.seed},
          {"horizon", horizon},
          {"n_slices", config.slices.size()},
          {"n_jobs", config.jobs.size()},
          {"jobs_completed", completed},
          {"utilization", utilization},
          {"mean_jct", mean_of(jcts)},
          {"median_jct", median_jct},
          {"p95_jct", p95_jct},
          {"mean_wait", mean_of(max_waits)},
          {"max_wait", max_wait},
          {"frag_count", frag_count},
          {"frag_ticks", frag_ticks},
          {"mean_rho", mean_rho},
          {"windows_cleared", windows_cleared},
          {"dominance_violations", dominance_violations},
          {"per_job", per_job}};
}

void audit_trace(const std::vector<json>& trace) {
  TraceView view = open_trace(trace);
  const WorkloadConfig& config = view.config;
  const bool jasda_policy = view.policy == "jasda";

  std::map<std::string, SliceTimeline> timelines;
  for (const auto& slice : config.slices) {
    timelines.emplace(slice.slice_id, SliceTimeline(slice));
  }
  std::map<std::string, const JobSpec*> jobs;
  for (const auto& job : config.jobs) {
    jobs[job.job_id] = &job;
  }

  for (const auto& event : view.iterations) {
    const std::string at = "iteration " +
                           std::to_string(event.at("index").get<std::int64_t>());

    std::map<std::string, json> bids_by_id;
    for (const auto& bid : event.at("bids")) {
      bids_by_id[bid.at("variant_id").get<std::string>()] = bid;

      double h_tilde = bid.at("h_tilde").get<double>();
      double h_hat = bid.at("h_hat").get<double>();
      double f_sys = bid.at("f_sys_tilde").get<double>();
      double score = bid.at("score").get<double>();
      for (double x : {h_tilde, h_hat, f_sys, score}) {
        if (x < -1e-12 || x > 1.0 + 1e-12) {
          throw AuditError(at + ": score field out of [0,1]");
        }
      }
      double expect =
          config.policy.lambda * h_hat + (1.0 - config.policy.lambda) * f_sys;
      if (std::fabs(score - expect) > 1e-12) {
        throw AuditError(at + ": composite score inconsistent for " +
                         bid.at("variant_id").get<std::string>());
      }
      if (!event.at("window").is_null()) {
        Tick t_start = bid.at("t_start").get<Tick>();
        Tick pd = bid.at("predicted_duration").get<Tick>();
        Tick w_start = event.at("window").at("t_min").get<Tick>();
        Tick w_end = w_start + event.at("window").at("delta_t").get<Tick>();
        if (t_start < w_start || t_start + pd > w_end) {
          throw AuditError(at + ": bid outside the announced window");
        }
        if (pd < config.policy.tau_min) {
          throw AuditError(at + ": bid shorter than tau_min");
        }
      }
    }

    double selected_sum = 0.0;
    for (const auto& id : event.at("selected")) {
      auto it = bids_by_id.find(id.get<std::string>());
      if (it == bids_by_id.end()) {
        throw AuditError(at + ": selected variant not among bids");
      }
      selected_sum += it->second.at("score").get<double>();
    }
    if (std::fabs(selected_sum - event.at("total_score").get<double>()) >
        1e-9) {
      throw AuditError(at + ": total_score does not match selected bids");
    }
    if (jasda_policy && !event.at("selected").empty()) {
      if (event.at("total_score").get<double>() <
          event.at("best_single_score").get<double>() - 1e-12) {
        throw AuditError(at + ": cleared total below best single bid");
      }
    }

    if (event.at("commits").size() != event.at("selected").size()) {
      throw AuditError(at + ": commits do not match selection");
    }
    for (const auto& commit : event.at("commits")) {
      const std::string id = commit.at("variant_id").get<std::string>();
      auto it = bids_by_id.find(id);
      if (it == bids_by_id.end()) {
        throw AuditError(at + ": committed variant not among bids");
      }
      if (!jobs.count(commit.at("job_id").get<std::string>())) {
        throw AuditError(at + ": commit for unknown job");
      }
      Commitment c;
      c.variant_id = id;
      c.job_id = commit.at("job_id").get<std::string>();
      c.slice_id = commit.at("slice_id").get<std::string>();
      c.start = commit.at("start").get<Tick>();
      c.end = commit.at("end").get<Tick>();
      if (c.start != it->second.at("t_start").get<Tick>() ||
          c.end != it->second.at("t_start").get<Tick>() +
                       it->second.at("predicted_duration").get<Tick>()) {
        throw AuditError(at + ": commit interval differs from its bid");
      }
      auto timeline = timelines.find(c.slice_id);
      if (timeline == timelines.end()) {
        throw AuditError(at + ": commit on unknown slice " + c.slice_id);
      }
      try {
        timeline->second.commit(c);
      } catch (const std::logic_error& e) {
        throw AuditError(at + ": " + e.what());
      }

      // Safety recheck straight from the recorded profile.
      Fmp fmp;
      const json& fj = it->second.at("fmp");
      fmp.duration_mean = fj.at("duration_mean").get<double>();
      fmp.duration_std = fj.at("duration_std").get<double>();
      for (const auto& seg : fj.at("segments")) {
        fmp.segments.push_back(FmpSegment{seg.at("fraction").get<double>(),
                                          seg.at("mem_mean").get<double>(),
                                          seg.at("mem_std").get<double>()});
      }
      double capacity = event.at("window").at("capacity").get<double>();
      if (!is_safe(fmp, capacity, c.end - c.start, config.policy.theta)) {
        throw AuditError(at + ": committed variant fails the safety bound");
      }
    }

    for (const auto& verification : event.at("verifications")) {
      const std::string job_id = verification.at("job_id").get<std::string>();
      auto job = jobs.find(job_id);
      if (job == jobs.end()) {
        throw AuditError(at + ": verification for unknown job " + job_id);
      }
      std::vector<double> errors =
          verification.at("per_feature_error").get<std::vector<double>>();
      std::vector<bool> observable(errors.size(), true);
      if (errors.size() == kJobFeatureCount && !job->second->qos_deadline) {
        observable[kFeatureQos] = false;
      }
      double expect = variant_error(
          errors,
          renormalize_weights(config.policy.verification_weights, observable));
      if (std::fabs(expect - verification.at("variant_error").get<double>()) >
          1e-12) {
        throw AuditError(at + ": variant_error inconsistent with weights");
      }
    }
  }

  // The trace must reproduce its own metrics line, when present.
  for (const auto& line : trace) {
    if (line.value("type", "") == "metrics") {
      json recomputed = strip_volatile(compute_metrics(trace));
      json stored = strip_volatile(line);
      if (recomputed.dump() != stored.dump()) {
        throw AuditError("metrics line does not match recomputation");
      }
    }
  }
}

}  // namespace jasda
