#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "sparkdet/cli.hpp"

namespace sparkdet::cli {

int exit_code_for(VerdictKind k) {
  switch (k) {
    case VerdictKind::deterministic:
      return exit_ok;
    case VerdictKind::non_deterministic:
      return exit_nondeterministic;
    case VerdictKind::unknown:
      return exit_inconclusive;
  }
  return exit_inconclusive;
}

TrialRun run_trials(std::uint64_t master, std::size_t trials,
                    const std::function<Value(ChaosSource&, std::size_t)>& trial, std::size_t workers) {
  TrialRun run;
  ChaosSource root(master);
  run.seeds.reserve(trials);
  for (std::size_t i = 0; i < trials; ++i) run.seeds.push_back(root.split().seed());
  run.outputs.resize(trials);

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(trials, 1));

  std::atomic<std::size_t> next{0};
  std::mutex failure_mu;
  std::size_t failed_at = trials;
  std::exception_ptr failure;
  auto work = [&] {
    for (std::size_t i = next++; i < trials; i = next++) {
      try {
        ChaosSource chaos(run.seeds[i]);
        run.outputs[i] = trial(chaos, i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return run;
}

std::vector<std::pair<Value, std::size_t>> census(const std::vector<Value>& outputs) {
  std::map<Value, std::size_t> counts;
  for (const auto& v : outputs) ++counts[v];
  return {counts.begin(), counts.end()};
}

Json stable_json(const RunReport& r) {
  Json doc;
  doc["schema"] = kReportSchema;
  doc["command"] = r.command;
  doc["seed"] = r.seed;
  if (!r.trials.seeds.empty()) {
    Json trials = Json::array();
    for (std::size_t i = 0; i < r.trials.seeds.size(); ++i) {
      trials.push_back(Json{{"trial", i}, {"seed", r.trials.seeds[i]}, {"output", to_json(r.trials.outputs[i])}});
    }
    doc["trials"] = std::move(trials);
    Json cs = Json::array();
    for (const auto& [v, n] : census(r.trials.outputs)) cs.push_back(Json{{"value", to_json(v)}, {"count", n}});
    doc["census"] = std::move(cs);
  }
  Json verdicts = Json::array();
  for (const auto& v : r.verdicts) verdicts.push_back(to_json(v));
  doc["verdicts"] = std::move(verdicts);
  doc["details"] = r.details;
  return doc;
}

Json to_json(const RunReport& r) {
  Json doc = stable_json(r);
  doc[kTimingField] = r.wall_time_ms;
  return doc;
}

std::string render(const RunReport& r) { return to_json(r).dump(2) + "\n"; }

}  // namespace sparkdet::cli
