#include "sks/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sks/io.hpp"

namespace sks {

PathSummary summarize_path(const TrajectoryRecord& rec, std::size_t path_index) {
  PathSummary s;
  s.path_index = path_index;
  s.status = rec.status;
  s.final_time = rec.times.empty() ? 0.0 : rec.times.back();
  s.running_sup = rec.running_sup.empty() ? 0.0 : rec.running_sup.back();
  s.mass_final = rec.mass.empty() ? 0.0 : rec.mass.back();
  s.negativity = rec.negativity;
  s.tau_hits = rec.tau_hits;

  for (const std::vector<double>& series : rec.lp_series)
    s.lp_sup.push_back(series.empty() ? 0.0
                                      : *std::max_element(series.begin(), series.end()));

  for (double tc : rec.options.checkpoint_times) {
    double sup = 0.0;
    for (std::size_t j = 0; j < rec.times.size(); ++j) {
      if (rec.times[j] > tc + 1e-12) break;
      sup = rec.running_sup[j];
    }
    s.checkpoint_sup.push_back(sup);
  }
  return s;
}

EnsembleRunResult run_ensemble(const ScalarField& u0, const ModelParams& params,
                               const IntegratorOptions& opt, std::size_t paths,
                               std::uint64_t master_seed, int workers) {
  if (paths == 0) throw std::invalid_argument("run_ensemble: need at least one path");

  EnsembleRunResult out;
  out.records.resize(paths);
  out.stats.paths = paths;
  out.stats.summaries.resize(paths);

  unsigned n_workers =
      workers > 0 ? unsigned(workers) : std::max(1u, std::thread::hardware_concurrency());
  n_workers = unsigned(std::min<std::size_t>(n_workers, paths));

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= paths) return;
      try {
        out.records[i] = run_trajectory(u0, params, opt, SeedContext{master_seed, i});
        out.stats.summaries[i] = summarize_path(out.records[i], i);
      } catch (const std::exception&) {
        out.records[i] = TrajectoryRecord{};
        out.records[i].status = RunStatus::Failed;
        out.stats.summaries[i] = PathSummary{};
        out.stats.summaries[i].path_index = i;
        out.stats.summaries[i].status = RunStatus::Failed;
      }
    }
  };

  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  // Sequential fold in path order; the only cross-path reduction.
  for (const PathSummary& s : out.stats.summaries) {
    switch (s.status) {
      case RunStatus::Completed: ++out.stats.completed; break;
      case RunStatus::StoppedAtTau: ++out.stats.stopped; break;
      case RunStatus::Diverged: ++out.stats.diverged; break;
      case RunStatus::Failed: ++out.stats.failed; break;
    }
  }
  return out;
}

std::string ensemble_stats_csv(const EnsembleStats& stats,
                               const std::vector<double>& p_norms,
                               const std::vector<double>& checkpoints) {
  std::ostringstream out;
  out << "path,status,final_time,running_sup,mass_final,negativity";
  for (double p : p_norms) out << ",sup_lp_" << format_g17(p);
  for (double tc : checkpoints) out << ",sup_at_" << format_g17(tc);
  out << "\n";

  const auto status_name = [](RunStatus s) {
    switch (s) {
      case RunStatus::Completed: return "completed";
      case RunStatus::StoppedAtTau: return "stopped_at_tau";
      case RunStatus::Diverged: return "diverged";
      case RunStatus::Failed: return "failed";
    }
    return "unknown";
  };

  for (const PathSummary& s : stats.summaries) {
    out << s.path_index << ',' << status_name(s.status) << ',' << format_g17(s.final_time)
        << ',' << format_g17(s.running_sup) << ',' << format_g17(s.mass_final) << ','
        << format_g17(s.negativity);
    for (std::size_t i = 0; i < p_norms.size(); ++i)
      out << ',' << (i < s.lp_sup.size() ? format_g17(s.lp_sup[i]) : "0");
    for (std::size_t i = 0; i < checkpoints.size(); ++i)
      out << ',' << (i < s.checkpoint_sup.size() ? format_g17(s.checkpoint_sup[i]) : "0");
    out << "\n";
  }
  out << "# paths=" << stats.paths << " completed=" << stats.completed
      << " stopped=" << stats.stopped << " diverged=" << stats.diverged
      << " failed=" << stats.failed << "\n";
  return out.str();
}

}  // namespace sks
