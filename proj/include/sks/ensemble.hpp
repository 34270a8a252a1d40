#pragma once

// Deterministic parallel Monte Carlo over trajectory paths.  Each path owns a
// disjoint seed context (master seed, path index) and is simulated
// independently; per-path results land in pre-sized slots and a sequential
// fold in path-index order produces the aggregate, so the output is
// bit-identical for any worker count.  A path that diverges or throws is a
// first-class result, never an abort.

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "sks/integrator.hpp"

namespace sks {

struct PathSummary {
  std::size_t path_index = 0;
  RunStatus status = RunStatus::Completed;
  double final_time = 0.0;
  double running_sup = 0.0;         // sup over the whole path of |u|_inf
  double mass_final = 0.0;
  double negativity = 0.0;          // worst negative excursion before clipping
  std::vector<double> lp_sup;       // sup over time, one per configured p
  std::vector<double> checkpoint_sup;  // running sup at each checkpoint time
  std::map<double, double> tau_hits;
};

/// Prefix-sup summary of one record (checkpoints from opt.checkpoint_times).
PathSummary summarize_path(const TrajectoryRecord& rec, std::size_t path_index);

struct EnsembleStats {
  std::size_t paths = 0;
  std::size_t completed = 0, stopped = 0, diverged = 0, failed = 0;
  std::vector<PathSummary> summaries;  // ordered by path index
};

struct EnsembleRunResult {
  EnsembleStats stats;
  std::vector<TrajectoryRecord> records;  // ordered by path index
};

/// Run `paths` independent trajectories from u0 with seed contexts
/// (master_seed, 0..paths-1).  workers <= 0 means one per hardware thread.
EnsembleRunResult run_ensemble(const ScalarField& u0, const ModelParams& params,
                               const IntegratorOptions& opt, std::size_t paths,
                               std::uint64_t master_seed, int workers);

/// Render the stats as deterministic CSV text (one row per path).
std::string ensemble_stats_csv(const EnsembleStats& stats,
                               const std::vector<double>& p_norms,
                               const std::vector<double>& checkpoints);

}  // namespace sks
