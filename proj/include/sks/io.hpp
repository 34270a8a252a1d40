#pragma once

// File formats: binary field snapshots, CSV reports, and the run manifest.
// Snapshots are bit-exact across platforms (explicit little-endian layout);
// CSV floats are printed with %.17g so a round trip preserves every bit of a
// double.  Timestamps appear only in the manifest, on a line of their own, so
// byte comparisons can exclude them.

#include <cstdint>
#include <string>
#include <vector>

#include "sks/diagnostics.hpp"
#include "sks/grid.hpp"
#include "sks/integrator.hpp"
#include "sks/operators.hpp"
#include "sks/picard.hpp"

namespace sks {

/// Shortest-exact decimal rendering used by every CSV writer (%.17g).
std::string format_g17(double v);

/// Write bytes to path, creating parent directories as needed.
void write_file(const std::string& path, const std::string& bytes);

/// Read an entire file as bytes; throws on failure.
std::string read_file(const std::string& path);

// --- field snapshots -------------------------------------------------------
// Layout: magic "KSF1", u32 nx, u32 ny, u32 flags (bit 0 = diverged); then
// nx*ny little-endian f64 row-major with y as the slow index (value(i,j) at
// word j*nx+i); trailer of 4 little-endian f64: lx, ly, t, reserved(0).

constexpr std::uint32_t kSnapshotFlagDiverged = 1u;

struct SnapshotData {
  std::uint32_t nx = 0, ny = 0, flags = 0;
  std::vector<double> values;
  double lx = 0.0, ly = 0.0, t = 0.0, reserved = 0.0;
};

void write_snapshot(const std::string& path, const ScalarField& f, double t,
                    std::uint32_t flags = 0);
SnapshotData read_snapshot(const std::string& path);
/// Rebuild the field (and its grid) from a decoded snapshot.
ScalarField snapshot_to_field(const SnapshotData& snap);

// --- CSV reports -----------------------------------------------------------

/// Columns: t, sup_norm, mass, min_value, then one lp_<p> column per
/// configured norm.
void write_series_csv(const std::string& path, const TrajectoryRecord& rec);

/// Columns: estimate_id, p, beta, t, max_ratio, trials (p = inf allowed).
void write_cert_csv(const std::string& path, const std::vector<CertRow>& rows);

/// Columns: iter, diff_sup, ratio (ratio empty on the first row).
void write_picard_csv(const std::string& path, const PicardReport& rep);

/// Columns: t, lhs_norm, dissipation, chemo, source, martingale, quadratic,
/// residual.
void write_ledger_csv(const std::string& path, const ItoLedger& led);

// --- run manifest ----------------------------------------------------------

/// Plain-text manifest: code version, timestamp (own line), seed, grid, and
/// the verbatim config text.  Everything except the timestamp line is a pure
/// function of the run inputs.
void write_manifest(const std::string& path, const std::string& config_echo,
                    std::uint64_t master_seed, const Grid2D& grid,
                    const std::string& extra = "");

}  // namespace sks
