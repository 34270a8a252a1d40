#include "sks/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sks {

namespace {

void put_u32_le(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(char((v >> (8 * b)) & 0xffu));
}

void put_f64_le(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  for (int b = 0; b < 8; ++b) out.push_back(char((bits >> (8 * b)) & 0xffu));
}

std::uint32_t get_u32_le(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
         std::uint32_t(p[3]) << 24;
}

double get_f64_le(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int b = 7; b >= 0; --b) bits = (bits << 8) | p[b];
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

}  // namespace

void write_file(const std::string& path, const std::string& bytes) {
  const std::filesystem::path fp(path);
  if (fp.has_parent_path()) std::filesystem::create_directories(fp.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(bytes.data(), std::streamsize(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_snapshot(const std::string& path, const ScalarField& f, double t,
                    std::uint32_t flags) {
  std::string bytes;
  bytes.reserve(16 + 8 * (f.values.size() + 4));
  bytes += "KSF1";
  put_u32_le(bytes, std::uint32_t(f.grid->nx()));
  put_u32_le(bytes, std::uint32_t(f.grid->ny()));
  put_u32_le(bytes, flags);
  for (double v : f.values) put_f64_le(bytes, v);
  put_f64_le(bytes, f.grid->lx());
  put_f64_le(bytes, f.grid->ly());
  put_f64_le(bytes, t);
  put_f64_le(bytes, 0.0);
  write_file(path, bytes);
}

SnapshotData read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 16 || bytes.compare(0, 4, "KSF1") != 0)
    throw std::runtime_error("not a KSF1 snapshot: " + path);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());

  SnapshotData snap;
  snap.nx = get_u32_le(p + 4);
  snap.ny = get_u32_le(p + 8);
  snap.flags = get_u32_le(p + 12);
  const std::size_t n = std::size_t(snap.nx) * snap.ny;
  if (bytes.size() != 16 + 8 * (n + 4))
    throw std::runtime_error("snapshot size mismatch: " + path);
  snap.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) snap.values[i] = get_f64_le(p + 16 + 8 * i);
  const unsigned char* tr = p + 16 + 8 * n;
  snap.lx = get_f64_le(tr);
  snap.ly = get_f64_le(tr + 8);
  snap.t = get_f64_le(tr + 16);
  snap.reserved = get_f64_le(tr + 24);
  return snap;
}

ScalarField snapshot_to_field(const SnapshotData& snap) {
  GridPtr grid = build_grid(snap.nx, snap.ny, snap.lx, snap.ly);
  ScalarField f(grid, snap.values);
  f.diverged = (snap.flags & kSnapshotFlagDiverged) != 0;
  return f;
}

void write_series_csv(const std::string& path, const TrajectoryRecord& rec) {
  std::ostringstream out;
  out << "t,sup_norm,mass,min_value";
  for (double p : rec.options.p_norms) out << ",lp_" << format_g17(p);
  out << "\n";
  for (std::size_t j = 0; j < rec.times.size(); ++j) {
    out << format_g17(rec.times[j]) << ',' << format_g17(rec.sup_norm[j]) << ','
        << format_g17(rec.mass[j]) << ',' << format_g17(rec.min_value[j]);
    for (const std::vector<double>& series : rec.lp_series)
      out << ',' << format_g17(series[j]);
    out << "\n";
  }
  write_file(path, out.str());
}

void write_cert_csv(const std::string& path, const std::vector<CertRow>& rows) {
  std::ostringstream out;
  out << "estimate_id,p,beta,t,max_ratio,trials\n";
  for (const CertRow& r : rows) {
    out << r.estimate_id << ',';
    if (std::isinf(r.p))
      out << "inf";
    else
      out << format_g17(r.p);
    out << ',' << format_g17(r.beta) << ',' << format_g17(r.t) << ','
        << format_g17(r.max_ratio) << ',' << r.trials << "\n";
  }
  write_file(path, out.str());
}

void write_picard_csv(const std::string& path, const PicardReport& rep) {
  std::ostringstream out;
  out << "iter,diff_sup,ratio\n";
  for (std::size_t k = 0; k < rep.diff_sup.size(); ++k) {
    out << (k + 1) << ',' << format_g17(rep.diff_sup[k]) << ',';
    if (k >= 1 && k - 1 < rep.ratios.size()) out << format_g17(rep.ratios[k - 1]);
    out << "\n";
  }
  write_file(path, out.str());
}

void write_ledger_csv(const std::string& path, const ItoLedger& led) {
  std::ostringstream out;
  out << "t,lhs_norm,dissipation,chemo,source,martingale,quadratic,residual\n";
  for (std::size_t j = 0; j < led.times.size(); ++j)
    out << format_g17(led.times[j]) << ',' << format_g17(led.lhs_norm[j]) << ','
        << format_g17(led.dissipation[j]) << ',' << format_g17(led.chemo_term[j]) << ','
        << format_g17(led.source_term[j]) << ',' << format_g17(led.martingale_term[j])
        << ',' << format_g17(led.quadratic_term[j]) << ',' << format_g17(led.residual[j])
        << "\n";
  write_file(path, out.str());
}

void write_manifest(const std::string& path, const std::string& config_echo,
                    std::uint64_t master_seed, const Grid2D& grid,
                    const std::string& extra) {
  std::ostringstream out;
  out << "format: sks-manifest 1\n";
  out << "code_version: sks 1.0.0\n";
  std::time_t now = std::time(nullptr);
  char stamp[64];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  out << "timestamp: " << stamp << "\n";
  out << "seed: " << master_seed << "\n";
  out << "grid: " << grid.nx() << ' ' << grid.ny() << ' ' << format_g17(grid.lx()) << ' '
      << format_g17(grid.ly()) << "\n";
  if (!extra.empty()) out << extra << (extra.back() == '\n' ? "" : "\n");
  out << "config:\n" << config_echo;
  if (config_echo.empty() || config_echo.back() != '\n') out << "\n";
  write_file(path, out.str());
}

}  // namespace sks
