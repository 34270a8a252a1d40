#pragma once

// Strict run-configuration parser.  The format is sectioned key = value text
// ('#' or ';' comments).  Recognized sections: [grid], [model], [source],
// [noise], [integrator], [picard], [ensemble], [output], [certify].  Unknown
// sections, unknown keys, duplicate keys, and malformed values are all
// line-numbered errors: a config either parses completely or not at all.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sks/grid.hpp"
#include "sks/integrator.hpp"
#include "sks/model.hpp"
#include "sks/operators.hpp"
#include "sks/picard.hpp"

namespace sks {

struct ConfigError : std::runtime_error {
  int line;
  ConfigError(int line_, const std::string& what)
      : std::runtime_error("config line " + std::to_string(line_) + ": " + what),
        line(line_) {}
};

struct RunConfig {
  // [grid]
  std::size_t nx = 64, ny = 64;
  double lx = 3.14159265358979323846, ly = 3.14159265358979323846;

  // [model]
  double chi = 1.0;
  std::string u0 = "constant:1";  // constant:c | cosine:base:amp:kx:ky |
                                  // gaussian:mass:width

  // [source]
  std::string source_kind = "zero";  // zero | logistic
  double mu = 0.0;
  std::optional<double> mu_tilde;  // domination level; default 0.75 mu

  // [noise]
  std::string noise_family = "none";  // none | linear | nonlinear
  std::vector<double> kappas;
  std::string noise_profile = "linear";  // linear | saturating
  std::vector<double> bs;
  double q = 4.0, r = 1.0;

  // [integrator]
  IntegratorOptions integrator;

  // [picard]
  PicardOptions picard;
  std::vector<double> picard_horizons;  // optional sweep over the horizon T
  std::vector<double> picard_ms;        // optional sweep over the cutoff level m

  // [ensemble]
  std::size_t paths = 1;
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = one per hardware thread
  // Optional estimator requests evaluated after the runs (each needs its
  // norm order recorded via [integrator] p_norms where applicable).
  std::optional<double> moment_p0;   // E sup |u|_{p0}^{p0} with bootstrap CI
  std::optional<double> tail_q;      // survival curve of sup |u|_q^q
  std::vector<double> tail_grid;     // thresholds R for the survival curve
  std::optional<double> gamma_exp;   // E sup |u|_inf^gamma with bootstrap CI

  // [output]
  std::string out_dir = "out";

  // [certify]
  CertOptions certify;

  std::string echo;  // the verbatim config text
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

GridPtr config_grid(const RunConfig& cfg);

/// Build the configured nonnegative initial field on the grid.
ScalarField build_initial_field(const RunConfig& cfg, const GridPtr& grid);

/// Assemble ModelParams from the config (specs not yet validated).
ModelParams build_model_params(const RunConfig& cfg);

/// Run the hypothesis validators the config's families require: the
/// linear-noise envelope for a linear family, the exponent admissibility
/// check for a norm-coupled family, and source domination for a logistic
/// source.  On success the params' validated flags are set; on failure the
/// message names the violated inequality.
struct GateOutcome {
  bool ok = true;
  std::string message;
  std::optional<NoiseCertificate> linear_cert;
  std::optional<SourceCertificate> source_cert;
};
GateOutcome validate_config_model(ModelParams& params, const RunConfig& cfg);

}  // namespace sks
