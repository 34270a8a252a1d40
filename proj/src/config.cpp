#include "sks/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace sks {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& v, int line) {
  const std::string t = trim(v);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    const double d = std::stod(t, &pos);
    if (pos != t.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(line, "expected a real number, got '" + t + "'");
  }
}

long long parse_int(const std::string& v, int line) {
  const std::string t = trim(v);
  try {
    std::size_t pos = 0;
    const long long n = std::stoll(t, &pos);
    if (pos != t.size()) throw std::invalid_argument("trailing");
    return n;
  } catch (const std::exception&) {
    throw ConfigError(line, "expected an integer, got '" + t + "'");
  }
}

std::uint64_t parse_u64(const std::string& v, int line) {
  const std::string t = trim(v);
  try {
    std::size_t pos = 0;
    const unsigned long long n = std::stoull(t, &pos);
    if (pos != t.size()) throw std::invalid_argument("trailing");
    return n;
  } catch (const std::exception&) {
    throw ConfigError(line, "expected a nonnegative integer, got '" + t + "'");
  }
}

bool parse_bool(const std::string& v, int line) {
  const std::string t = trim(v);
  if (t == "true" || t == "on" || t == "1") return true;
  if (t == "false" || t == "off" || t == "0") return false;
  throw ConfigError(line, "expected true/false, got '" + t + "'");
}

std::vector<double> parse_list(const std::string& v, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) throw ConfigError(line, "empty entry in list");
    out.push_back(parse_double(item, line));
  }
  if (out.empty()) throw ConfigError(line, "empty list");
  return out;
}

std::vector<std::string> split_colon(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  return parts;
}

void check_u0_spec(const std::string& spec, int line) {
  const std::vector<std::string> parts = split_colon(spec);
  const std::string& kind = parts.empty() ? spec : parts[0];
  if (kind == "constant") {
    if (parts.size() != 2) throw ConfigError(line, "u0 constant wants constant:c");
    parse_double(parts[1], line);
  } else if (kind == "cosine") {
    if (parts.size() != 5) throw ConfigError(line, "u0 cosine wants cosine:base:amp:kx:ky");
    for (std::size_t i = 1; i < 5; ++i) parse_double(parts[i], line);
  } else if (kind == "gaussian") {
    if (parts.size() != 3) throw ConfigError(line, "u0 gaussian wants gaussian:mass:width");
    if (!(parse_double(parts[1], line) > 0.0) || !(parse_double(parts[2], line) > 0.0))
      throw ConfigError(line, "u0 gaussian mass and width must be positive");
  } else {
    throw ConfigError(line, "unknown u0 kind '" + kind + "'");
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  // The [certify] section only tunes scalars; the measurement grids (t, p,
  // beta) always come from the standard envelope-certification sweep.
  cfg.certify = default_cert_options();
  cfg.echo = text;

  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::set<std::string> seen;
  int line = 0;

  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;

    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      static const std::set<std::string> known = {"grid",   "model",    "source",
                                                  "noise",  "integrator", "picard",
                                                  "ensemble", "output", "certify"};
      if (!known.count(section)) throw ConfigError(line, "unknown section [" + section + "]");
      continue;
    }

    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "empty key");
    if (section.empty()) throw ConfigError(line, "key '" + key + "' before any section");
    if (!seen.insert(section + "." + key).second)
      throw ConfigError(line, "duplicate key '" + key + "' in [" + section + "]");

    if (section == "grid") {
      if (key == "nx")
        cfg.nx = std::size_t(parse_int(val, line));
      else if (key == "ny")
        cfg.ny = std::size_t(parse_int(val, line));
      else if (key == "lx")
        cfg.lx = parse_double(val, line);
      else if (key == "ly")
        cfg.ly = parse_double(val, line);
      else
        throw ConfigError(line, "unknown key '" + key + "' in [grid]");
    } else if (section == "model") {
      if (key == "chi")
        cfg.chi = parse_double(val, line);
      else if (key == "u0") {
        check_u0_spec(val, line);
        cfg.u0 = val;
      } else
        throw ConfigError(line, "unknown key '" + key + "' in [model]");
    } else if (section == "source") {
      if (key == "kind") {
        if (val != "zero" && val != "logistic")
          throw ConfigError(line, "source kind must be zero or logistic");
        cfg.source_kind = val;
      } else if (key == "mu")
        cfg.mu = parse_double(val, line);
      else if (key == "mu_tilde")
        cfg.mu_tilde = parse_double(val, line);
      else
        throw ConfigError(line, "unknown key '" + key + "' in [source]");
    } else if (section == "noise") {
      if (key == "family") {
        if (val != "none" && val != "linear" && val != "nonlinear")
          throw ConfigError(line, "noise family must be none, linear, or nonlinear");
        cfg.noise_family = val;
      } else if (key == "kappas")
        cfg.kappas = parse_list(val, line);
      else if (key == "profile") {
        if (val != "linear" && val != "saturating")
          throw ConfigError(line, "noise profile must be linear or saturating");
        cfg.noise_profile = val;
      } else if (key == "bs")
        cfg.bs = parse_list(val, line);
      else if (key == "q")
        cfg.q = parse_double(val, line);
      else if (key == "r")
        cfg.r = parse_double(val, line);
      else
        throw ConfigError(line, "unknown key '" + key + "' in [noise]");
    } else if (section == "integrator") {
      if (key == "dt")
        cfg.integrator.dt = parse_double(val, line);
      else if (key == "T")
        cfg.integrator.T = parse_double(val, line);
      else if (key == "nonneg") {
        if (val == "off")
          cfg.integrator.nonneg = NonnegPolicy::Off;
        else if (val == "clip")
          cfg.integrator.nonneg = NonnegPolicy::Clip;
        else
          throw ConfigError(line, "nonneg must be off or clip");
      } else if (key == "ceiling")
        cfg.integrator.ceiling = parse_double(val, line);
      else if (key == "cutoff_m")
        cfg.integrator.cutoff_m = parse_double(val, line);
      else if (key == "cutoff_noise")
        cfg.integrator.cutoff_noise = parse_bool(val, line);
      else if (key == "stop_m")
        cfg.integrator.stop_m = parse_double(val, line);
      else if (key == "p_norms")
        cfg.integrator.p_norms = parse_list(val, line);
      else if (key == "tau_thresholds")
        cfg.integrator.tau_thresholds = parse_list(val, line);
      else if (key == "snapshot_times")
        cfg.integrator.snapshot_times = parse_list(val, line);
      else if (key == "checkpoint_times")
        cfg.integrator.checkpoint_times = parse_list(val, line);
      else if (key == "store_fields")
        cfg.integrator.store_fields = parse_bool(val, line);
      else if (key == "increment_split")
        cfg.integrator.increment_split = int(parse_int(val, line));
      else
        throw ConfigError(line, "unknown key '" + key + "' in [integrator]");
    } else if (section == "picard") {
      if (key == "horizon")
        cfg.picard.horizon = parse_double(val, line);
      else if (key == "dt")
        cfg.picard.dt = parse_double(val, line);
      else if (key == "m")
        cfg.picard.cutoff_m = parse_double(val, line);
      else if (key == "tol")
        cfg.picard.tol = parse_double(val, line);
      else if (key == "max_iter")
        cfg.picard.max_iter = std::size_t(parse_int(val, line));
      else if (key == "cutoff_noise")
        cfg.picard.cutoff_noise = parse_bool(val, line);
      else if (key == "horizons")
        cfg.picard_horizons = parse_list(val, line);
      else if (key == "ms")
        cfg.picard_ms = parse_list(val, line);
      else
        throw ConfigError(line, "unknown key '" + key + "' in [picard]");
    } else if (section == "ensemble") {
      if (key == "paths")
        cfg.paths = std::size_t(parse_int(val, line));
      else if (key == "seed")
        cfg.seed = parse_u64(val, line);
      else if (key == "workers")
        cfg.workers = int(parse_int(val, line));
      else if (key == "moment_p0")
        cfg.moment_p0 = parse_double(val, line);
      else if (key == "tail_q")
        cfg.tail_q = parse_double(val, line);
      else if (key == "tail_grid")
        cfg.tail_grid = parse_list(val, line);
      else if (key == "gamma")
        cfg.gamma_exp = parse_double(val, line);
      else
        throw ConfigError(line, "unknown key '" + key + "' in [ensemble]");
    } else if (section == "output") {
      if (key == "dir")
        cfg.out_dir = val;
      else
        throw ConfigError(line, "unknown key '" + key + "' in [output]");
    } else if (section == "certify") {
      if (key == "trials")
        cfg.certify.trials = int(parse_int(val, line));
      else if (key == "seed")
        cfg.certify.seed = parse_u64(val, line);
      else if (key == "epsilon")
        cfg.certify.epsilon = parse_double(val, line);
      else if (key == "lambda0")
        cfg.certify.lambda0 = parse_double(val, line);
      else
        throw ConfigError(line, "unknown key '" + key + "' in [certify]");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

GridPtr config_grid(const RunConfig& cfg) { return build_grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly); }

ScalarField build_initial_field(const RunConfig& cfg, const GridPtr& grid) {
  const std::vector<std::string> parts = split_colon(cfg.u0);
  ScalarField u(grid);
  const double pi = 3.14159265358979323846;

  if (parts[0] == "constant") {
    const double c = std::stod(parts[1]);
    if (c < 0.0) throw std::invalid_argument("u0 constant must be nonnegative");
    std::fill(u.values.begin(), u.values.end(), c);
  } else if (parts[0] == "cosine") {
    const double base = std::stod(parts[1]);
    const double amp = std::stod(parts[2]);
    const double kx = std::stod(parts[3]);
    const double ky = std::stod(parts[4]);
    for (std::size_t j = 0; j < grid->ny(); ++j)
      for (std::size_t i = 0; i < grid->nx(); ++i)
        u.values[j * grid->nx() + i] =
            base + amp * std::cos(kx * pi * grid->x(i) / grid->lx()) *
                       std::cos(ky * pi * grid->y(j) / grid->ly());
    if (std::fabs(amp) > base)
      throw std::invalid_argument("u0 cosine must stay nonnegative: |amp| <= base");
  } else {  // gaussian
    const double mass = std::stod(parts[1]);
    const double width = std::stod(parts[2]);
    const double cx = 0.5 * grid->lx(), cy = 0.5 * grid->ly();
    double sum = 0.0;
    for (std::size_t j = 0; j < grid->ny(); ++j)
      for (std::size_t i = 0; i < grid->nx(); ++i) {
        const double dx = grid->x(i) - cx, dy = grid->y(j) - cy;
        const double b = std::exp(-(dx * dx + dy * dy) / (2.0 * width * width));
        u.values[j * grid->nx() + i] = b;
        sum += b;
      }
    const double scale = mass / (sum * grid->cell_area());
    for (double& v : u.values) v *= scale;
  }
  return u;
}

ModelParams build_model_params(const RunConfig& cfg) {
  ModelParams params;
  params.chi = cfg.chi;
  params.source = cfg.source_kind == "logistic" ? logistic_source(cfg.mu) : zero_source();

  if (cfg.noise_family == "linear") {
    LinearNoiseSpec spec;
    spec.kappas = cfg.kappas;
    if (cfg.noise_profile == "saturating") {
      spec.profile = LinearNoiseSpec::Profile::Saturating;
      spec.profile_label = "saturating";
    }
    params.linear_noise = std::move(spec);
  } else if (cfg.noise_family == "nonlinear") {
    NonlinearNoiseSpec spec;
    spec.bs = cfg.bs;
    spec.q = cfg.q;
    spec.r = cfg.r;
    params.nonlinear_noise = std::move(spec);
  }
  return params;
}

GateOutcome validate_config_model(ModelParams& params, const RunConfig& cfg) {
  GateOutcome out;

  if (params.linear_noise) {
    const NoiseCertificate cert = validate_linear_noise(*params.linear_noise);
    out.linear_cert = cert;
    if (!cert.ok) {
      out.ok = false;
      out.message = "linear-growth noise check failed: " + cert.message;
      return out;
    }
  }
  if (params.nonlinear_noise) {
    const AdmissibilityReport rep =
        validate_nonlinear_noise(*params.nonlinear_noise, params.source);
    if (!rep.ok) {
      out.ok = false;
      out.message = "noise admissibility check failed: " + rep.message;
      return out;
    }
  }
  if (params.source.kind == SourceSpec::Kind::Logistic) {
    const double mu_tilde = cfg.mu_tilde ? *cfg.mu_tilde : 0.75 * cfg.mu;
    const SourceCertificate cert = validate_source_domination(params.source, mu_tilde);
    out.source_cert = cert;
    if (!cert.ok) {
      out.ok = false;
      out.message = "source domination check failed: " + cert.message;
      return out;
    }
  }
  return out;
}

}  // namespace sks
