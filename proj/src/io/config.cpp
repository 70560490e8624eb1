#include "mhd/io/config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace mhd {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& v, int line, const std::string& key) {
  char* end = nullptr;
  errno = 0;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno != 0 || !std::isfinite(d)) {
    throw ConfigError(line, "invalid number '" + v + "' for key '" + key + "'");
  }
  return d;
}

double parse_positive(const std::string& v, int line, const std::string& key) {
  const double d = parse_double(v, line, key);
  if (!(d > 0)) throw ConfigError(line, "key '" + key + "' must be positive");
  return d;
}

int parse_int(const std::string& v, int line, const std::string& key, int min_value) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(line, "invalid integer '" + v + "' for key '" + key + "'");
  }
  if (out < min_value) {
    throw ConfigError(line, "key '" + key + "' must be >= " + std::to_string(min_value));
  }
  return out;
}

bool parse_bool(const std::string& v, int line, const std::string& key) {
  if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
  if (v == "off" || v == "false" || v == "no" || v == "0") return false;
  throw ConfigError(line, "invalid flag '" + v + "' for key '" + key + "' (use on/off)");
}

std::string parse_choice(const std::string& v, int line, const std::string& key,
                         std::initializer_list<const char*> choices) {
  for (const char* c : choices) {
    if (v == c) return v;
  }
  std::string msg = "invalid value '" + v + "' for key '" + key + "' (expected one of:";
  for (const char* c : choices) msg += std::string(" ") + c;
  throw ConfigError(line, msg + ")");
}

}  // namespace

const char* run_scheme_name(RunScheme scheme) {
  switch (scheme) {
    case RunScheme::picard: return "picard";
    case RunScheme::symmetric: return "symmetric";
    case RunScheme::newton: return "newton";
    case RunScheme::nonlinear_picard: return "nonlinear-picard";
    case RunScheme::nonlinear_newton: return "nonlinear-newton";
  }
  return "unknown";
}

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  using Handler = std::function<void(const std::string&, int, const std::string&)>;
  int scheme_line = 0;
  int solver_line = 0;
  const std::map<std::string, Handler> handlers{
      {"n", [&](const std::string& v, int l, const std::string& k) { cfg.n = parse_int(v, l, k, 1); }},
      {"lx", [&](const std::string& v, int l, const std::string& k) { cfg.box.lx = parse_positive(v, l, k); }},
      {"ly", [&](const std::string& v, int l, const std::string& k) { cfg.box.ly = parse_positive(v, l, k); }},
      {"lz", [&](const std::string& v, int l, const std::string& k) { cfg.box.lz = parse_positive(v, l, k); }},
      {"Re", [&](const std::string& v, int l, const std::string& k) { cfg.params.Re = parse_positive(v, l, k); }},
      {"Rm", [&](const std::string& v, int l, const std::string& k) { cfg.params.Rm = parse_positive(v, l, k); }},
      {"S", [&](const std::string& v, int l, const std::string& k) { cfg.params.S = parse_positive(v, l, k); }},
      {"k", [&](const std::string& v, int l, const std::string& k) { cfg.params.k = parse_positive(v, l, k); }},
      {"steps", [&](const std::string& v, int l, const std::string& k) { cfg.steps = parse_int(v, l, k, 0); }},
      {"grad_div",
       [&](const std::string& v, int l, const std::string& k) { cfg.params.grad_div = parse_bool(v, l, k); }},
      {"scheme",
       [&](const std::string& v, int l, const std::string& k) {
         const std::string s =
             parse_choice(v, l, k, {"picard", "symmetric", "newton", "nonlinear-picard", "nonlinear-newton"});
         if (s == "picard") cfg.scheme = RunScheme::picard;
         if (s == "symmetric") cfg.scheme = RunScheme::symmetric;
         if (s == "newton") cfg.scheme = RunScheme::newton;
         if (s == "nonlinear-picard") cfg.scheme = RunScheme::nonlinear_picard;
         if (s == "nonlinear-newton") cfg.scheme = RunScheme::nonlinear_newton;
         scheme_line = l;
       }},
      {"solver",
       [&](const std::string& v, int l, const std::string& k) {
         cfg.solver.kind = parse_choice(v, l, k, {"direct", "minres"}) == "minres" ? LinearSolverKind::minres
                                                                                  : LinearSolverKind::direct;
         solver_line = l;
       }},
      {"solver_tol",
       [&](const std::string& v, int l, const std::string& k) { cfg.solver.tol = parse_positive(v, l, k); }},
      {"solver_maxit",
       [&](const std::string& v, int l, const std::string& k) { cfg.solver.maxit = parse_int(v, l, k, 1); }},
      {"nonlinear_tol",
       [&](const std::string& v, int l, const std::string& k) { cfg.nonlinear.tol = parse_positive(v, l, k); }},
      {"nonlinear_maxit",
       [&](const std::string& v, int l, const std::string& k) { cfg.nonlinear.maxit = parse_int(v, l, k, 1); }},
      {"initial",
       [&](const std::string& v, int l, const std::string& k) {
         cfg.initial = parse_choice(v, l, k, {"trig", "zero", "magnetic", "velocity"});
       }},
      {"u_amplitude",
       [&](const std::string& v, int l, const std::string& k) { cfg.u_amplitude = parse_double(v, l, k); }},
      {"b_amplitude",
       [&](const std::string& v, int l, const std::string& k) { cfg.b_amplitude = parse_double(v, l, k); }},
      {"source",
       [&](const std::string& v, int l, const std::string& k) { cfg.source = parse_choice(v, l, k, {"none", "forced"}); }},
      {"source_amplitude",
       [&](const std::string& v, int l, const std::string& k) { cfg.source_amplitude = parse_double(v, l, k); }},
      {"ledger",
       [&](const std::string& v, int l, const std::string& k) {
         if (v.empty()) throw ConfigError(l, "key '" + k + "' needs a file name");
         cfg.ledger = v;
       }},
      {"vtk_stride", [&](const std::string& v, int l, const std::string& k) { cfg.vtk_stride = parse_int(v, l, k, 0); }},
      {"vtk_prefix",
       [&](const std::string& v, int l, const std::string& k) {
         if (v.empty()) throw ConfigError(l, "key '" + k + "' needs a prefix");
         cfg.vtk_prefix = v;
       }},
      {"mesh_sizes",
       [&](const std::string& v, int l, const std::string& k) {
         cfg.mesh_sizes.clear();
         std::stringstream ss(v);
         std::string item;
         while (std::getline(ss, item, ',')) cfg.mesh_sizes.push_back(parse_int(trim(item), l, k, 1));
         if (cfg.mesh_sizes.empty()) throw ConfigError(l, "key '" + k + "' needs at least one size");
       }},
      {"case",
       [&](const std::string& v, int l, const std::string& k) {
         cfg.manufactured_case = parse_choice(v, l, k, {"trig", "stokes", "patch"});
       }},
  };

  std::map<std::string, int> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "missing key before '='");
    const auto it = handlers.find(key);
    if (it == handlers.end()) throw ConfigError(line_no, "unknown key '" + key + "'");
    if (const auto prev = seen.find(key); prev != seen.end()) {
      throw ConfigError(line_no, "duplicate key '" + key + "' (first set on line " + std::to_string(prev->second) + ")");
    }
    seen[key] = line_no;
    it->second(value, line_no, key);
  }

  if (cfg.solver.kind == LinearSolverKind::minres && cfg.scheme != RunScheme::symmetric) {
    throw ConfigError(std::max(scheme_line, solver_line),
                      std::string("solver = minres requires scheme = symmetric (got ") + run_scheme_name(cfg.scheme) +
                          ", whose system is not symmetric)");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace mhd
