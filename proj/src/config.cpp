#include "config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "common.hpp"

namespace vesicle {

int SimConfig::total_steps() const { return static_cast<int>(std::llround(t_end / tau)); }

const char* model_name(ModelVariant variant) {
  switch (variant) {
    case ModelVariant::A: return "A";
    case ModelVariant::B: return "B";
    default: return "C";
  }
}

namespace {

[[noreturn]] void reject(const std::string& key, const std::string& why) {
  throw ValidationError("config: \"" + key + "\" " + why);
}

void require_positive(double value, const std::string& key) {
  if (!(value > 0.0)) reject(key, format_string("must be positive (got %g)", value));
}

}  // namespace

void validate(const SimConfig& c) {
  if (c.nx < 1) reject("nx", "must be >= 1");
  if (c.ny < 1) reject("ny", "must be >= 1");
  if (!(c.domain.x1 > c.domain.x0) || !(c.domain.y1 > c.domain.y0))
    reject("domain", "must be a non-degenerate rectangle [x0, x1, y0, y1]");
  require_positive(c.re, "re");
  require_positive(c.be, "be");
  require_positive(c.visc_ratio, "viscosity_ratio");
  require_positive(c.dens_ratio, "density_ratio");
  require_positive(c.epsilon, "epsilon");
  require_positive(c.tau, "tau");
  require_positive(c.t_end, "t_end");
  require_positive(c.eta, "eta");
  require_positive(c.xi, "xi");
  require_positive(c.solver_tol, "solver_tol");
  if (c.theta < 0.0) reject("theta", "must be >= 0");
  if (c.shear_speed < 0.0) reject("shear_speed", "must be >= 0");
  if (c.snapshot_stride < 0) reject("snapshot_stride", "must be >= 0");
  if (c.t_end < c.tau) reject("t_end", "must cover at least one time step");

  const double h = std::max(c.domain.width() / c.nx, c.domain.height() / c.ny);
  const double h_max = c.epsilon * kResolutionRatio * (1.0 + 1e-9);
  if (h > h_max)
    reject("nx", format_string("grid too coarse for epsilon = %g: h = %g exceeds %g "
                               "(resolution rule h <= epsilon * %.6f)",
                               c.epsilon, h, h_max, kResolutionRatio));

  const double a = c.ellipse_semi_axes[0], b = c.ellipse_semi_axes[1];
  if (!(a > 0.0) || !(b > 0.0)) reject("ellipse_semi_axes", "must be positive");
  if (c.ellipse_center[0] - a < c.domain.x0 || c.ellipse_center[0] + a > c.domain.x1 ||
      c.ellipse_center[1] - b < c.domain.y0 || c.ellipse_center[1] + b > c.domain.y1)
    reject("ellipse_center", "ellipse must lie inside the domain");
  if (c.csv_name.empty()) reject("csv_name", "must not be empty");
}

namespace {

struct RawValue {
  std::string text;
  int line;
};

// Minimal TOML-style reader: flat "key = value" lines, # comments, quoted
// strings, numbers and [a, b, ...] arrays of numbers.
std::map<std::string, RawValue> tokenize(const std::string& text) {
  std::map<std::string, RawValue> entries;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string stripped;
    bool in_string = false;
    for (char ch : line) {
      if (ch == '"') in_string = !in_string;
      if (ch == '#' && !in_string) break;
      stripped.push_back(ch);
    }
    std::size_t start = stripped.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    std::size_t end = stripped.find_last_not_of(" \t\r");
    stripped = stripped.substr(start, end - start + 1);

    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ValidationError(format_string("config: line %d: expected key = value", lineno));
    std::string key = stripped.substr(0, eq);
    std::string value = stripped.substr(eq + 1);
    const auto trim = [](std::string& s) {
      const std::size_t b = s.find_first_not_of(" \t");
      const std::size_t e = s.find_last_not_of(" \t");
      s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
    };
    trim(key);
    trim(value);
    if (key.empty() || value.empty())
      throw ValidationError(format_string("config: line %d: expected key = value", lineno));
    for (char ch : key)
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
        throw ValidationError(format_string("config: line %d: invalid key \"%s\"", lineno, key.c_str()));
    if (entries.count(key))
      throw ValidationError(format_string("config: line %d: duplicate key \"%s\"", lineno, key.c_str()));
    entries[key] = {value, lineno};
  }
  return entries;
}

double parse_number(const RawValue& raw, const std::string& key) {
  char* endp = nullptr;
  const double v = std::strtod(raw.text.c_str(), &endp);
  if (endp == raw.text.c_str() || *endp != '\0')
    throw ValidationError(format_string("config: line %d: \"%s\" expects a number, got \"%s\"",
                                        raw.line, key.c_str(), raw.text.c_str()));
  return v;
}

int parse_int(const RawValue& raw, const std::string& key) {
  const double v = parse_number(raw, key);
  const int i = static_cast<int>(std::llround(v));
  if (std::abs(v - i) > 1e-9)
    throw ValidationError(format_string("config: line %d: \"%s\" expects an integer", raw.line,
                                        key.c_str()));
  return i;
}

std::string parse_string(const RawValue& raw, const std::string& key) {
  const std::string& s = raw.text;
  if (s.size() < 2 || s.front() != '"' || s.back() != '"')
    throw ValidationError(format_string("config: line %d: \"%s\" expects a quoted string",
                                        raw.line, key.c_str()));
  return s.substr(1, s.size() - 2);
}

std::vector<double> parse_array(const RawValue& raw, const std::string& key, std::size_t expect) {
  const std::string& s = raw.text;
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw ValidationError(format_string("config: line %d: \"%s\" expects an array [ ... ]",
                                        raw.line, key.c_str()));
  std::vector<double> out;
  std::string item;
  std::istringstream in(s.substr(1, s.size() - 2));
  while (std::getline(in, item, ',')) {
    char* endp = nullptr;
    const double v = std::strtod(item.c_str(), &endp);
    while (endp && *endp == ' ') ++endp;
    if (endp == item.c_str() || (endp && *endp != '\0'))
      throw ValidationError(format_string("config: line %d: \"%s\" has a malformed array entry",
                                          raw.line, key.c_str()));
    out.push_back(v);
  }
  if (out.size() != expect)
    throw ValidationError(format_string("config: line %d: \"%s\" expects %zu entries", raw.line,
                                        key.c_str(), expect));
  return out;
}

}  // namespace

SimConfig parse_config_text(const std::string& text, bool validate_now) {
  SimConfig c;
  auto entries = tokenize(text);
  const auto take = [&](const char* key) -> const RawValue* {
    auto it = entries.find(key);
    if (it == entries.end()) return nullptr;
    return &it->second;
  };

  if (const RawValue* raw = take("model")) {
    const std::string m = parse_string(*raw, "model");
    if (m == "A") c.model = ModelVariant::A;
    else if (m == "B") c.model = ModelVariant::B;
    else if (m == "C") c.model = ModelVariant::C;
    else throw ValidationError(format_string("config: line %d: \"model\" must be \"A\", \"B\" or \"C\"", raw->line));
    entries.erase("model");
  }
  const auto number = [&](const char* key, double& slot) {
    if (auto it = entries.find(key); it != entries.end()) {
      slot = parse_number(it->second, key);
      entries.erase(it);
    }
  };
  const auto integer = [&](const char* key, int& slot) {
    if (auto it = entries.find(key); it != entries.end()) {
      slot = parse_int(it->second, key);
      entries.erase(it);
    }
  };
  if (auto it = entries.find("domain"); it != entries.end()) {
    const auto v = parse_array(it->second, "domain", 4);
    c.domain = {v[0], v[1], v[2], v[3]};
    entries.erase(it);
  }
  if (auto it = entries.find("ellipse_center"); it != entries.end()) {
    const auto v = parse_array(it->second, "ellipse_center", 2);
    c.ellipse_center = {v[0], v[1]};
    entries.erase(it);
  }
  if (auto it = entries.find("ellipse_semi_axes"); it != entries.end()) {
    const auto v = parse_array(it->second, "ellipse_semi_axes", 2);
    c.ellipse_semi_axes = {v[0], v[1]};
    entries.erase(it);
  }
  if (auto it = entries.find("csv_name"); it != entries.end()) {
    c.csv_name = parse_string(it->second, "csv_name");
    entries.erase(it);
  }
  integer("nx", c.nx);
  integer("ny", c.ny);
  integer("snapshot_stride", c.snapshot_stride);
  number("re", c.re);
  number("be", c.be);
  number("h0", c.h0);
  number("viscosity_ratio", c.visc_ratio);
  number("density_ratio", c.dens_ratio);
  number("shear_speed", c.shear_speed);
  number("epsilon", c.epsilon);
  number("tau", c.tau);
  number("t_end", c.t_end);
  number("eta", c.eta);
  number("xi", c.xi);
  number("theta", c.theta);
  number("solver_tol", c.solver_tol);

  if (!entries.empty()) {
    const auto& [key, raw] = *entries.begin();
    throw ValidationError(format_string("config: line %d: unknown key \"%s\"", raw.line, key.c_str()));
  }
  if (validate_now) validate(c);
  return c;
}

SimConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string config_echo(const SimConfig& c) {
  std::string out;
  out += format_string("model = \"%s\"\n", model_name(c.model));
  out += format_string("domain = [%.17g, %.17g, %.17g, %.17g]\n", c.domain.x0, c.domain.x1,
                       c.domain.y0, c.domain.y1);
  out += format_string("nx = %d\nny = %d\n", c.nx, c.ny);
  out += format_string("re = %.17g\nbe = %.17g\nh0 = %.17g\n", c.re, c.be, c.h0);
  out += format_string("viscosity_ratio = %.17g\ndensity_ratio = %.17g\nshear_speed = %.17g\n",
                       c.visc_ratio, c.dens_ratio, c.shear_speed);
  out += format_string("epsilon = %.17g\ntau = %.17g\nt_end = %.17g\n", c.epsilon, c.tau, c.t_end);
  out += format_string("eta = %.17g\nxi = %.17g\ntheta = %.17g\nsolver_tol = %.17g\n", c.eta, c.xi,
                       c.theta, c.solver_tol);
  out += format_string("ellipse_center = [%.17g, %.17g]\n", c.ellipse_center[0], c.ellipse_center[1]);
  out += format_string("ellipse_semi_axes = [%.17g, %.17g]\n", c.ellipse_semi_axes[0],
                       c.ellipse_semi_axes[1]);
  out += format_string("csv_name = \"%s\"\n", c.csv_name.c_str());
  out += format_string("snapshot_stride = %d\n", c.snapshot_stride);
  return out;
}

std::uint64_t config_hash(const SimConfig& c) {
  const std::string echo = config_echo(c);
  return fnv1a(echo.data(), echo.size());
}

}  // namespace vesicle
