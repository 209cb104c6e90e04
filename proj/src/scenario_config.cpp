#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "scaleon/error.hpp"
#include "scaleon/expression.hpp"
#include "scaleon/scenario.hpp"

namespace scaleon {

namespace {

constexpr std::array<std::pair<Mode, std::string_view>, 9> kModes{{
    {Mode::algebra_check, "algebra-check"},
    {Mode::gauge_check, "gauge-check"},
    {Mode::kg, "kg"},
    {Mode::dirac, "dirac"},
    {Mode::qed, "qed"},
    {Mode::higgs, "higgs"},
    {Mode::length, "length"},
    {Mode::proper_time, "proper-time"},
    {Mode::geodesic, "geodesic"},
}};

std::set<std::string> known_keys() {
  std::set<std::string> k{
      "scenario.mode", "scenario.seed", "scenario.cases", "scenario.step",
      "grid.dim", "grid.extents", "grid.spacing", "grid.origin",
      "fields.alpha", "fields.beta", "fields.psi_re", "fields.psi_im", "fields.gauge_a", "fields.gauge_b",
      "couplings.a_a", "couplings.a_b", "couplings.a_p", "couplings.a_t", "couplings.m", "couplings.mu",
      "couplings.quartic",
      "path.s0", "path.s1", "path.samples", "path.table", "path.kind", "path.x_ref",
      "geodesic.position", "geodesic.velocity", "geodesic.tau", "geodesic.step",
  };
  for (int mu = 0; mu < 4; ++mu) {
    k.insert("fields.P" + std::to_string(mu));
    k.insert("path.p" + std::to_string(mu));
    for (int a = 1; a <= 3; ++a) k.insert("fields.w" + std::to_string(a) + "_" + std::to_string(mu));
  }
  return k;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct Entry {
  std::string value;
  std::size_t line;
};

// Removes a trailing comment that starts outside quotes.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (!quoted && (line[i] == '#' || line[i] == ';')) return line.substr(0, i);
  }
  return line;
}

class Reader {
 public:
  Reader(std::map<std::string, Entry> entries, std::vector<ConfigIssue>& issues)
      : entries_(std::move(entries)), issues_(issues) {}

  const Entry* find(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  void issue(const Entry* e, const std::string& key, const std::string& what) {
    issues_.push_back({e ? e->line : 0, key + ": " + what});
  }

  void text(const std::string& key, std::string& out) {
    if (const Entry* e = find(key)) out = e->value;
  }

  void number(const std::string& key, double& out) {
    if (const Entry* e = find(key)) {
      if (auto v = parse_double(e->value)) {
        out = *v;
      } else {
        issue(e, key, "not a number: '" + e->value + "'");
      }
    }
  }

  template <class Int>
  void integer(const std::string& key, Int& out) {
    if (const Entry* e = find(key)) {
      Int v{};
      const char* first = e->value.data();
      const char* last = first + e->value.size();
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc{} || ptr != last) {
        issue(e, key, "not a non-negative integer: '" + e->value + "'");
      } else {
        out = v;
      }
    }
  }

  /// Space- or comma-separated list of numbers with `min`..`max` entries.
  std::optional<std::vector<double>> list(const std::string& key, std::size_t min, std::size_t max) {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    std::string s = e->value;
    for (char& c : s) {
      if (c == ',') c = ' ';
    }
    std::istringstream in(s);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
      auto v = parse_double(tok);
      if (!v) {
        issue(e, key, "not a number: '" + tok + "'");
        return std::nullopt;
      }
      out.push_back(*v);
    }
    if (out.size() < min || out.size() > max) {
      issue(e, key, "expected " + (min == max ? std::to_string(min) : std::to_string(min) + " to " + std::to_string(max)) +
                        " values, got " + std::to_string(out.size()));
      return std::nullopt;
    }
    return out;
  }

  void point(const std::string& key, Point& out) {
    if (auto v = list(key, 1, 4)) {
      out = {};
      for (std::size_t i = 0; i < v->size(); ++i) out[i] = (*v)[i];
    }
  }

  static std::optional<double> parse_double(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = first + s.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) return std::nullopt;
    return v;
  }

 private:
  std::map<std::string, Entry> entries_;
  std::vector<ConfigIssue>& issues_;
};

void check_field_expression(Reader& r, const std::string& key, const std::string& text) {
  try {
    (void)parse_field_expression(text);
  } catch (const Error& e) {
    r.issue(r.find(key), key, std::string("bad expression: ") + e.what());
  }
}

void check_path_expression(Reader& r, const std::string& key, const std::string& text) {
  static const std::vector<std::string> vars{"s"};
  try {
    (void)parse_expression(text, vars);
  } catch (const Error& e) {
    r.issue(r.find(key), key, std::string("bad expression: ") + e.what());
  }
}

void require_positive(Reader& r, const std::string& key, double v) {
  if (!(v > 0.0)) r.issue(r.find(key), key, "must be positive");
}

}  // namespace

std::string_view to_string(Mode mode) noexcept {
  for (const auto& [m, name] : kModes) {
    if (m == mode) return name;
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view text) noexcept {
  for (const auto& [m, name] : kModes) {
    if (name == text) return m;
  }
  return std::nullopt;
}

ParseResult parse_config(std::string_view text) {
  ParseResult result;
  auto& issues = result.issues;
  static const std::set<std::string> keys = known_keys();
  static const std::set<std::string> sections{"scenario", "grid", "fields", "couplings", "path", "geodesic"};

  std::map<std::string, Entry> entries;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.push_back({line_no, "unterminated section header"});
        continue;
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!sections.count(section)) issues.push_back({line_no, "unknown section [" + section + "]"});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back({line_no, "expected key = value"});
      continue;
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    } else if (value.find('"') != std::string::npos) {
      issues.push_back({line_no, "unbalanced quotes in value of '" + key + "'"});
      continue;
    }
    if (section.empty()) {
      issues.push_back({line_no, "key '" + key + "' outside any section"});
      continue;
    }
    if (!sections.count(section)) continue;
    const std::string full = section + "." + key;
    if (!keys.count(full)) {
      issues.push_back({line_no, "unknown key '" + key + "' in section [" + section + "]"});
      continue;
    }
    if (auto it = entries.find(full); it != entries.end()) {
      issues.push_back({line_no, "duplicate key '" + key + "' (first set on line " +
                                     std::to_string(it->second.line) + ")"});
      continue;
    }
    entries.emplace(full, Entry{value, line_no});
  }

  Reader r(std::move(entries), issues);
  ScenarioConfig c;

  if (const Entry* e = r.find("scenario.mode")) {
    if (auto m = parse_mode(e->value)) {
      c.mode = *m;
    } else {
      r.issue(e, "scenario.mode", "unknown mode '" + e->value + "'");
    }
  } else {
    issues.push_back({0, "scenario.mode: required"});
  }
  r.integer("scenario.seed", c.seed);
  r.integer("scenario.cases", c.cases);
  r.number("scenario.step", c.step);
  if (c.cases == 0) r.issue(r.find("scenario.cases"), "scenario.cases", "must be positive");
  require_positive(r, "scenario.step", c.step);

  r.integer("grid.dim", c.grid.dim);
  if (c.grid.dim < 1 || c.grid.dim > 4) {
    r.issue(r.find("grid.dim"), "grid.dim", "must be between 1 and 4");
  } else {
    const auto dim = static_cast<std::size_t>(c.grid.dim);
    for (std::size_t a = dim; a < 4; ++a) {
      c.grid.extents[a] = 1;
      c.grid.spacing[a] = 1.0;
    }
    if (auto v = r.list("grid.extents", dim, dim)) {
      for (std::size_t a = 0; a < dim; ++a) {
        const double x = (*v)[a];
        if (x < 1.0 || x != std::floor(x)) {
          r.issue(r.find("grid.extents"), "grid.extents", "extents must be positive integers");
          break;
        }
        c.grid.extents[a] = static_cast<std::size_t>(x);
      }
    }
    if (auto v = r.list("grid.spacing", dim, dim)) {
      for (std::size_t a = 0; a < dim; ++a) {
        if (!((*v)[a] > 0.0)) {
          r.issue(r.find("grid.spacing"), "grid.spacing", "spacing must be positive");
          break;
        }
        c.grid.spacing[a] = (*v)[a];
      }
    }
    if (auto v = r.list("grid.origin", dim, dim)) {
      for (std::size_t a = 0; a < dim; ++a) c.grid.origin[a] = (*v)[a];
    }
  }

  r.text("fields.alpha", c.alpha);
  r.text("fields.beta", c.beta);
  r.text("fields.psi_re", c.psi_re);
  r.text("fields.psi_im", c.psi_im);
  r.text("fields.gauge_a", c.gauge_a);
  r.text("fields.gauge_b", c.gauge_b);
  for (int mu = 0; mu < 4; ++mu) {
    const auto m = static_cast<std::size_t>(mu);
    r.text("fields.P" + std::to_string(mu), c.P[m]);
    for (int a = 1; a <= 3; ++a) {
      r.text("fields.w" + std::to_string(a) + "_" + std::to_string(mu), c.w[static_cast<std::size_t>(a - 1)][m]);
    }
  }
  check_field_expression(r, "fields.alpha", c.alpha);
  check_field_expression(r, "fields.beta", c.beta);
  check_field_expression(r, "fields.gauge_a", c.gauge_a);
  check_field_expression(r, "fields.gauge_b", c.gauge_b);
  if (!c.psi_re.empty()) check_field_expression(r, "fields.psi_re", c.psi_re);
  if (!c.psi_im.empty()) check_field_expression(r, "fields.psi_im", c.psi_im);
  if (c.psi_re.empty() != c.psi_im.empty()) {
    issues.push_back({0, "fields.psi_re and fields.psi_im must be given together"});
  }
  for (int mu = 0; mu < 4; ++mu) {
    const auto m = static_cast<std::size_t>(mu);
    check_field_expression(r, "fields.P" + std::to_string(mu), c.P[m]);
    for (int a = 1; a <= 3; ++a) {
      check_field_expression(r, "fields.w" + std::to_string(a) + "_" + std::to_string(mu),
                             c.w[static_cast<std::size_t>(a - 1)][m]);
    }
  }

  r.number("couplings.a_a", c.couplings.a_a);
  r.number("couplings.a_b", c.couplings.a_b);
  r.number("couplings.a_p", c.couplings.a_p);
  r.number("couplings.a_t", c.couplings.a_t);
  r.number("couplings.m", c.couplings.m);
  r.number("couplings.mu", c.couplings.mu);
  r.number("couplings.quartic", c.couplings.quartic);
  if (c.mode == Mode::higgs) {
    require_positive(r, "couplings.mu", c.couplings.mu);
    require_positive(r, "couplings.quartic", c.couplings.quartic);
  }

  for (int mu = 0; mu < 4; ++mu) {
    const std::string key = "path.p" + std::to_string(mu);
    r.text(key, c.path.components[static_cast<std::size_t>(mu)]);
    check_path_expression(r, key, c.path.components[static_cast<std::size_t>(mu)]);
  }
  r.number("path.s0", c.path.s0);
  r.number("path.s1", c.path.s1);
  r.integer("path.samples", c.path.samples);
  r.text("path.table", c.path.table);
  r.point("path.x_ref", c.path.x_ref);
  if (!(c.path.s1 > c.path.s0)) r.issue(r.find("path.s1"), "path.s1", "must exceed path.s0");
  if (c.path.samples < 5) r.issue(r.find("path.samples"), "path.samples", "at least 5 samples are needed");
  if (const Entry* e = r.find("path.kind")) {
    if (e->value == "timelike") {
      c.path.kind = CausalKind::timelike;
    } else if (e->value == "spacelike") {
      c.path.kind = CausalKind::spacelike;
    } else {
      r.issue(e, "path.kind", "expected timelike or spacelike");
    }
  }

  r.point("geodesic.position", c.geodesic.position);
  r.point("geodesic.velocity", c.geodesic.velocity);
  r.number("geodesic.tau", c.geodesic.tau);
  r.number("geodesic.step", c.geodesic.step);
  require_positive(r, "geodesic.tau", c.geodesic.tau);
  require_positive(r, "geodesic.step", c.geodesic.step);

  if (issues.empty()) result.config = std::move(c);
  return result;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ConfigError, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  ParseResult parsed = parse_config(text.str());
  if (!parsed.config) {
    std::string message;
    for (const auto& issue : parsed.issues) {
      if (!message.empty()) message += '\n';
      message += path.string() + ":" + std::to_string(issue.line) + ": " + issue.message;
    }
    fail(ErrorCode::ConfigError, message);
  }
  parsed.config->base_dir = path.parent_path();
  return *parsed.config;
}

}  // namespace scaleon
