#include "pendsim/config.hpp"

#include <cctype>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <type_traits>
#include <utility>
#include <sstream>
#include <variant>

#include "pendsim/errors.hpp"

namespace pendsim {

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kFull:
      return "full";
    case ModelKind::kReduced:
      return "reduced";
    case ModelKind::kSingular:
      return "singular";
  }
  return "unknown";
}

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out = "invalid scenario config:";
  for (const auto& s : items) {
    out += "\n  " + s;
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

namespace {

// Minimal TOML reader: [table] headers, `key = value` with floats, integers,
// basic strings and booleans, and `#` comments. That is the whole format of
// scenario files.
using Value = std::variant<double, std::string, bool>;

struct Entry {
  Value value;
  int line = 0;
  bool used = false;
};

using Table = std::map<std::string, Entry>;
using Document = std::map<std::string, Table>;

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool is_bare_key(std::string_view k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) {
      return false;
    }
  }
  return true;
}

// Strips a trailing comment that is not inside a string.
std::string strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) {
      in_string = !in_string;
    } else if (line[i] == '#' && !in_string) {
      return std::string(line.substr(0, i));
    }
  }
  return std::string(line);
}

Value parse_value(const std::string& raw, int line) {
  auto fail = [&](const std::string& why) {
    throw ConfigError({"line " + std::to_string(line) + ": " + why});
  };
  if (raw.empty()) fail("missing value");
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') fail("unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
      if (raw[i] == '\\' && i + 2 < raw.size()) {
        const char n = raw[++i];
        switch (n) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unsupported escape \\") + n);
        }
      } else {
        out += raw[i];
      }
    }
    return out;
  }
  if (raw == "true") return true;
  if (raw == "false") return false;
  if (raw == "inf" || raw == "+inf") return std::numeric_limits<double>::infinity();
  if (raw == "-inf") return -std::numeric_limits<double>::infinity();
  if (raw == "nan" || raw == "+nan" || raw == "-nan") {
    return std::numeric_limits<double>::quiet_NaN();
  }
  std::string digits;
  for (char c : raw) {
    if (c != '_') digits += c;
  }
  const char* first = digits.data();
  if (!digits.empty() && digits.front() == '+') ++first;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, digits.data() + digits.size(), v);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    fail("cannot parse value '" + raw + "'");
  }
  return v;
}

Document parse_document(std::string_view text) {
  Document doc;
  doc[""];
  std::string table;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  std::vector<std::string> issues;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string content = trim(strip_comment(line));
    if (content.empty()) continue;
    if (content.front() == '[') {
      if (content.back() != ']') {
        issues.push_back("line " + std::to_string(lineno) + ": malformed table header");
        continue;
      }
      table = trim(content.substr(1, content.size() - 2));
      if (!is_bare_key(table)) {
        issues.push_back("line " + std::to_string(lineno) + ": bad table name '" + table + "'");
        continue;
      }
      static const std::set<std::string> known{"phys",     "ctrl",        "consts_override",
                                               "disturbance", "y0",       "solver",
                                               "summary",  "outputs"};
      if (!known.count(table)) {
        issues.push_back("line " + std::to_string(lineno) + ": unknown table [" + table + "]");
      }
      if (doc.count(table) && table != "") {
        issues.push_back("line " + std::to_string(lineno) + ": duplicate table [" + table + "]");
      }
      doc[table];
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      issues.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    const std::string key = trim(content.substr(0, eq));
    if (!is_bare_key(key)) {
      issues.push_back("line " + std::to_string(lineno) + ": bad key '" + key + "'");
      continue;
    }
    try {
      Value v = parse_value(trim(content.substr(eq + 1)), lineno);
      auto& t = doc[table];
      if (t.count(key)) {
        issues.push_back("line " + std::to_string(lineno) + ": duplicate key " +
                         (table.empty() ? key : table + "." + key));
        continue;
      }
      t[key] = Entry{std::move(v), lineno, false};
    } catch (const ConfigError& e) {
      // Name the key after the "line N: " prefix.
      const std::string qualified = table.empty() ? key : table + "." + key;
      for (std::string issue : e.issues()) {
        const auto colon = issue.find(": ");
        issues.push_back(colon == std::string::npos
                             ? qualified + ": " + issue
                             : issue.insert(colon + 2, qualified + ": "));
      }
    }
  }
  if (!issues.empty()) throw ConfigError(issues);
  return doc;
}

class Reader {
 public:
  explicit Reader(Document doc) : doc_(std::move(doc)) {}

  bool has_table(const std::string& t) const { return doc_.count(t) > 0; }

  void number(const std::string& table, const std::string& key, double& out) {
    Entry* e = find(table, key);
    if (!e) return;
    if (const double* v = std::get_if<double>(&e->value)) {
      out = *v;
    } else {
      issue(table, key, e->line, "expected a number");
    }
  }

  void text(const std::string& table, const std::string& key, std::string& out) {
    Entry* e = find(table, key);
    if (!e) return;
    if (const std::string* v = std::get_if<std::string>(&e->value)) {
      out = *v;
    } else {
      issue(table, key, e->line, "expected a string");
    }
  }

  bool present(const std::string& table, const std::string& key) const {
    auto t = doc_.find(table);
    return t != doc_.end() && t->second.count(key);
  }

  void issue(const std::string& table, const std::string& key, int line,
             const std::string& why) {
    issues_.push_back("line " + std::to_string(line) + ": " +
                      (table.empty() ? key : table + "." + key) + ": " + why);
  }

  std::vector<std::string> finish() {
    for (auto& [tname, table] : doc_) {
      for (auto& [key, e] : table) {
        if (!e.used) issue(tname, key, e.line, "unknown key");
      }
    }
    return issues_;
  }

 private:
  Entry* find(const std::string& table, const std::string& key) {
    auto t = doc_.find(table);
    if (t == doc_.end()) return nullptr;
    auto e = t->second.find(key);
    if (e == t->second.end()) return nullptr;
    e->second.used = true;
    return &e->second;
  }

  Document doc_;
  std::vector<std::string> issues_;
};

// (key, member pointer) tables shared by the reader, writer and validator.
template <typename Owner>
using FieldPtr =
    std::conditional_t<std::is_const_v<Owner>, const double*, double*>;

template <typename Owner>
using Fields = std::vector<std::pair<const char*, FieldPtr<Owner>>>;

template <typename T>
Fields<T> phys_fields(T& p) {
  return {{"M", &p.M}, {"L", &p.L}, {"I", &p.I}, {"N", &p.N},
          {"kappa", &p.kappa}, {"c", &p.c}, {"G", &p.G}, {"g", &p.g},
          {"Pi", &p.Pi}};
}

template <typename T>
Fields<T> ctrl_fields(T& c) {
  return {{"a", &c.a}, {"alpha", &c.alpha}, {"b", &c.b}, {"rho", &c.rho},
          {"k", &c.k}, {"epsilon", &c.epsilon}, {"PiBar", &c.PiBar},
          {"A_gain", &c.A_gain}, {"B_gain", &c.B_gain},
          {"rho_composite", &c.rho_composite}};
}

template <typename T>
Fields<T> override_fields(T& o) {
  return {{"d1", &o.d1}, {"d2", &o.d2}, {"d3", &o.d3}};
}

template <typename T>
Fields<T> y0_fields(T& y) {
  return {{"s", &y.s}, {"gamma", &y.gamma}, {"Omega", &y.Omega},
          {"OmegaDot", &y.OmegaDot}, {"z1", &y.z1}, {"z2", &y.z2}};
}

template <typename T>
Fields<T> solver_fields(T& s) {
  return {{"rtol", &s.rtol}, {"atol", &s.atol}, {"max_step", &s.max_step},
          {"event_tol", &s.event_tol}, {"sliding_band", &s.sliding_band},
          {"t_end", &s.t_end}, {"record_dt", &s.record_dt}};
}

template <typename T>
Fields<T> summary_fields(T& s) {
  return {{"settle_threshold", &s.settle_threshold},
          {"amplitude_t_min", &s.amplitude_t_min}};
}

template <typename T>
Fields<T> disturbance_fields(T& d) {
  return {{"value", &d.value}, {"amplitude", &d.amplitude},
          {"angular_frequency", &d.angular_frequency}, {"phase", &d.phase}};
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

const char* disturbance_kind(Disturbance::Kind k) {
  switch (k) {
    case Disturbance::Kind::kZero: return "zero";
    case Disturbance::Kind::kConstant: return "constant";
    case Disturbance::Kind::kSinusoid: return "sinusoid";
  }
  return "zero";
}

}  // namespace

void validate(const ScenarioConfig& cfg) {
  std::vector<std::string> issues;
  auto guard = [&](auto&& fn) {
    try {
      fn();
    } catch (const ParameterError& e) {
      issues.push_back(e.what());
    }
  };
  guard([&] { cfg.phys.validate(); });
  guard([&] { cfg.ctrl.validate(); });
  guard([&] {
    if (cfg.ctrl.rho * cfg.phys.L <= cfg.phys.I) {
      throw ParameterError("ctrl.rho: rho*L must exceed phys.I");
    }
  });
  guard([&] { cfg.solver.validate(); });
  if (cfg.model == ModelKind::kSingular) {
    if (!cfg.mu) {
      issues.push_back("mu: required for model = \"singular\"");
    } else if (!(*cfg.mu > 0.0) || !std::isfinite(*cfg.mu)) {
      issues.push_back("mu: must be finite and > 0");
    }
  }
  if (cfg.consts_override && cfg.model == ModelKind::kFull) {
    issues.push_back("consts_override: only allowed for reduced or singular models");
  }
  if (cfg.consts_override) {
    for (const auto& [key, v] :
         override_fields(*cfg.consts_override)) {
      if (!std::isfinite(*v)) {
        issues.push_back(std::string("consts_override.") + key + ": must be finite");
      }
    }
  }
  for (const auto& [key, v] : y0_fields(cfg.y0)) {
    if (!std::isfinite(*v)) {
      issues.push_back(std::string("y0.") + key + ": must be finite");
    }
  }
  for (const auto& [key, v] :
       disturbance_fields(cfg.disturbance)) {
    if (!std::isfinite(*v)) {
      issues.push_back(std::string("disturbance.") + key + ": must be finite");
    }
  }
  if (cfg.disturbance.bound() > cfg.phys.Pi) {
    issues.push_back("disturbance: sup |D(t)| exceeds phys.Pi");
  }
  if (!(cfg.summary.settle_threshold > 0.0)) {
    issues.push_back("summary.settle_threshold: must be > 0");
  }
  if (!std::isfinite(cfg.summary.amplitude_t_min) ||
      cfg.summary.amplitude_t_min < 0.0) {
    issues.push_back("summary.amplitude_t_min: must be finite and >= 0");
  }
  if (!issues.empty()) throw ConfigError(issues);
}

ScenarioConfig parse_config(std::string_view text) {
  Reader rd(parse_document(text));
  ScenarioConfig cfg;
  rd.text("", "name", cfg.name);

  std::string model = to_string(cfg.model);
  rd.text("", "model", model);
  if (model == "full") {
    cfg.model = ModelKind::kFull;
  } else if (model == "reduced") {
    cfg.model = ModelKind::kReduced;
  } else if (model == "singular") {
    cfg.model = ModelKind::kSingular;
  } else {
    rd.issue("", "model", 0, "expected \"full\", \"reduced\" or \"singular\"");
  }
  if (rd.present("", "mu")) {
    double mu = 0.0;
    rd.number("", "mu", mu);
    cfg.mu = mu;
  }

  for (auto& [key, v] : phys_fields(cfg.phys)) rd.number("phys", key, *v);
  for (auto& [key, v] : ctrl_fields(cfg.ctrl)) rd.number("ctrl", key, *v);
  if (rd.has_table("consts_override")) {
    ConstsOverride o;
    for (auto& [key, v] : override_fields(o)) rd.number("consts_override", key, *v);
    cfg.consts_override = o;
  }

  std::string kind = disturbance_kind(cfg.disturbance.kind);
  rd.text("disturbance", "kind", kind);
  if (kind == "zero") {
    cfg.disturbance.kind = Disturbance::Kind::kZero;
  } else if (kind == "constant") {
    cfg.disturbance.kind = Disturbance::Kind::kConstant;
  } else if (kind == "sinusoid") {
    cfg.disturbance.kind = Disturbance::Kind::kSinusoid;
  } else {
    rd.issue("disturbance", "kind", 0,
             "expected \"zero\", \"constant\" or \"sinusoid\"");
  }
  for (auto& [key, v] : disturbance_fields(cfg.disturbance)) {
    rd.number("disturbance", key, *v);
  }
  for (auto& [key, v] : y0_fields(cfg.y0)) rd.number("y0", key, *v);
  for (auto& [key, v] : solver_fields(cfg.solver)) rd.number("solver", key, *v);
  for (auto& [key, v] : summary_fields(cfg.summary)) rd.number("summary", key, *v);
  rd.text("outputs", "trajectory", cfg.outputs.trajectory);
  rd.text("outputs", "report", cfg.outputs.report);

  std::vector<std::string> issues = rd.finish();
  if (!issues.empty()) throw ConfigError(issues);
  validate(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError({"cannot open config file " + path.string()});
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_toml(const ScenarioConfig& cfg_in) {
  ScenarioConfig cfg = cfg_in;
  std::ostringstream out;
  auto section = [&](const char* name, const auto& fields) {
    out << "\n[" << name << "]\n";
    for (const auto& [key, v] : fields) {
      out << key << " = " << format_double(*v) << "\n";
    }
  };
  out << "name = " << quote(cfg.name) << "\n";
  out << "model = " << quote(to_string(cfg.model)) << "\n";
  if (cfg.mu) out << "mu = " << format_double(*cfg.mu) << "\n";
  section("phys", phys_fields(cfg.phys));
  section("ctrl", ctrl_fields(cfg.ctrl));
  if (cfg.consts_override) {
    section("consts_override", override_fields(*cfg.consts_override));
  }
  out << "\n[disturbance]\nkind = " << quote(disturbance_kind(cfg.disturbance.kind))
      << "\n";
  for (const auto& [key, v] : disturbance_fields(cfg.disturbance)) {
    out << key << " = " << format_double(*v) << "\n";
  }
  section("y0", y0_fields(cfg.y0));
  section("solver", solver_fields(cfg.solver));
  section("summary", summary_fields(cfg.summary));
  out << "\n[outputs]\ntrajectory = " << quote(cfg.outputs.trajectory)
      << "\nreport = " << quote(cfg.outputs.report) << "\n";
  return out.str();
}

void write_config(const ScenarioConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write config file " + path.string());
  }
  out << to_toml(cfg);
}

}  // namespace pendsim
