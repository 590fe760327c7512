#include "sfi/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "sfi/errors.hpp"

namespace sfi {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_real(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line) + ": not a number: '" + s + "'");
  }
}

long parse_int(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line) + ": not an integer: '" + s + "'");
  }
}

StableLaw parse_law(const std::string& v, int line) {
  const auto parts = split(v, ',');
  if (parts.size() != 4)
    throw ParseError("line " + std::to_string(line) + ": a law needs alpha,beta,c,a");
  StableLaw law{parse_real(parts[0], line), parse_real(parts[1], line),
                parse_real(parts[2], line), parse_real(parts[3], line)};
  law.validate();
  return law;
}

SourceModel parse_source(const std::string& v, int line) {
  if (v == "gaussian") return SourceModel::gaussian();
  if (v == "cauchy") return SourceModel::cauchy();
  const auto open = v.find('(');
  if (open != std::string::npos && v.back() == ')') {
    const std::string head = trim(v.substr(0, open));
    const std::string args = v.substr(open + 1, v.size() - open - 2);
    if (head == "student_t") return SourceModel::student_t(parse_real(trim(args), line));
    if (head == "stable") return SourceModel::exact_stable(parse_law(args, line));
  }
  throw ParseError("line " + std::to_string(line) + ": unknown source '" + v + "'");
}

const std::set<std::string>& known_tolerances() {
  static const std::set<std::string> names = {"mass", "ineq_rel", "ineq_abs", "neg_clamp",
                                              "charfn_edge"};
  return names;
}

}  // namespace

Grid RunConfig::effective_grid() const {
  if (grid) return *grid;
  double alpha = 2.0;
  if (source)
    alpha = source->known_alpha;
  else if (law)
    alpha = law->alpha;
  // wider window for very heavy tails
  return alpha < 1.0 ? make_centered_grid(256.0, std::size_t{1} << 16)
                     : make_centered_grid(64.0, std::size_t{1} << 14);
}

double RunConfig::tolerance(const std::string& name, double fallback) const {
  const auto it = tolerances.find(name);
  return it == tolerances.end() ? fallback : it->second;
}

RunConfig parse_config(const std::string& text, const std::string& command_override) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  std::set<std::string> seen;
  while (std::getline(ss, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string stripped = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParseError("line " + std::to_string(line) + ": empty key or value");
    if (!seen.insert(key).second)
      throw ParseError("line " + std::to_string(line) + ": duplicate key '" + key + "'");

    if (key == "command") {
      cfg.command = value;
    } else if (key == "source") {
      cfg.source = parse_source(value, line);
    } else if (key == "law") {
      cfg.law = parse_law(value, line);
    } else if (key == "ns") {
      for (const auto& part : split(value, ',')) {
        const long n = parse_int(part, line);
        if (n < 1) throw ValidationError("ns entries must be positive");
        cfg.ns.push_back(static_cast<int>(n));
      }
      if (!std::is_sorted(cfg.ns.begin(), cfg.ns.end()))
        throw ValidationError("ns must be non-decreasing");
    } else if (key == "grid") {
      const auto parts = split(value, ',');
      if (parts.size() != 3)
        throw ParseError("line " + std::to_string(line) + ": a grid needs x_lo,dx,count");
      Grid g{parse_real(parts[0], line), parse_real(parts[1], line),
             static_cast<std::size_t>(parse_int(parts[2], line))};
      g.validate();
      cfg.grid = g;
    } else if (key == "out") {
      cfg.output_path = value;
    } else if (key == "plot") {
      cfg.plot_path = value;
    } else if (key == "threads") {
      const long t = parse_int(value, line);
      if (t < 1 || t > 256) throw ValidationError("threads must be in [1,256]");
      cfg.threads = static_cast<int>(t);
    } else if (key == "pad") {
      const long p = parse_int(value, line);
      if (p < 1 || p > 64) throw ValidationError("pad must be in [1,64]");
      cfg.pad = static_cast<int>(p);
    } else if (key.rfind("tol.", 0) == 0) {
      const std::string name = key.substr(4);
      if (!known_tolerances().count(name))
        throw ParseError("line " + std::to_string(line) + ": unknown tolerance '" + name + "'");
      cfg.tolerances[name] = parse_real(value, line);
    } else {
      throw ParseError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }

  if (!command_override.empty()) cfg.command = command_override;
  static const std::set<std::string> commands = {"density", "fisher", "verify", "converge",
                                                 "decompose"};
  if (!commands.count(cfg.command))
    throw ParseError("missing or unknown command '" + cfg.command + "'");
  if (cfg.command == "density" && !cfg.law)
    throw ValidationError("density requires a law");
  if ((cfg.command == "fisher" || cfg.command == "converge" || cfg.command == "decompose") &&
      !cfg.source)
    throw ValidationError(cfg.command + " requires a source");
  if ((cfg.command == "converge" || cfg.command == "decompose") && cfg.ns.empty())
    throw ValidationError(cfg.command + " requires ns");
  return cfg;
}

RunConfig load_config(const std::string& path, const std::string& command_override) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), command_override);
}

}  // namespace sfi
