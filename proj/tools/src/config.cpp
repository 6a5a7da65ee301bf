#include "hgamma/tools/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "hgamma/errors.hpp"

namespace hgamma::tools {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& key, const std::string& where) {
  const std::string t = trim(v);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError(where + ": " + key + " expects a number, got '" + v + "'");
  return x;
}

long long to_integer(const std::string& v, const std::string& key, const std::string& where) {
  const double x = to_double(v, key, where);
  if (x != std::floor(x) || std::abs(x) > 9e15) throw ConfigError(where + ": " + key + " expects an integer, got '" + v + "'");
  return static_cast<long long>(x);
}

bool to_bool(const std::string& v, const std::string& key, const std::string& where) {
  const std::string t = trim(v);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(where + ": " + key + " expects a boolean, got '" + v + "'");
}

std::vector<double> to_list(const std::string& v, const std::string& key, const std::string& where) {
  std::string t = trim(v);
  if (!t.empty() && t.front() == '[' && t.back() == ']') t = t.substr(1, t.size() - 2);
  std::replace(t.begin(), t.end(), ';', ',');
  std::vector<double> out;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(to_double(item, key, where));
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> m;
    auto num = [&m](const char* k, double RunConfig::*f) {
      m[k] = [k, f](RunConfig& c, const std::string& v, const std::string& w) { c.*f = to_double(v, k, w); };
    };
    auto integer = [&m](const char* k, int RunConfig::*f) {
      m[k] = [k, f](RunConfig& c, const std::string& v, const std::string& w) {
        c.*f = static_cast<int>(to_integer(v, k, w));
      };
    };
    auto flag = [&m](const char* k, bool RunConfig::*f) {
      m[k] = [k, f](RunConfig& c, const std::string& v, const std::string& w) { c.*f = to_bool(v, k, w); };
    };
    auto list = [&m](const char* k, std::vector<double> RunConfig::*f) {
      m[k] = [k, f](RunConfig& c, const std::string& v, const std::string& w) { c.*f = to_list(v, k, w); };
    };
    auto choice = [&m](const char* k, std::string RunConfig::*f, std::initializer_list<const char*> allowed) {
      std::vector<const char*> a(allowed);
      m[k] = [k, f, a](RunConfig& c, const std::string& v, const std::string& w) {
        for (const char* x : a)
          if (trim(v) == x) {
            c.*f = x;
            return;
          }
        std::string msg = w + ": " + k + " must be one of";
        for (const char* x : a) msg += std::string(" ") + x;
        throw ConfigError(msg + ", got '" + v + "'");
      };
    };
    m["out"] = [](RunConfig& c, const std::string& v, const std::string&) { c.out_dir = trim(v); };
    m["seed"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      const auto s = to_integer(v, "seed", w);
      if (s < 0) throw ConfigError(w + ": seed must be non-negative");
      c.seed = static_cast<std::uint64_t>(s);
    };
    integer("n", &RunConfig::n);
    num("radius", &RunConfig::radius);
    num("h", &RunConfig::h);
    num("kappa", &RunConfig::kappa);
    list("eps_ladder", &RunConfig::eps_ladder);
    num("epsilon", &RunConfig::epsilon);
    choice("geometry", &RunConfig::geometry, {"half-space", "ball", "empty"});
    integer("axis", &RunConfig::axis);
    num("offset", &RunConfig::offset);
    num("ball_radius", &RunConfig::ball_radius);
    num("sigma", &RunConfig::sigma);
    num("height", &RunConfig::height);
    integer("z_levels", &RunConfig::z_levels);
    integer("perimeter_samples", &RunConfig::perimeter_samples);
    choice("method", &RunConfig::method, {"all", "surface_integral", "smoothed_tv", "minkowski"});
    choice("field", &RunConfig::field, {"eta1", "distance"});
    integer("levels", &RunConfig::levels);
    choice("source", &RunConfig::source, {"origin", "plane"});
    list("radii", &RunConfig::radii);
    list("p", &RunConfig::p);
    list("q", &RunConfig::q);
    integer("samples", &RunConfig::samples);
    integer("grid", &RunConfig::grid);
    flag("minimize", &RunConfig::minimize);
    integer("max_iters", &RunConfig::max_iters);
    num("step", &RunConfig::step);
    num("tolerance", &RunConfig::tolerance);
    integer("angular_cells", &RunConfig::angular_cells);
    flag("warm_start", &RunConfig::warm_start);
    num("init_noise", &RunConfig::init_noise);
    flag("timing", &RunConfig::timing);
    choice("format", &RunConfig::format, {"pgm", "csv", "both", "none"});
    return m;
  }();
  return table;
}

std::string canonical_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

}  // namespace

double RunConfig::single_epsilon() const {
  if (epsilon > 0) return epsilon;
  if (eps_ladder.empty()) throw ConfigError("eps_ladder is empty");
  return eps_ladder.back();
}

void RunConfig::validate() const {
  if (n < 1) throw ConfigError("n must be at least 1");
  if (!(h > 0) || !std::isfinite(h)) throw ConfigError("h must be positive");
  if (!(radius > 0) || !std::isfinite(radius)) throw ConfigError("radius must be positive");
  if (!(kappa > 0) || !std::isfinite(kappa))
    throw DomainError("kappa must be positive: lambda = exp(kappa / eps) must grow as eps -> 0");
  if (eps_ladder.empty()) throw ConfigError("eps_ladder is empty");
  for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
    if (!(eps_ladder[i] > 0)) throw ConfigError("eps_ladder entries must be positive");
    if (i > 0 && !(eps_ladder[i] < eps_ladder[i - 1])) throw ConfigError("eps_ladder must be strictly decreasing");
  }
  if (epsilon < 0) throw ConfigError("epsilon must be non-negative");
  if (axis < 1 || axis > 2 * n) throw ConfigError("axis must lie in 1.." + std::to_string(2 * n));
  if (!(ball_radius > 0)) throw ConfigError("ball_radius must be positive");
  if (!(sigma > 0)) throw ConfigError("sigma must be positive");
  if (!(height > 0)) throw ConfigError("height must be positive");
  if (z_levels < 1) throw ConfigError("z_levels must be at least 1");
  if (perimeter_samples < 2) throw ConfigError("perimeter_samples must be at least 2");
  if (levels < 1) throw ConfigError("levels must be positive");
  if (samples < 1) throw ConfigError("samples must be positive");
  if (grid < 2) throw ConfigError("grid must be at least 2");
  const std::size_t dim = static_cast<std::size_t>(2 * n + 1);
  if (p.size() != dim || q.size() != dim) throw ConfigError("p and q need " + std::to_string(dim) + " coordinates");
  if (max_iters < 0) throw ConfigError("max_iters must be non-negative");
  if (!(step > 0)) throw ConfigError("step must be positive");
  if (!(tolerance >= 0)) throw ConfigError("tolerance must be non-negative");
  if (angular_cells < 2) throw ConfigError("angular_cells must be at least 2");
  if (!(init_noise >= 0)) throw ConfigError("init_noise must be non-negative");
}

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> c{"distance", "eikonal",   "perimeter", "coarea",      "volume-exponent",
                                          "trace-check", "g1d",    "profile",   "lemma-check", "recover",
                                          "energy",   "sweep",     "minimize"};
  return c;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> k = [] {
    std::vector<std::string> out;
    for (const auto& [key, _] : setters()) out.push_back(key);
    return out;
  }();
  return k;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, const std::string& where) {
  const auto& table = setters();
  const auto it = table.find(canonical_key(trim(key)));
  if (it == table.end()) throw ConfigError(where + ": unknown key '" + trim(key) + "'");
  it->second(cfg, value, where);
}

void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin) {
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      const auto upto = std::min<std::size_t>(e.byte, text.size());
      const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
      throw ConfigError(origin + ":" + std::to_string(line) + ": invalid JSON");
    }
    if (!j.is_object()) throw ConfigError(origin + ": top level must be an object");
    for (const auto& [key, value] : j.items()) {
      std::string v;
      if (value.is_string()) {
        v = value.get<std::string>();
      } else if (value.is_array()) {
        for (const auto& x : value) {
          if (!x.is_number()) throw ConfigError(origin + ": " + key + " must hold numbers");
          if (!v.empty()) v += ',';
          v += x.dump();
        }
      } else {
        v = value.dump();
      }
      apply_setting(cfg, key, v, origin + ": " + key);
    }
    return;
  }
  std::istringstream is(text);
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const std::string where = origin + ":" + std::to_string(number);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1), where);
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str(), path);
}

std::string usage() {
  std::string s = "usage: hgamma <command> [--config FILE] [--out DIR] [--key value ...]\ncommands:";
  for (const auto& c : known_commands()) s += " " + c;
  s += "\nkeys:";
  for (const auto& k : known_keys()) s += " " + k;
  return s + "\n";
}

RunConfig parse_config(int argc, const char* const* argv) {
  CLI::App app{"hgamma"};
  app.set_help_flag();
  std::string command, config_path;
  app.add_option("command", command)->required();
  app.add_option("--config", config_path);
  std::map<std::string, std::string> flags;
  for (const auto& key : known_keys()) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    app.add_option("--" + name, flags[key]);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    throw ConfigError(std::string(e.what()) + "\n" + usage());
  }
  if (std::find(known_commands().begin(), known_commands().end(), command) == known_commands().end())
    throw ConfigError("unknown command '" + command + "'\n" + usage());

  RunConfig cfg;
  cfg.command = command;
  cfg.config_path = config_path;
  if (!config_path.empty()) apply_config_file(cfg, config_path);
  for (const auto& key : known_keys()) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    if (app.get_option("--" + name)->count() > 0) apply_setting(cfg, key, flags[key], "--" + name);
  }
  cfg.validate();
  return cfg;
}

nlohmann::json to_json(const RunConfig& c) {
  return {{"command", c.command},
          {"config_path", c.config_path},
          {"out", c.out_dir},
          {"seed", c.seed},
          {"n", c.n},
          {"radius", c.radius},
          {"h", c.h},
          {"kappa", c.kappa},
          {"eps_ladder", c.eps_ladder},
          {"epsilon", c.epsilon},
          {"geometry", c.geometry},
          {"axis", c.axis},
          {"offset", c.offset},
          {"ball_radius", c.ball_radius},
          {"sigma", c.sigma},
          {"height", c.height},
          {"z_levels", c.z_levels},
          {"perimeter_samples", c.perimeter_samples},
          {"method", c.method},
          {"field", c.field},
          {"levels", c.levels},
          {"source", c.source},
          {"radii", c.radii},
          {"p", c.p},
          {"q", c.q},
          {"samples", c.samples},
          {"grid", c.grid},
          {"minimize", c.minimize},
          {"max_iters", c.max_iters},
          {"step", c.step},
          {"tolerance", c.tolerance},
          {"angular_cells", c.angular_cells},
          {"warm_start", c.warm_start},
          {"init_noise", c.init_noise},
          {"timing", c.timing},
          {"format", c.format}};
}

}  // namespace hgamma::tools
