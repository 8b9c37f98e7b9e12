#include "varcont/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "varcont/continuation.hpp"
#include "varcont/probes.hpp"
#include "varcont/report.hpp"

namespace varcont {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("not a number");
  return v;
}

template <class Int>
Int to_integer(const std::string& s) {
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("not an integer");
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "on" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "off" || s == "no" || s == "0") return false;
  throw std::invalid_argument("not a boolean");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += fmt(xs[i]);
  }
  return out;
}

struct Field {
  std::string section;
  std::string key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class M>
Field real(std::string sec, std::string key, M member) {
  return {std::move(sec), std::move(key), [member](RunConfig& c, const std::string& v) { member(c) = to_double(v); },
          [member](const RunConfig& c) { return format_double(member(c)); }};
}

template <class M>
Field integer(std::string sec, std::string key, M member) {
  return {std::move(sec), std::move(key),
          [member](RunConfig& c, const std::string& v) {
            member(c) = to_integer<std::remove_reference_t<decltype(member(c))>>(v);
          },
          [member](const RunConfig& c) { return std::to_string(member(c)); }};
}

template <class M>
Field boolean(std::string sec, std::string key, M member) {
  return {std::move(sec), std::move(key), [member](RunConfig& c, const std::string& v) { member(c) = to_bool(v); },
          [member](const RunConfig& c) { return std::string(member(c) ? "true" : "false"); }};
}

template <class M>
Field text(std::string sec, std::string key, M member) {
  return {std::move(sec), std::move(key), [member](RunConfig& c, const std::string& v) { member(c) = v; },
          [member](const RunConfig& c) { return member(c); }};
}

template <class M>
Field real_list(std::string sec, std::string key, M member) {
  return {std::move(sec), std::move(key),
          [member](RunConfig& c, const std::string& v) {
            std::vector<double> xs;
            for (const auto& s : split_list(v)) xs.push_back(to_double(s));
            member(c) = std::move(xs);
          },
          [member](const RunConfig& c) { return join(member(c), format_double); }};
}

template <class M>
Field int_list(std::string sec, std::string key, M member) {
  return {std::move(sec), std::move(key),
          [member](RunConfig& c, const std::string& v) {
            std::vector<int> xs;
            for (const auto& s : split_list(v)) xs.push_back(to_integer<int>(s));
            member(c) = std::move(xs);
          },
          [member](const RunConfig& c) {
            return join(member(c), [](int x) { return std::to_string(x); });
          }};
}

#define VC_M(expr) [](auto& c) -> auto& { return c.expr; }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(integer("problem", "dimension", VC_M(problem.dimension)));
    f.push_back(real("problem", "radius", VC_M(problem.radius)));
    f.push_back(integer("problem", "nodes", VC_M(problem.nodes)));
    f.push_back({"problem", "domain",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "whole_space") c.problem.domain = DomainKind::TruncatedWholeSpace;
                   else if (v == "ball") c.problem.domain = DomainKind::Ball;
                   else throw std::invalid_argument("expected whole_space or ball");
                 },
                 [](const RunConfig& c) {
                   return std::string(c.problem.domain == DomainKind::Ball ? "ball" : "whole_space");
                 }});
    f.push_back({"problem", "mode",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "autonomous") c.problem.mode = Mode::Autonomous;
                   else if (v == "weighted") c.problem.mode = Mode::Weighted;
                   else if (v == "forced") c.problem.mode = Mode::Forced;
                   else throw std::invalid_argument("expected autonomous, weighted or forced");
                 },
                 [](const RunConfig& c) {
                   switch (c.problem.mode) {
                     case Mode::Autonomous: return std::string("autonomous");
                     case Mode::Weighted: return std::string("weighted");
                     default: return std::string("forced");
                   }
                 }});
    f.push_back(text("problem", "nonlinearity", VC_M(problem.nonlinearity)));
    f.push_back(real_list("problem", "coefficients", VC_M(problem.coefficients)));
    f.push_back(real_list("problem", "exponents", VC_M(problem.exponents)));
    f.push_back(real("problem", "amplitude", VC_M(problem.amplitude)));
    f.push_back(text("problem", "potential", VC_M(problem.potential)));
    f.push_back(boolean("problem", "force_positive", VC_M(problem.force_positive)));

    f.push_back(integer("solver", "path_points", VC_M(solver.path_points)));
    f.push_back(integer("solver", "max_outer_iters", VC_M(solver.max_outer_iters)));
    f.push_back(real("solver", "grad_tol", VC_M(solver.grad_tol)));
    f.push_back(real("solver", "initial_step", VC_M(solver.initial_step)));
    f.push_back(real("solver", "shrink", VC_M(solver.shrink)));
    f.push_back(real("solver", "sufficient_decrease", VC_M(solver.sufficient_decrease)));
    f.push_back(integer("solver", "reparametrize_every", VC_M(solver.reparametrize_every)));
    f.push_back(real("solver", "newton_switch", VC_M(solver.newton_switch)));

    f.push_back(real("sweep", "lambda", VC_M(sweep.lambda)));
    f.push_back(real("sweep", "lambda_min", VC_M(sweep.lambda_min)));
    f.push_back(real("sweep", "lambda_max", VC_M(sweep.lambda_max)));
    f.push_back(real("sweep", "lambda_step", VC_M(sweep.lambda_step)));
    f.push_back(real_list("sweep", "lambdas", VC_M(sweep.lambdas)));
    f.push_back(real("sweep", "lambda0", VC_M(sweep.lambda0)));
    f.push_back(boolean("sweep", "warm", VC_M(sweep.warm)));
    f.push_back(integer("sweep", "neighbors", VC_M(sweep.neighbors)));

    f.push_back(real("forced", "exponent", VC_M(forced.exponent)));
    f.push_back(real("forced", "q", VC_M(forced.q)));
    f.push_back(real("forced", "radius", VC_M(forced.radius)));
    f.push_back(integer("forced", "nodes", VC_M(forced.nodes)));
    f.push_back(text("forced", "profile", VC_M(forced.profile)));
    f.push_back(real("forced", "amplitude", VC_M(forced.amplitude)));
    f.push_back(real("forced", "alpha_max_factor", VC_M(forced.alpha_max_factor)));
    f.push_back(real("forced", "resolution_factor", VC_M(forced.resolution_factor)));
    f.push_back(real_list("forced", "limit_factors", VC_M(forced.limit_factors)));
    f.push_back(integer("forced", "random_probes", VC_M(forced.random_probes)));

    f.push_back(int_list("verify", "ladder", VC_M(verify.ladder)));
    f.push_back(integer("verify", "gradient_pairs", VC_M(verify.gradient_pairs)));

    f.push_back(text("run", "output_dir", VC_M(output_dir)));
    f.push_back(integer("run", "seed", VC_M(seed)));
    f.push_back(integer("run", "threads", VC_M(threads)));
    return f;
  }();
  return table;
}

#undef VC_M

void assign(RunConfig& cfg, const std::string& section, const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (f.section == section && f.key == key) {
      try {
        f.set(cfg, value);
      } catch (const std::exception& e) {
        throw ConfigError(section + "." + key + ": cannot use '" + value + "' (" + e.what() + ")");
      }
      return;
    }
  }
  throw ConfigError("unknown key '" + section + "." + key + "'");
}

RunConfig parse_ini(const std::string& text) {
  RunConfig cfg;
  std::stringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty()) throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
    assign(cfg, section, trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
  }
  return cfg;
}

std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return v.dump();
  if (v.is_number_float()) return format_double(v.get<double>());
  throw ConfigError("unsupported JSON value " + v.dump());
}

RunConfig parse_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("JSON config must be an object of sections");
  RunConfig cfg;
  for (const auto& [section, body] : doc.items()) {
    if (!body.is_object()) throw ConfigError("JSON section '" + section + "' must be an object");
    for (const auto& [key, value] : body.items()) {
      std::string s;
      if (value.is_array()) {
        for (std::size_t i = 0; i < value.size(); ++i) s += (i ? ", " : "") + json_scalar(value[i]);
      } else {
        s = json_scalar(value);
      }
      assign(cfg, section, key, s);
    }
  }
  return cfg;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

void validate_config(const RunConfig& c) {
  const auto& p = c.problem;
  require(p.dimension >= 3, "problem.dimension must be at least 3");
  require(p.radius > 0.0, "problem.radius must be positive");
  require(p.nodes >= 16, "problem.nodes must be at least 16");
  try {
    (void)make_nonlinearity(p);
    (void)make_potential(p.potential);
    c.solver.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  require(std::isfinite(c.sweep.lambda_step) && c.sweep.lambda_step > 0.0, "sweep.lambda_step must be positive");
  require(c.sweep.neighbors >= 1, "sweep.neighbors must be at least 1");

  const auto& f = c.forced;
  require(f.exponent > 1.0 && f.exponent < critical_exponent(p.dimension),
          "forced.exponent must lie in ]1, (N+2)/(N-2)[");
  require(f.q > 0.5 * p.dimension, "forced.q must exceed N/2");
  require(f.radius > 0.0, "forced.radius must be positive");
  require(f.nodes >= 16, "forced.nodes must be at least 16");
  const auto names = reference_profile_names();
  require(std::find(names.begin(), names.end(), f.profile) != names.end(), "forced.profile: unknown profile");
  require(f.amplitude >= 0.0, "forced.amplitude must be nonnegative");
  require(f.alpha_max_factor > 0.0, "forced.alpha_max_factor must be positive");
  require(f.resolution_factor > 0.0, "forced.resolution_factor must be positive");
  require(!f.limit_factors.empty(), "forced.limit_factors must not be empty");
  for (std::size_t i = 0; i < f.limit_factors.size(); ++i) {
    require(f.limit_factors[i] > 0.0, "forced.limit_factors must be positive");
    require(i == 0 || f.limit_factors[i] < f.limit_factors[i - 1], "forced.limit_factors must be strictly decreasing");
  }
  require(f.random_probes >= 0, "forced.random_probes must be nonnegative");

  require(!c.verify.ladder.empty(), "verify.ladder must not be empty");
  for (std::size_t i = 0; i < c.verify.ladder.size(); ++i) {
    require(c.verify.ladder[i] >= 16, "verify.ladder entries must be at least 16");
    require(i == 0 || c.verify.ladder[i] > c.verify.ladder[i - 1], "verify.ladder must be increasing");
  }
  require(c.verify.gradient_pairs >= 1, "verify.gradient_pairs must be at least 1");
  require(!c.output_dir.empty(), "run.output_dir must not be empty");
  require(c.threads >= 1, "run.threads must be at least 1");
}

RunConfig parse_config(const std::string& text, ConfigFormat format) {
  RunConfig cfg = format == ConfigFormat::Json ? parse_json(text) : parse_ini(text);
  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  return parse_config(buf.str(), json ? ConfigFormat::Json : ConfigFormat::Ini);
}

std::string serialize_config(const RunConfig& config) {
  std::string out, section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) out += '\n';
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += f.key + " = " + f.get(config) + "\n";
  }
  return out;
}

Nonlinearity make_nonlinearity(const ProblemSpec& spec) {
  if (spec.nonlinearity == "power_sum") {
    if (spec.coefficients.size() != spec.exponents.size() || spec.exponents.empty())
      throw ConfigError("problem.coefficients and problem.exponents must have the same nonzero length");
    std::vector<PowerTerm> terms;
    for (std::size_t i = 0; i < spec.exponents.size(); ++i) terms.push_back({spec.coefficients[i], spec.exponents[i]});
    return Nonlinearity::power_sum(std::move(terms));
  }
  if (spec.nonlinearity == "saturating_cubic") return Nonlinearity::saturating_cubic(spec.amplitude);
  if (spec.nonlinearity == "positive_part_power") {
    if (spec.exponents.size() != 1) throw ConfigError("positive_part_power takes exactly one exponent");
    return Nonlinearity::positive_part_power(spec.exponents.front());
  }
  throw ConfigError("unknown nonlinearity '" + spec.nonlinearity + "'");
}

Potential make_potential(const std::string& name) {
  if (name == "one") return Potential::one();
  if (name == "one_plus_exp") return Potential::radial([](double r) { return 1.0 + std::exp(-r); }, false, name);
  if (name == "exp_decay") return Potential::radial([](double r) { return std::exp(-r); }, true, name);
  throw ConfigError("unknown potential '" + name + "'");
}

GridPtr make_problem_grid(const RunConfig& c) {
  return make_grid(c.problem.dimension, c.problem.radius, c.problem.nodes, c.problem.domain);
}

GridPtr make_forced_grid(const RunConfig& c) {
  return make_grid(c.problem.dimension, c.forced.radius, c.forced.nodes, DomainKind::Ball);
}

Problem make_lambda_problem(const RunConfig& c, const GridPtr& grid) {
  const Nonlinearity nl = make_nonlinearity(c.problem);
  if (c.problem.mode == Mode::Weighted)
    return Problem::weighted(grid, nl, make_potential(c.problem.potential), c.problem.force_positive);
  return Problem::autonomous(grid, nl, c.problem.force_positive);
}

std::vector<double> sweep_grid(const RunConfig& c) {
  if (!c.sweep.lambdas.empty()) return c.sweep.lambdas;
  return lambda_range(c.sweep.lambda_min, c.sweep.lambda_max, c.sweep.lambda_step);
}

}  // namespace varcont
