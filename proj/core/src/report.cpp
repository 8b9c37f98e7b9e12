#include "varcont/report.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "varcont/errors.hpp"

namespace varcont {

namespace {

using nlohmann::json;

// NaN and infinities are not JSON numbers; emit null for them.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

const char* flag(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string branch_csv(const Branch& branch) {
  std::string out =
      "lambda,level,grad_residual,pohozaev_residual,nehari_residual,energy_identity_residual,l2_sq,grad_sq,u_at_0,"
      "positive\n";
  for (const auto& r : branch.records) {
    out += format_double(r.lambda) + ',' + format_double(r.level) + ',' + format_double(r.grad_residual) + ',' +
           format_double(r.pohozaev_residual) + ',' + format_double(r.nehari_residual) + ',' +
           format_double(r.energy_identity_residual) + ',' + format_double(r.l2_sq) + ',' +
           format_double(r.grad_sq) + ',' + format_double(r.u[0]) + ',' + flag(r.positive) + '\n';
  }
  return out;
}

std::string profile_csv(const RadialField& u) {
  std::string out = "r,u\n";
  for (std::size_t i = 0; i < u.size(); ++i) out += format_double(u.grid().node(i)) + ',' + format_double(u[i]) + '\n';
  return out;
}

std::string threshold_csv(const ThresholdResult& result) {
  std::string out = "alpha,converged,level,min_u,positive\n";
  for (const auto& p : result.probes) {
    out += format_double(p.alpha) + ',' + flag(p.converged) + ',' + format_double(p.level) + ',' +
           format_double(p.min_u) + ',' + flag(p.positive) + '\n';
  }
  return out;
}

std::string limit_csv(const LimitStudy& study) {
  std::string out = "alpha,sup_dist,c1_dist,level,min_u\n";
  for (const auto& r : study.rows) {
    out += format_double(r.alpha) + ',' + format_double(r.sup_dist) + ',' + format_double(r.c1_dist) + ',' +
           format_double(r.level) + ',' + format_double(r.min_u) + '\n';
  }
  return out;
}

std::string record_summary(const SolutionRecord& r) {
  std::string s;
  s += "lambda                   " + format_double(r.lambda) + "\n";
  s += "converged                " + std::string(flag(r.converged)) + "\n";
  s += "iterations               " + std::to_string(r.iterations) + "\n";
  s += "level                    " + format_double(r.level) + "\n";
  s += "grad_residual            " + format_double(r.grad_residual) + "\n";
  s += "pohozaev_residual        " + format_double(r.pohozaev_residual) + "\n";
  s += "nehari_residual          " + format_double(r.nehari_residual) + "\n";
  s += "energy_identity_residual " + format_double(r.energy_identity_residual) + "\n";
  s += "l2_sq                    " + format_double(r.l2_sq) + "\n";
  s += "grad_sq                  " + format_double(r.grad_sq) + "\n";
  s += "u_at_0                   " + format_double(r.u.empty() ? 0.0 : r.u[0]) + "\n";
  s += "positive                 " + std::string(flag(r.positive)) + "\n";
  return s;
}

std::string sweep_diagnostics_json(const Branch& branch, const BranchDiagnostics& diag,
                                   const std::optional<ScalingReport>& scaling,
                                   const std::optional<TransferReport>& transfer,
                                   const std::optional<LimitReport>& limit) {
  json j;
  j["records"] = branch.records.size();
  j["warm_started"] = branch.warm_started;
  json gaps = json::array();
  for (const auto& g : branch.gaps) gaps.push_back({{"lambda", number(g.lambda)}, {"reason", g.reason}});
  j["gaps"] = gaps;
  j["levels_interval"] = {number(diag.level_min), number(diag.level_max)};
  j["monotone"] = diag.monotone;
  j["max_level_jump"] = number(diag.max_level_jump);
  j["max_field_jump"] = number(diag.max_field_jump);
  j["max_h1_sq"] = number(diag.max_h1_sq);
  if (scaling) {
    json s;
    s["theta"] = number(scaling->theta);
    s["lambda_ref"] = number(scaling->lambda_ref);
    s["max_rel_deviation"] = number(scaling->max_rel_deviation);
    json rows = json::array();
    for (const auto& e : scaling->entries)
      rows.push_back({{"lambda", number(e.lambda)}, {"ratio", number(e.ratio)}, {"expected", number(e.expected)}});
    s["entries"] = rows;
    j["scaling"] = s;
  }
  if (transfer) {
    json t;
    t["lambda0"] = number(transfer->lambda0);
    t["all_ok"] = transfer->all_ok;
    t["residual_lipschitz"] = number(transfer->residual_lipschitz);
    t["level_lipschitz"] = number(transfer->level_lipschitz);
    t["residual_decay_order"] = number(transfer->residual_decay_order);
    json rows = json::array();
    for (const auto& e : transfer->entries) {
      rows.push_back({{"lambda", number(e.lambda)},
                      {"residual", number(e.residual)},
                      {"residual_bound", number(e.residual_bound)},
                      {"level_gap", number(e.level_gap)},
                      {"level_bound", number(e.level_bound)},
                      {"ok", e.ok}});
    }
    t["entries"] = rows;
    j["transfer"] = t;
  }
  if (limit) {
    json l;
    l["lambda0"] = number(limit->lambda0);
    l["max_distance"] = number(limit->max_distance);
    l["decay_order"] = number(limit->decay_order);
    json rows = json::array();
    for (const auto& e : limit->entries) rows.push_back({{"lambda", number(e.lambda)}, {"distance", number(e.distance)}});
    l["entries"] = rows;
    j["branch_limit"] = l;
  }
  return j.dump(2) + "\n";
}

std::string threshold_report_json(const GeometryConstants& g, const ThresholdResult& t, const LimitStudy& limit) {
  json j;
  j["geometry"] = {{"a", number(g.a)},
                   {"b", number(g.b)},
                   {"beta", number(g.beta)},
                   {"c_sobolev", number(g.c_sobolev)},
                   {"c_used", number(g.c_used)}};
  j["threshold"] = {{"alpha_hat", number(t.alpha_hat)},
                    {"alpha_max", number(t.alpha_max)},
                    {"alpha_fail", number(t.alpha_fail)},
                    {"degenerate", t.degenerate},
                    {"probes", t.probes.size()},
                    {"non_monotone", t.non_monotone}};
  json rows = json::array();
  for (const auto& r : limit.rows) {
    rows.push_back({{"alpha", number(r.alpha)},
                    {"sup_dist", number(r.sup_dist)},
                    {"pairing", number(r.pairing)},
                    {"forcing_norm", number(r.forcing_norm)},
                    {"converged", r.converged}});
  }
  j["limit_study"] = {{"base_level", number(limit.base.level)},
                      {"base_sup", number(limit.base.u.sup_norm())},
                      {"distances_decreasing", limit.distances_decreasing},
                      {"lipschitz", number(limit.lipschitz)},
                      {"rows", rows}};
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("short write to '" + path + "'");
}

}  // namespace varcont
