// midlayer: exact desk-scale computations on the middle two layers of the
// Boolean lattice: independence polynomials, polymer/cluster expansions,
// container sums, and the μ̂ sampling measure, with machine-readable reports.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "midlayer/cluster.hpp"
#include "midlayer/oracle.hpp"
#include "midlayer/report.hpp"
#include "midlayer/sampler.hpp"
#include "midlayer/verify.hpp"

using namespace midlayer;

namespace {

struct OutputOptions {
  std::string format = "json";
  std::string output;  // empty = stdout
};

void add_output_options(CLI::App* cmd, OutputOptions& out) {
  cmd->add_option("--format", out.format, "Report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--output", out.output, "Write the report to a file instead of stdout");
}

double wall_ms_since(std::chrono::steady_clock::time_point t0) {
  if (std::getenv("MIDLAYER_FIXED_TIME")) return 0.0;
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

void emit(const OutputOptions& opt, const std::string& payload) {
  if (opt.output.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream f(opt.output, std::ios::trunc);
  if (!f) throw parse_error("cannot open output file: " + opt.output);
  f << payload;
  if (!payload.empty() && payload.back() != '\n') f << "\n";
}

std::string render(const OutputOptions& opt, const Json& envelope,
                   const std::string& csv_override = "") {
  if (opt.format == "json") return envelope.dump(2);
  if (!csv_override.empty()) return csv_override;
  std::string out = "field,value\n";
  out += "report," + csv_escape(envelope.dump()) + "\n";
  return out;
}

Json envelope(const std::string& command, Json inputs, Json results,
              std::vector<std::string> warnings, double wall_ms) {
  Json env = Json::object();
  env["command"] = command;
  env["schema_version"] = "1";
  env["inputs"] = std::move(inputs);
  env["results"] = std::move(results);
  Json warn = Json::array();
  for (auto& w : warnings) warn.push_back(w);
  env["warnings"] = std::move(warn);
  env["wall_time_ms"] = wall_ms;
  return env;
}

Json labels_json(const LayerGraph& g, Side side, uint64_t mask) {
  Json arr = Json::array();
  for (int v = 0; v < g.side_size(side); v++)
    if (mask >> v & 1) arr.push_back(vertex_label(g.vertex_bits(side, v)));
  return arr;
}

Rat parse_lambda(const std::string& s) {
  Rat l = Rat::parse(s);
  if (l.sign() <= 0) throw parse_error("lambda must be positive, got " + s);
  return l;
}

// ---------------------------------------------------------------- commands

int cmd_graph(int n, int k, const std::string& iso_mode, int iso_max, uint64_t iso_budget,
              uint64_t iso_samples, uint64_t seed, const std::string& side_name_opt,
              const std::string& tl_vertex, int tl_size, const OutputOptions& out_opt) {
  auto t0 = std::chrono::steady_clock::now();
  LayerGraph g(n, k);
  Json inputs = Json::object();
  inputs["n"] = n;
  inputs["k"] = k;
  Json res = Json::object();
  res["upper"] = Json::object();
  res["upper"]["size"] = g.upper_size();
  res["upper"]["degree"] = g.degree(Side::upper);
  res["lower"] = Json::object();
  res["lower"]["size"] = g.lower_size();
  res["lower"]["degree"] = g.degree(Side::lower);
  res["middle_layers"] = g.is_middle_layers();
  std::vector<std::string> warnings;

  Side side = side_name_opt.empty() ? Side::upper : parse_side(side_name_opt);
  if (!iso_mode.empty()) {
    if (iso_mode != "i" && iso_mode != "ii" && iso_mode != "iii")
      throw parse_error("isoperimetry mode must be i, ii, or iii");
    char mode = iso_mode == "i" ? 'i' : iso_mode == "ii" ? 'j' : 'k';
    auto rep = isoperimetry_check(g, mode, side, iso_max, iso_budget, iso_samples, seed);
    Json iso = Json::object();
    iso["mode"] = iso_mode;
    iso["side"] = side_name(side);
    iso["exhaustive"] = rep.exhaustive;
    iso["sets_checked"] = rep.sets_checked;
    iso["max_size"] = rep.max_size;
    iso["worst_ratio"] = rep.worst_ratio;
    iso["pass"] = rep.pass;
    if (!rep.exhaustive) {
      iso["samples"] = rep.samples;
      iso["seed"] = rep.seed;
      warnings.push_back("isoperimetry verified on a random sample, not exhaustively");
    }
    Json wit = Json::array();
    for (auto& w : rep.witness) wit.push_back(w);
    iso["witness"] = std::move(wit);
    res["isoperimetry"] = std::move(iso);
  }
  if (!tl_vertex.empty()) {
    int vid = g.vertex_id(side, parse_vertex_label(tl_vertex, n));
    auto r = count_two_linked_containing(g, side, vid, tl_size);
    Json tl = Json::object();
    tl["vertex"] = tl_vertex;
    tl["side"] = side_name(side);
    tl["t"] = tl_size;
    tl["count"] = r.count;
    tl["bound_d_6t"] = r.bound;
    tl["bound_ok"] = r.bound_ok;
    res["two_linked"] = std::move(tl);
  }
  emit(out_opt, render(out_opt, envelope("graph", std::move(inputs), std::move(res),
                                         std::move(warnings), wall_ms_since(t0))));
  return 0;
}

int cmd_count(int d, const std::string& lambda_s, const std::string& method, bool coeffs,
              const std::string& restricted, bool identity, int shards,
              const OutputOptions& out_opt) {
  auto t0 = std::chrono::steady_clock::now();
  Rat lambda = parse_lambda(lambda_s);
  LayerGraph g(2 * d - 1, d);
  Json inputs = Json::object();
  inputs["d"] = d;
  inputs["lambda"] = lambda;
  inputs["method"] = method;
  Json res = Json::object();
  res["n"] = g.n();
  res["d"] = d;
  res["lambda"] = lambda;
  res["method"] = method;

  Rat z;
  int used_shards = 1;
  if (method == "naive") {
    z = exact_Z_naive(g, lambda);
  } else {
    auto hist = sweep_all_subsets(g, Side::upper, shards);
    z = eval_Z_from_histogram(hist, lambda);
    used_shards = hist.shards;
    if (coeffs) {
      Json arr = Json::array();
      for (const Rat& c : independence_coefficients(hist)) arr.push_back(c);
      res["coefficients"] = std::move(arr);
    }
  }
  res["Z"] = z;
  res["ln_Z"] = z.log();
  res["shards"] = used_shards;

  std::vector<std::string> warnings;
  if (!restricted.empty()) {
    if (restricted != "m_side" && restricted != "b_both")
      throw parse_error("restricted family must be m_side or b_both");
    Json rj = Json::object();
    rj["family"] = restricted;
    if (restricted == "m_side") {
      auto rh = sweep_restricted(g, Side::upper, shards);
      Rat m = eval_Z_from_histogram(rh, lambda);
      Rat xi = eval_xi_from_histogram(rh, lambda);
      rj["sum"] = m;
      rj["xi"] = xi;
      rj["ln_xi"] = xi.log();
    } else {
      rj["sum"] = b_both_sum(g, lambda);
    }
    res["restricted"] = std::move(rj);
  }
  if (identity) {
    auto rh = sweep_restricted(g, Side::upper, shards);
    Rat xi = eval_xi_from_histogram(rh, lambda);
    Rat b = b_both_sum(g, lambda);
    Rat lhs = Rat(2) * (Rat(1) + lambda).pow(g.upper_size()) * xi;
    Json idj = Json::object();
    idj["two_pow_xi"] = lhs;
    idj["z_plus_b"] = z + b;
    idj["b_sum"] = b;
    idj["xi"] = xi;
    idj["holds"] = (lhs == z + b);
    res["identity"] = std::move(idj);
  }
  emit(out_opt, render(out_opt, envelope("count", std::move(inputs), std::move(res),
                                         std::move(warnings), wall_ms_since(t0))));
  return 0;
}

int cmd_expand(int d, const std::string& lambda_s, int k_max, const std::string& source,
               const std::string& side_s, const OutputOptions& out_opt) {
  auto t0 = std::chrono::steady_clock::now();
  Rat lambda = parse_lambda(lambda_s);
  if (source != "enumerated" && source != "closed-form")
    throw parse_error("source must be closed-form or enumerated");
  TermSource src = source == "enumerated" ? TermSource::enumerated : TermSource::closed_form;
  Side side = side_s.empty() ? Side::upper : parse_side(side_s);
  auto rep = build_expansion_report(d, lambda, k_max, src, side);

  Json inputs = Json::object();
  inputs["d"] = d;
  inputs["lambda"] = lambda;
  inputs["k_max"] = k_max;
  inputs["source"] = source;
  Json res = Json::object();
  res["d"] = rep.d;
  res["lambda"] = rep.lambda;
  Json terms = Json::array(), psums = Json::array();
  for (auto& t : rep.terms) terms.push_back(t);
  for (auto& p : rep.partial_sums) psums.push_back(p);
  res["terms"] = std::move(terms);
  res["partial_sums"] = std::move(psums);
  res["ln_Z_estimate"] = rep.ln_Z_estimate;
  res["epsilon_shape_bound"] = rep.epsilon_shape_bound;
  Json rw = Json::array();
  for (auto& w : rep.warnings) rw.push_back(w);
  res["regime_warnings"] = std::move(rw);

  std::string csv = "k,L_k,partial_sum\n";
  for (size_t i = 0; i < rep.terms.size(); i++)
    csv += std::to_string(i + 1) + "," + rep.terms[i].str() + "," + rep.partial_sums[i].str() +
           "\n";
  emit(out_opt, render(out_opt, envelope("expand", std::move(inputs), std::move(res),
                                         rep.warnings, wall_ms_since(t0)),
                       csv));
  UrsellCache::instance().persist();
  return 0;
}

int cmd_kp_check(int d, const std::string& lambda_s, double aux_c, int cap,
                 const OutputOptions& out_opt) {
  auto t0 = std::chrono::steady_clock::now();
  Rat lambda = parse_lambda(lambda_s);
  LayerGraph g(2 * d - 1, d);
  WeightParams w{lambda, aux_c, d};
  auto rep = kp_check(g, w, cap);
  Json inputs = Json::object();
  inputs["d"] = d;
  inputs["lambda"] = lambda;
  inputs["aux_C"] = aux_c;
  inputs["cap"] = cap;
  Json res = Json::object();
  res["truncated"] = rep.truncated;
  res["polymers"] = rep.polymers;
  res["per_vertex_max"] = rep.per_vertex_max;
  res["vertex_bound"] = rep.vertex_bound;
  res["per_vertex_pass"] = rep.per_vertex_pass;
  res["worst_margin"] = rep.worst_margin;
  res["worst_polymer"] = rep.worst_polymer;
  res["pass"] = rep.pass;
  std::vector<std::string> warnings = regime_warnings(d, lambda);
  if (rep.truncated)
    warnings.push_back("polymer sums truncated at size cap " + std::to_string(cap));
  emit(out_opt, render(out_opt, envelope("kp-check", std::move(inputs), std::move(res),
                                         std::move(warnings), wall_ms_since(t0))));
  return 0;
}

int cmd_container(int d, int a, int b, const std::string& lambda_s, double c1, int max_members,
                  const std::string& side_s, const OutputOptions& out_opt) {
  auto t0 = std::chrono::steady_clock::now();
  Rat lambda = parse_lambda(lambda_s);
  LayerGraph g(2 * d - 1, d);
  Side side = side_s.empty() ? Side::upper : parse_side(side_s);
  auto fam = enumerate_container_family(g, side, a, b);
  Rat sum = container_sum(fam, lambda);
  Json inputs = Json::object();
  inputs["d"] = d;
  inputs["a"] = a;
  inputs["b"] = b;
  inputs["lambda"] = lambda;
  Json res = Json::object();
  res["a"] = a;
  res["b"] = b;
  res["count"] = static_cast<uint64_t>(fam.members.size());
  res["sum"] = sum;
  std::vector<std::string> warnings;
  if (static_cast<int>(fam.members.size()) <= max_members) {
    Json members = Json::array();
    for (const auto& m : fam.members) {
      Json labels = Json::array();
      for (auto& s : vertex_set_labels(g, m)) labels.push_back(s);
      members.push_back(std::move(labels));
    }
    res["members"] = std::move(members);
  } else {
    warnings.push_back("member list omitted (exceeds cap of " + std::to_string(max_members) +
                       ")");
  }
  if (c1 > 0) {
    Json bj = Json::object();
    bj["C1"] = c1;
    bj["value"] = container_bound_shape(g, a, b, c1);
    bj["note"] = "reference shape C(n,d)*exp(-C1(b-a)ln(d)/d^(2/3)); C1 is user-supplied";
    res["bound_shape"] = std::move(bj);
  }
  std::string csv = "a,b,count,sum\n" + std::to_string(a) + "," + std::to_string(b) + "," +
                    std::to_string(fam.members.size()) + "," + sum.str() + "\n";
  emit(out_opt, render(out_opt, envelope("container", std::move(inputs), std::move(res),
                                         std::move(warnings), wall_ms_since(t0)),
                       csv));
  return 0;
}

std::string record_to_jsonl(const LayerGraph& g, const SampleRecord& rec) {
  Json j = Json::object();
  j["index"] = rec.index;
  j["defect"] = side_name(rec.defect);
  j["config"] = labels_json(g, rec.defect, rec.config_mask);
  j["config_size"] = rec.config_size;
  j["num_polymers"] = rec.num_polymers;
  j["upper"] = labels_json(g, Side::upper, rec.upper_mask);
  j["lower"] = labels_json(g, Side::lower, rec.lower_mask);
  j["minority"] = side_name(rec.minority);
  return j.dump();
}

int cmd_sample(int d, const std::string& lambda_s, uint64_t count, uint64_t seed,
               const std::string& records_path, const OutputOptions& out_opt) {
  auto t0 = std::chrono::steady_clock::now();
  if (count == 0) throw parse_error("sample count must be positive");
  Rat lambda = parse_lambda(lambda_s);
  LayerGraph g(2 * d - 1, d);
  MuHatSampler sampler(g, lambda);
  SampleRun run = sampler.run(seed, count);
  if (!records_path.empty()) {
    std::ofstream f(records_path, std::ios::trunc);
    if (!f) throw parse_error("cannot open records file: " + records_path);
    for (const auto& rec : run.records) f << record_to_jsonl(g, rec) << "\n";
  }
  auto stats = minority_defect_stats(g, run);
  Json inputs = Json::object();
  inputs["d"] = d;
  inputs["lambda"] = lambda;
  inputs["count"] = count;
  inputs["seed"] = seed;
  Json res = Json::object();
  res["samples"] = stats.samples;
  res["rate_minority_ne_defect"] = stats.rate_minority_ne_defect;
  res["mean_config_size"] = stats.mean_config_size;
  res["mean_config_fraction"] = stats.mean_config_fraction;
  Json bounds = Json::object();
  bounds["rate_asymptotic"] = stats.bound_rate;
  bounds["fraction_asymptotic"] = stats.bound_fraction;
  bounds["note"] = "asymptotic reference values, informational at small d";
  res["reference_bounds"] = std::move(bounds);
  if (!records_path.empty()) res["records"] = records_path;
  emit(out_opt, render(out_opt, envelope("sample", std::move(inputs), std::move(res),
                                         regime_warnings(d, lambda), wall_ms_since(t0))));
  return 0;
}

int cmd_census(int d, const std::string& lambda_s, const std::string& mode, uint64_t samples,
               uint64_t seed, const OutputOptions& out_opt) {
  auto t0 = std::chrono::steady_clock::now();
  Rat lambda = parse_lambda(lambda_s);
  LayerGraph g(2 * d - 1, d);
  if (mode != "sampled" && mode != "exact") throw parse_error("census mode: exact or sampled");
  CensusMode m = mode == "sampled" ? CensusMode::sampled : CensusMode::exact;
  auto rep = structure_census(g, lambda, m, samples, seed);
  Json inputs = Json::object();
  inputs["d"] = d;
  inputs["lambda"] = lambda;
  inputs["mode"] = mode;
  Json res = Json::object();
  Json profiles = Json::array();
  std::string csv = "max_comp_upper,max_comp_lower,mass,count\n";
  for (const auto& p : rep.profiles) {
    Json pj = Json::object();
    pj["max_comp_upper"] = p.max_comp_upper;
    pj["max_comp_lower"] = p.max_comp_lower;
    if (m == CensusMode::exact) pj["mass"] = p.mass;
    pj["count"] = p.count;
    profiles.push_back(std::move(pj));
    csv += std::to_string(p.max_comp_upper) + "," + std::to_string(p.max_comp_lower) + "," +
           (m == CensusMode::exact ? p.mass.str() : "") + "," + std::to_string(p.count) + "\n";
  }
  res["profiles"] = std::move(profiles);
  std::vector<std::string> warnings;
  if (m == CensusMode::exact) {
    res["property_fraction"] = rep.property_fraction;
  } else {
    res["property_rate"] = rep.property_rate;
    res["samples"] = rep.samples;
    res["proxy_measure"] = true;
    warnings.push_back(
        "sampled census draws from the mu-hat measure, a proxy for the hard-core law");
  }
  emit(out_opt, render(out_opt, envelope("census", std::move(inputs), std::move(res),
                                         std::move(warnings), wall_ms_since(t0)),
                       csv));
  return 0;
}

int cmd_verify(const std::string& suite, int shards, uint64_t samples, uint64_t seed,
               const OutputOptions& out_opt) {
  auto t0 = std::chrono::steady_clock::now();
  if (suite != "fast" && suite != "all") throw parse_error("suite must be fast or all");
  VerifyOptions opt;
  opt.full = suite == "all";
  opt.shards = shards;
  opt.samples = samples;
  opt.seed = seed;
  opt.progress = &std::cerr;
  auto checks = run_verify(opt);
  int failed = 0;
  Json arr = Json::array();
  std::string csv = "name,pass,ms,detail\n";
  bool fixed_time = std::getenv("MIDLAYER_FIXED_TIME") != nullptr;
  for (const auto& c : checks) {
    if (!c.pass) failed++;
    Json cj = Json::object();
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["detail"] = c.detail;
    cj["ms"] = fixed_time ? 0.0 : c.ms;
    arr.push_back(std::move(cj));
    csv += csv_escape(c.name) + "," + (c.pass ? "true" : "false") + "," +
           format_double17(fixed_time ? 0.0 : c.ms) + "," + csv_escape(c.detail) + "\n";
  }
  Json inputs = Json::object();
  inputs["suite"] = suite;
  Json res = Json::object();
  res["checks"] = std::move(arr);
  res["passed"] = static_cast<uint64_t>(checks.size() - failed);
  res["failed"] = static_cast<uint64_t>(failed);
  emit(out_opt, render(out_opt, envelope("verify", std::move(inputs), std::move(res), {},
                                         wall_ms_since(t0)),
                       csv));
  UrsellCache::instance().persist();
  return failed == 0 ? 0 : 5;
}

int cmd_estimate(int d, const std::string& lambda_s, int k, const std::string& source,
                 long boundary_t, const OutputOptions& out_opt) {
  auto t0 = std::chrono::steady_clock::now();
  Rat lambda = parse_lambda(lambda_s);
  std::vector<Rat> terms;
  if (source == "closed-form") {
    if (k > 2) throw parse_error("closed-form terms exist only for k <= 2");
    auto [L1, L2] = closed_form_terms(d, lambda);
    terms = {L1, L2};
  } else if (source == "enumerated") {
    LayerGraph g(2 * d - 1, d);
    for (int j = 1; j <= k; j++) terms.push_back(expansion_term(g, Side::upper, lambda, j));
  } else {
    throw parse_error("source must be closed-form or enumerated");
  }
  auto pred = predict_partition(d, lambda, k, terms);
  auto t14 = asymptotic_count_estimate(d);
  Json inputs = Json::object();
  inputs["d"] = d;
  inputs["lambda"] = lambda;
  inputs["k"] = k;
  inputs["source"] = source;
  Json res = Json::object();
  Json pj = Json::object();
  pj["k"] = pred.k;
  pj["ln_Z_estimate"] = pred.ln_Z_estimate;
  pj["epsilon_shape_bound"] = pred.epsilon_shape_bound;
  res["prediction"] = std::move(pj);
  Json tj = Json::object();
  tj["N"] = t14.N;
  tj["term_first"] = t14.term_first;
  tj["term_second"] = t14.term_second;
  tj["log2_count"] = t14.log2_count;
  tj["stirling_N"] = t14.stirling_N;
  res["independent_set_count"] = std::move(tj);
  std::vector<std::string> warnings = pred.warnings;
  for (auto& w : t14.warnings) warnings.push_back(w);

  // the one-layer lower-bound construction: exact at small d, formula always
  {
    Json ej = Json::object();
    try {
      auto ex = one_sided_lower_bound(d);
      ej["t"] = static_cast<int64_t>(ex.t);
      ej["exact_sum"] = ex.exact_sum;
      ej["subsets"] = ex.subsets;
      ej["formula_log2"] = ex.formula_log2;
    } catch (const scale_error& e) {
      double N = static_cast<double>(asymptotic_count_estimate(d).N);
      ej["formula_log2"] = 1.0 + N +
                           (N * std::pow(2.0, -d) / std::log(2.0) +
                            d * (d - 1) / 2.0 * N * std::pow(2.0, -2.0 * d));
      warnings.push_back(std::string("construction sum is formula-only at this d: ") + e.what());
    }
    res["lower_bound_construction"] = std::move(ej);
  }
  if (boundary_t >= 0) {
    auto eb = expected_boundary(d, boundary_t);
    Json bj = Json::object();
    bj["t"] = static_cast<int64_t>(boundary_t);
    bj["exact"] = eb.exact;
    bj["approx"] = eb.paper_approx;
    res["expected_boundary"] = std::move(bj);
  }
  emit(out_opt, render(out_opt, envelope("estimate", std::move(inputs), std::move(res),
                                         std::move(warnings), wall_ms_since(t0))));
  if (source == "enumerated") UrsellCache::instance().persist();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact polymer-model and cluster-expansion computations on the middle two "
               "layers of the Boolean lattice"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read defaults from a key=value file");

  OutputOptions out_opt;

  auto* graph = app.add_subcommand("graph", "Build B(n,k) and run structural checkers");
  int g_n = 5, g_k = 3;
  std::string g_iso, g_side, g_tl_vertex;
  int g_iso_max = 0, g_tl_size = 2;
  uint64_t g_iso_budget = 1ull << 22, g_iso_samples = 200'000, g_seed = 1;
  graph->add_option("--n", g_n, "Ground set size")->required();
  graph->add_option("--k", g_k, "Layer index (vertices are k- and (k-1)-subsets)")->required();
  graph->add_option("--iso", g_iso, "Isoperimetry checker mode: i, ii, or iii");
  graph->add_option("--iso-max-size", g_iso_max, "Cap |S| below the mode default");
  graph->add_option("--iso-budget", g_iso_budget, "Max states for the exhaustive scan");
  graph->add_option("--iso-samples", g_iso_samples, "Sample count when not exhaustive");
  graph->add_option("--seed", g_seed, "Seed for sampled scans");
  graph->add_option("--side", g_side, "Side for checkers: upper or lower");
  graph->add_option("--two-linked-vertex", g_tl_vertex,
                    "Count 2-linked sets containing this vertex, e.g. {1,2,3}");
  graph->add_option("--two-linked-size", g_tl_size, "Set size t for the 2-linked count");
  add_output_options(graph, out_opt);

  auto* count = app.add_subcommand("count", "Exact independence polynomial Z(λ) on B(2d-1,d)");
  int c_d = 3, c_shards = 0;
  std::string c_lambda = "1", c_method = "graycode", c_restricted;
  bool c_coeffs = false, c_identity = false;
  count->add_option("--d", c_d, "Middle-layers parameter d")->required();
  count->add_option("--lambda", c_lambda, "Fugacity, e.g. 1, 1/2, 0.25");
  count->add_option("--method", c_method, "graycode or naive")
      ->check(CLI::IsMember({"graycode", "naive"}));
  count->add_flag("--coefficients", c_coeffs, "Include the coefficient vector of Z");
  count->add_option("--restricted", c_restricted,
                    "Also compute a restricted sum: m_side or b_both");
  count->add_flag("--identity", c_identity,
                  "Check 2(1+λ)^N·Ξ = Z + Σ_B exactly (needs d <= 3)");
  count->add_option("--shards", c_shards, "Sweep shard count (0 = hardware)");
  add_output_options(count, out_opt);

  auto* expand = app.add_subcommand("expand", "Cluster-expansion terms L_k and partial sums");
  int e_d = 3, e_kmax = 2;
  std::string e_lambda = "1", e_source = "closed-form", e_side;
  expand->add_option("--d", e_d, "Middle-layers parameter d")->required();
  expand->add_option("--lambda", e_lambda, "Fugacity");
  expand->add_option("--k-max", e_kmax, "Number of terms L_1..L_k");
  expand->add_option("--source", e_source, "closed-form or enumerated");
  expand->add_option("--side", e_side, "Polymer side (symmetric; default upper)");
  add_output_options(expand, out_opt);

  auto* kp = app.add_subcommand("kp-check", "Numeric convergence-condition check");
  int kp_d = 3, kp_cap = 2;
  std::string kp_lambda = "1";
  double kp_c = 1.0;
  kp->add_option("--d", kp_d, "Middle-layers parameter d")->required();
  kp->add_option("--lambda", kp_lambda, "Fugacity");
  kp->add_option("--aux-c", kp_c, "Constant C of the auxiliary weight (>= 1)");
  kp->add_option("--cap", kp_cap, "Polymer size cap for the truncated sums");
  add_output_options(kp, out_opt);

  auto* cont = app.add_subcommand("container", "Container family G(a,b) and its weighted sum");
  int ct_d = 3, ct_a = 1, ct_b = 3, ct_max_members = 10'000;
  std::string ct_lambda = "1", ct_side;
  double ct_c1 = 0;
  cont->add_option("--d", ct_d, "Middle-layers parameter d")->required();
  cont->add_option("--a", ct_a, "Closure size |[A]|")->required();
  cont->add_option("--b", ct_b, "Boundary size |N(A)|")->required();
  cont->add_option("--lambda", ct_lambda, "Fugacity");
  cont->add_option("--c1", ct_c1, "Report the bound shape with this C1 (> 0)");
  cont->add_option("--max-members", ct_max_members, "Member list cap in the report");
  cont->add_option("--side", ct_side, "upper or lower");
  add_output_options(cont, out_opt);

  auto* sample = app.add_subcommand("sample", "Draw independent sets from the μ̂ measure");
  int s_d = 2;
  std::string s_lambda = "1", s_records;
  uint64_t s_count = 1000, s_seed = 42;
  sample->add_option("--d", s_d, "Middle-layers parameter d (needs d <= 3)")->required();
  sample->add_option("--lambda", s_lambda, "Fugacity");
  sample->add_option("--count", s_count, "Number of samples");
  sample->add_option("--seed", s_seed, "Run seed (per-sample streams are derived)");
  sample->add_option("--records", s_records, "Write one JSON record per sample to this file");
  add_output_options(sample, out_opt);

  auto* census = app.add_subcommand("census", "Largest 2-linked component census per side");
  int cn_d = 2;
  std::string cn_lambda = "1", cn_mode = "exact";
  uint64_t cn_samples = 100'000, cn_seed = 42;
  census->add_option("--d", cn_d, "Middle-layers parameter d")->required();
  census->add_option("--lambda", cn_lambda, "Fugacity");
  census->add_option("--mode", cn_mode, "exact (d <= 3) or sampled");
  census->add_option("--samples", cn_samples, "Sample count for sampled mode");
  census->add_option("--seed", cn_seed, "Seed for sampled mode");
  add_output_options(census, out_opt);

  auto* verify = app.add_subcommand("verify", "Run the named invariant and acceptance checks");
  std::string v_suite = "fast";
  int v_shards = 0;
  uint64_t v_samples = 100'000, v_seed = 42;
  verify->add_option("--suite", v_suite, "fast (< 60s) or all (includes the d=4 sweep)");
  verify->add_option("--shards", v_shards, "Sweep shard count (0 = hardware)");
  verify->add_option("--samples", v_samples, "Empirical sample count for sampler checks");
  verify->add_option("--seed", v_seed, "Seed for randomized checks");
  add_output_options(verify, out_opt);

  auto* est = app.add_subcommand("estimate", "Asymptotic formula evaluations with regime flags");
  int es_d = 3, es_k = 2;
  std::string es_lambda = "1", es_source = "closed-form";
  est->add_option("--d", es_d, "Middle-layers parameter d")->required();
  est->add_option("--lambda", es_lambda, "Fugacity");
  est->add_option("--k", es_k, "Truncation order");
  est->add_option("--source", es_source, "closed-form or enumerated");
  long es_boundary_t = -1;
  est->add_option("--boundary-t", es_boundary_t,
                  "Also report E|N(T)| for a uniform random t-subset of the upper layer");
  add_output_options(est, out_opt);

  try {
    app.parse(argc, argv);
    if (graph->parsed())
      return cmd_graph(g_n, g_k, g_iso, g_iso_max, g_iso_budget, g_iso_samples, g_seed, g_side,
                       g_tl_vertex, g_tl_size, out_opt);
    if (count->parsed())
      return cmd_count(c_d, c_lambda, c_method, c_coeffs, c_restricted, c_identity, c_shards,
                       out_opt);
    if (expand->parsed()) return cmd_expand(e_d, e_lambda, e_kmax, e_source, e_side, out_opt);
    if (kp->parsed()) return cmd_kp_check(kp_d, kp_lambda, kp_c, kp_cap, out_opt);
    if (cont->parsed())
      return cmd_container(ct_d, ct_a, ct_b, ct_lambda, ct_c1, ct_max_members, ct_side, out_opt);
    if (sample->parsed()) return cmd_sample(s_d, s_lambda, s_count, s_seed, s_records, out_opt);
    if (census->parsed())
      return cmd_census(cn_d, cn_lambda, cn_mode, cn_samples, cn_seed, out_opt);
    if (verify->parsed()) return cmd_verify(v_suite, v_shards, v_samples, v_seed, out_opt);
    if (est->parsed())
      return cmd_estimate(es_d, es_lambda, es_k, es_source, es_boundary_t, out_opt);
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    Json err = Json::object();
    err["schema_version"] = "1";
    Json ej = Json::object();
    ej["code"] = "parse";
    ej["message"] = e.what();
    err["error"] = std::move(ej);
    std::cout << err.dump(2) << "\n";
    return 2;
  } catch (const error& e) {
    Json err = Json::object();
    err["schema_version"] = "1";
    Json ej = Json::object();
    ej["code"] = e.label();
    ej["message"] = e.what();
    err["error"] = std::move(ej);
    std::cout << err.dump(2) << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    Json err = Json::object();
    err["schema_version"] = "1";
    Json ej = Json::object();
    ej["code"] = "internal";
    ej["message"] = e.what();
    err["error"] = std::move(ej);
    std::cout << err.dump(2) << "\n";
    return 1;
  }
}
