// Command-line driver: generate domains, query distances, derive constants,
// synthesize curves and run the inequality checkers.
//
// Exit codes: 0 success, 1 a check or synthesis sample was violated, 2 bad input.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "cdeform/serialize.hpp"
#include "cdeform/synthesis.hpp"
#include "cdeform/verify.hpp"

namespace fs = std::filesystem;
using namespace cdeform;

namespace {

constexpr const char* kDefaultDomain = "half_plane:W=40,R=40,h=0.05,conn=8";

struct RunConfig {
  std::string domain = kDefaultDomain;
  std::string weight = "power:beta=2";
  std::string quad = "subdivided:4";
  std::size_t samples = 200;
  std::uint64_t seed = 1;
  double tol = 0.0;  // 0: 1 + 10h of the domain
  std::string out;
  double cu = 2.0;
  double cq = 1.0;
};

// Fills fields the command line left unset from a JSON config file.
void apply_config_file(const std::string& path, RunConfig& cfg, const CLI::App& app) {
  std::ifstream in(path);
  if (!in) throw InputError("config file not found: " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw InputError("config must be a JSON object");
  auto given = [&](const char* flag) { return app.count(flag) > 0; };
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "domain") { if (!given("--domain")) cfg.domain = value.get<std::string>(); }
      else if (key == "weight") { if (!given("--weight")) cfg.weight = value.get<std::string>(); }
      else if (key == "quad") { if (!given("--quad")) cfg.quad = value.get<std::string>(); }
      else if (key == "samples") { if (!given("--samples")) cfg.samples = value.get<std::size_t>(); }
      else if (key == "seed") { if (!given("--seed")) cfg.seed = value.get<std::uint64_t>(); }
      else if (key == "tol") { if (!given("--tol")) cfg.tol = value.get<double>(); }
      else if (key == "out") { if (!given("--out")) cfg.out = value.get<std::string>(); }
      else if (key == "cu") { if (!given("--cu")) cfg.cu = value.get<double>(); }
      else if (key == "cq") { if (!given("--cq")) cfg.cq = value.get<double>(); }
      else throw InputError("unknown config key " + key);
    } catch (const Json::exception&) {
      throw InputError("config key " + key + " has the wrong type");
    }
  }
}

void validate(const RunConfig& cfg) {
  if (cfg.samples < 1) throw InputError("--samples must be at least 1");
  if (cfg.tol != 0.0 && cfg.tol < 1.0) throw InputError("--tol must be at least 1");
}

struct Session {
  MetricDomain domain;
  BoundaryDistanceField field;
  WeightFunction weight;
  std::optional<DeformedDomain> dd;
  ConstantsBundle bundle;
  double tol = 1.0;

  explicit Session(const RunConfig& cfg)
      : domain(resolve_domain(cfg.domain)),
        field(boundary_distance(domain)),
        weight(parse_weight(cfg.weight)) {
    check_frontier_radius(domain, field);
    dd.emplace(deform(domain, field, weight, Quadrature::parse(cfg.quad)));
    bundle = derive_constants(weight, cfg.cu, cfg.cq);
    tol = cfg.tol == 0.0 ? default_tolerance(domain) : cfg.tol;
  }
};

// "x,y" (snapped to the nearest vertex), "id:N", or "inf" (returns empty).
std::optional<VertexIndex> parse_point(const MetricDomain& dom, const std::string& text) {
  if (text == "inf") return std::nullopt;
  if (text.rfind("id:", 0) == 0) {
    std::int64_t id = 0;
    try {
      std::size_t used = 0;
      id = std::stoll(text.substr(3), &used);
      if (used != text.size() - 3) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw InputError("bad vertex id: " + text);
    }
    auto v = dom.index_of(id);
    if (!v) throw InputError("unknown vertex id " + std::to_string(id));
    return *v;
  }
  std::vector<double> xy;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      std::size_t used = 0;
      xy.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw InputError("bad point: " + text);
    }
  }
  if (dom.coord_dim() == 0) throw InputError("domain has no coordinates; address vertices as id:N");
  if (xy.size() != static_cast<std::size_t>(dom.coord_dim()))
    throw InputError("point needs " + std::to_string(dom.coord_dim()) + " coordinates: " + text);
  return dom.nearest_vertex(xy);
}

VertexIndex require_point(const MetricDomain& dom, const std::string& text, const char* flag) {
  if (text.empty()) throw InputError(std::string(flag) + " is required");
  auto v = parse_point(dom, text);
  if (!v) throw InputError(std::string(flag) + " cannot be inf");
  return *v;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw InputError("cannot write " + out);
  f << text;
}

std::string pretty(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformal boundary-distance deformation toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string config_file, from, to, in_file;
  std::vector<std::string> check_list{"all"};
  bool csv = false, with_curve = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--domain", cfg.domain, "generator spec (half_plane:W=..,R=..,h=..,conn=8) or domain file");
    sub->add_option("--weight", cfg.weight, "power:beta=B | powerlog:beta=B,kappa=K | table:@file.json");
    sub->add_option("--quad", cfg.quad, "edge quadrature: trapezoid | subdivided:K");
    sub->add_option("--samples", cfg.samples, "sample budget");
    sub->add_option("--seed", cfg.seed, "PRNG seed");
    sub->add_option("--tol", cfg.tol, "tolerance factor (default 1 + 10h)");
    sub->add_option("--out", cfg.out, "output file (directory for report)");
    sub->add_option("--cu", cfg.cu, "uniformity constant C_U of the base domain");
    sub->add_option("--cq", cfg.cq, "quasiconvexity constant C_q of the base domain");
    sub->add_option("--config", config_file, "JSON run config; flags override it");
  };

  auto* gen = app.add_subcommand("generate", "write a generated domain as JSON");
  common(gen);
  auto* dist = app.add_subcommand("distance", "d and d_phi between two vertices, or the interval to inf");
  common(dist);
  auto* geo = app.add_subcommand("geodesic", "d_phi geodesic between two vertices or to inf");
  common(geo);
  auto* cons = app.add_subcommand("constants", "derived constants for a weight, C_U and C_q");
  common(cons);
  auto* syn = app.add_subcommand("synthesize", "uniform curve for one pair, or a predicted-vs-measured table");
  common(syn);
  auto* chk = app.add_subcommand("check", "run inequality checkers");
  common(chk);
  auto* rep = app.add_subcommand("report", "constants, synthesis table and all checks into --out directory");
  common(rep);
  for (auto* sub : {dist, geo, syn}) {
    sub->add_option("--from", from, "x,y | id:N");
    sub->add_option("--to", to, "x,y | id:N | inf");
  }
  syn->add_flag("--curve", with_curve, "include the curve in the output");
  chk->add_option("names", check_list, "checks to run, or all");
  chk->add_flag("--csv", csv, "write the flat CSV view instead of JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    if (!config_file.empty()) apply_config_file(config_file, cfg, *sub);
    validate(cfg);

    if (sub == gen) {
      emit(serialize_domain(resolve_domain(cfg.domain)), cfg.out);
      return 0;
    }
    if (sub == cons) {
      const auto w = parse_weight(cfg.weight);
      Json j{{"weight", w.spec()}, {"bundle", to_json(derive_constants(w, cfg.cu, cfg.cq))}};
      emit(pretty(j), cfg.out);
      return 0;
    }

    Session s(cfg);
    const auto& dom = s.domain;

    if (sub == dist || sub == geo) {
      const auto x = require_point(dom, from, "--from");
      if (to.empty()) throw InputError("--to is required");
      const auto y = parse_point(dom, to);
      Json j;
      if (!y) {
        j = to_json(dist_to_infinity(*s.dd, s.bundle, x), dom);
        if (sub == geo) j["curve"] = to_json(dphi_path_to_infinity(*s.dd, s.bundle, x), dom);
      } else {
        j = distance_record(*s.dd, x, *y, sub == geo);
      }
      emit(pretty(j), cfg.out);
      return 0;
    }

    if (sub == syn) {
      if (!from.empty()) {
        const auto x = require_point(dom, from, "--from");
        if (to.empty()) throw InputError("--to is required");
        const auto y = parse_point(dom, to);
        if (y && *y == x) throw InputError("--from and --to snap to the same vertex");
        const auto r = synthesize(*s.dd, x, y, s.bundle);
        Json j = to_json(r, dom);
        j["tolerance"] = round12(s.tol);
        if (with_curve) j["curve"] = to_json(r.curve, dom);
        emit(pretty(j), cfg.out);
        return r.ratio() > s.tol ? 1 : 0;
      }
      const auto samples = stratified_synthesis_samples(*s.dd, cfg.samples, cfg.samples / 4, cfg.seed);
      const auto report = predicted_vs_measured(*s.dd, s.bundle, samples, s.tol);
      Json j = to_json(report, dom);
      j["bundle"] = to_json(s.bundle);
      j["seed"] = cfg.seed;
      emit(pretty(j), cfg.out);
      return report.flagged > 0 ? 1 : 0;
    }

    CheckOptions opt;
    opt.samples = cfg.samples;
    opt.seed = cfg.seed;
    opt.factor = s.tol;
    AggregateReport agg;
    agg.domain_meta = dom.meta();
    agg.weight_spec = s.weight.spec();
    agg.bundle = s.bundle;
    agg.seed = cfg.seed;
    agg.tolerance = s.tol;

    if (sub == chk) {
      agg.checks = run_checks(*s.dd, s.bundle, check_list, opt);
      emit(csv ? to_csv(agg) : pretty(to_json(agg)), cfg.out);
      return agg.passed() ? 0 : 1;
    }

    // report
    if (cfg.out.empty()) throw InputError("report needs --out DIR");
    fs::create_directories(cfg.out);
    const fs::path dir(cfg.out);
    agg.checks = run_checks(*s.dd, s.bundle, {"all"}, opt);
    const auto samples = stratified_synthesis_samples(*s.dd, cfg.samples, cfg.samples / 4, cfg.seed);
    const auto synth = predicted_vs_measured(*s.dd, s.bundle, samples, s.tol);
    Json sj = to_json(synth, dom);
    emit(pretty(to_json(agg)), (dir / "checks.json").string());
    emit(to_csv(agg), (dir / "checks.csv").string());
    emit(pretty(sj), (dir / "synthesis.json").string());
    emit(pretty(Json{{"weight", s.weight.spec()}, {"bundle", to_json(s.bundle)}}),
         (dir / "constants.json").string());
    std::cout << to_csv(agg) << "synthesis flagged," << synth.flagged << "\n";
    return agg.passed() && synth.flagged == 0 ? 0 : 1;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
