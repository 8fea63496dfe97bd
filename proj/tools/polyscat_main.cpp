// polyscat: experiment runner for the scattering laboratory. One binary,
// command chosen by the config file; see README for the config schemas.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "polyscat/conelab.hpp"
#include "polyscat/identities.hpp"
#include "polyscat/inverse.hpp"
#include "polyscat/io.hpp"

namespace fs = std::filesystem;
using namespace polyscat;
using polyscat::io::json;

namespace {

struct RunContext {
  json config;
  std::string config_hash;
  std::string out_dir;
  int threads = 1;
  std::vector<std::string> artifacts;

  std::string path(const std::string& name) const { return out_dir + "/" + name; }
  void artifact(const std::string& name) { artifacts.push_back(path(name)); }
};

json complex_to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

Vec parse_direction(const json& cfg, int dim) {
  if (!cfg.contains("direction"))
    return dim == 2 ? Vec(1, 0) : Vec(0, 0, 1);
  const auto& d = cfg["direction"];
  Vec v = d.size() == 2 ? Vec(d[0].get<double>(), d[1].get<double>())
                        : Vec(d[0].get<double>(), d[1].get<double>(),
                              d[2].get<double>());
  return v.normalized();
}

std::unique_ptr<Potential> load_potential(const json& cfg) {
  if (cfg.contains("potential_file"))
    return io::parse_potential(
        json::parse(io::read_text_file(cfg["potential_file"].get<std::string>())));
  if (cfg.contains("potential")) return io::parse_potential(cfg["potential"]);
  throw InvalidInput("config needs potential or potential_file");
}

Grid load_grid(const json& cfg, int dim) {
  if (!cfg.contains("grid")) throw InvalidInput("config needs a grid block");
  const auto& g = cfg["grid"];
  return Grid::cube(dim, g.value("R", 1.0), g.value("per_axis", 64));
}

SolveOptions load_solver(const json& cfg) {
  SolveOptions opt;
  if (!cfg.contains("solver")) return opt;
  const auto& s = cfg["solver"];
  std::string method = s.value("method", "iterative");
  if (method == "born")
    opt.method = SolveOptions::Method::born;
  else if (method != "iterative")
    throw InvalidInput("solver method must be born or iterative");
  opt.born_terms = s.value("born_terms", opt.born_terms);
  opt.tol = s.value("tol", opt.tol);
  opt.maxit = s.value("maxit", opt.maxit);
  return opt;
}

FieldSolution run_forward_solve(const RunContext& ctx,
                                std::unique_ptr<Potential>& pot_out) {
  pot_out = load_potential(ctx.config);
  Grid grid = load_grid(ctx.config, pot_out->dim());
  PlaneWave inc{parse_direction(ctx.config, pot_out->dim()),
                ctx.config.value("k", 1.0)};
  return solve_total_field(*pot_out, inc, grid, load_solver(ctx.config));
}

void cmd_forward(RunContext& ctx) {
  std::unique_ptr<Potential> pot;
  FieldSolution sol = run_forward_solve(ctx, pot);
  io::write_field_dump(ctx.path("field.bin"), sol);
  ctx.artifact("field.bin");
  json summary{{"kind", "forward"},
               {"iterations", sol.iterations},
               {"residual", sol.residual},
               {"method", sol.method}};
  io::write_json_lines(ctx.path("summary.jsonl"), {summary});
  ctx.artifact("summary.jsonl");
}

void cmd_farfield(RunContext& ctx) {
  std::unique_ptr<Potential> pot;
  FieldSolution sol = run_forward_solve(ctx, pot);
  io::write_field_dump(ctx.path("field.bin"), sol);
  ctx.artifact("field.bin");
  auto dirs = sphere_directions(sol.grid.n, ctx.config.value("directions", 64));
  FarFieldPattern a = far_field(sol, dirs);
  std::string geom_hash = io::hash_bytes(ctx.config.value("potential", json()).dump());
  io::write_pattern_csv(ctx.path("pattern.csv"), a, geom_hash);
  ctx.artifact("pattern.csv");
}

Cone load_cone(const json& cfg) {
  if (!cfg.contains("cone")) throw InvalidInput("config needs a cone block");
  const auto& c = cfg["cone"];
  std::vector<Vec> gens;
  for (const auto& g : c["generators"])
    gens.push_back(g.size() == 2
                       ? Vec(g[0].get<double>(), g[1].get<double>())
                       : Vec(g[0].get<double>(), g[1].get<double>(),
                             g[2].get<double>()));
  Vec apex = gens[0].n == 2 ? Vec(0, 0) : Vec(0, 0, 0);
  if (c.contains("apex"))
    apex = c["apex"].size() == 2
               ? Vec(c["apex"][0].get<double>(), c["apex"][1].get<double>())
               : Vec(c["apex"][0].get<double>(), c["apex"][1].get<double>(),
                     c["apex"][2].get<double>());
  return Cone::from_generators(apex, gens);
}

void cmd_conelab(RunContext& ctx) {
  Cone cone = load_cone(ctx.config);
  std::vector<double> eps_list, s_list;
  for (const auto& e : ctx.config.value("eps_list", json::array()))
    eps_list.push_back(e.get<double>());
  for (const auto& s : ctx.config.value("s_list", json::array({1.0})))
    s_list.push_back(s.get<double>());
  auto report = certify_nonvanishing(cone, eps_list, s_list);

  std::string cone_hash = io::hash_bytes(ctx.config["cone"].dump());
  std::vector<json> records;
  for (const auto& row : report.rows)
    records.push_back(json{{"kind", "conelab"},
                           {"cone", cone_hash},
                           {"eps", row.eps},
                           {"s", row.s},
                           {"re", row.transform.real()},
                           {"im", row.transform.imag()},
                           {"scaled_abs", row.scaled_abs},
                           {"c1_abs", row.c1_abs},
                           {"rest_abs", row.rest_abs}});
  records.push_back(json{{"kind", "conelab_summary"},
                         {"cone", cone_hash},
                         {"min_scaled", report.min_scaled}});
  io::write_json_lines(ctx.path("certification.jsonl"), records);
  ctx.artifact("certification.jsonl");
}

double fitted_order(const std::vector<double>& hs, const std::vector<double>& rs) {
  double mx = 0, my = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(hs.size());
  for (size_t i = 0; i < hs.size(); ++i) {
    mx += std::log(hs[i]) / m;
    my += std::log(rs[i]) / m;
  }
  for (size_t i = 0; i < hs.size(); ++i) {
    sxx += (std::log(hs[i]) - mx) * (std::log(hs[i]) - mx);
    sxy += (std::log(hs[i]) - mx) * (std::log(rs[i]) - my);
  }
  return sxy / sxx;
}

void cmd_verify(RunContext& ctx) {
  std::string check = ctx.config.value("check", "");
  std::vector<json> records;
  const Complex kI(0, 1);

  if (check == "alessandrini") {
    double k = ctx.config.value("k", 1.0);
    double v0 = ctx.config.value("v0", 0.3);
    double R = ctx.config.value("R", 1.0);
    CellPartition part;
    part.cells.push_back(Polytope::axis_box(Vec(-0.5, -0.5), Vec(0.5, 0.5)));
    part.d0 = 0.1;
    PiecewiseConstantPotential v(part, {Complex(v0, 0)});
    PlaneWave inc{Vec(1, 0), k};
    Cone quarter = Cone::from_generators(Vec(-0.1, -0.1), {Vec(1, 0), Vec(0, 1)});
    SectorRegion sector{quarter, ctx.config.value("sector_radius", 0.25)};
    auto q = [&](const Vec&) { return Complex(k * k * (1 + v0)); };
    auto qp = [&](const Vec&) { return Complex(k * k); };
    auto up = [&](const Vec& x) { return inc.at(x); };
    double k1 = k * std::sqrt(1 + v0);
    auto u0 = [&](const Vec& x) {
      return std::exp(kI * (k1 * (0.28 * x[0] + 0.96 * x[1])));
    };
    std::vector<double> hs, rs;
    for (const auto& nj : ctx.config.value("grids", json::array({64, 128, 256}))) {
      Grid grid = Grid::cube(2, R, nj.get<int>());
      auto sol = solve_total_field(v, inc, grid);
      auto u = grid_field(grid, sol.total);
      auto terms = alessandrini_residual(Region(sector), q, qp, u, up, u0, grid.h);
      hs.push_back(grid.h);
      rs.push_back(terms.residual);
      records.push_back(json{{"kind", "alessandrini"},
                             {"h", grid.h},
                             {"volume", complex_to_json(terms.volume_term)},
                             {"boundary", complex_to_json(terms.boundary_term)},
                             {"residual", terms.residual}});
    }
    records.push_back(json{{"kind", "alessandrini_summary"},
                           {"fitted_order", fitted_order(hs, rs)}});
  } else if (check == "corner") {
    double k = ctx.config.value("k", 1.0);
    double va = ctx.config.value("va", 0.3), vb = ctx.config.value("vb", 0.1);
    Grid grid = Grid::cube(2, ctx.config.value("R", 1.0),
                           ctx.config.value("per_axis", 256));
    CellPartition part;
    part.cells.push_back(Polytope::axis_box(Vec(-0.5, -0.5), Vec(0.5, 0.5)));
    part.d0 = 0.1;
    PiecewiseConstantPotential pot_b(part, {Complex(vb, 0)});
    PlaneWave inc{Vec(1, 0), k};
    auto sol_b = solve_total_field(pot_b, inc, grid);
    auto u2 = grid_field(grid, sol_b.total);
    Polytope sq = Polytope::axis_box(Vec(-0.5, -0.5), Vec(0.5, 0.5));
    Cone cone = cone_at_vertex(sq, Vec(0.5, 0.5));
    CGOVector rho = interior_rho(cone);
    auto dq = [&](const Vec&) { return Complex(k * k * (va - vb)); };
    std::vector<double> s_list;
    for (const auto& s : ctx.config.value("s_list", json::array({16, 32, 64, 128})))
      s_list.push_back(s.get<double>());
    auto res = corner_limit(cone, ctx.config.value("b_radius", 0.45), dq, u2,
                            rho, s_list);
    for (const auto& [s, jv] : res.sweep)
      records.push_back(json{{"kind", "corner_sweep"},
                             {"s", s},
                             {"re", jv.real()},
                             {"im", jv.imag()}});
    Complex target = k * k * (va - vb) * u2(Vec(0.5, 0.5));
    records.push_back(json{{"kind", "corner_summary"},
                           {"limit", complex_to_json(res.limit)},
                           {"target", complex_to_json(target)},
                           {"rel_error",
                            std::abs(res.limit - target) / std::abs(target)},
                           {"instability", res.instability}});
  } else if (check == "nodal") {
    double k = ctx.config.value("k", 3.0);
    double amp = ctx.config.value("amplitude", 0.0039);
    int count = ctx.config.value("count", 10);
    uint64_t seed = ctx.config.value("seed", 0);
    CellPartition part = pixel_lattice(3, 3, 0.5, 0.05);
    PiecewiseConstantPotential geom(part, std::vector<Complex>(9, Complex(0)));
    Grid grid = load_grid(ctx.config, 2);
    PlaneWave inc{parse_direction(ctx.config, 2), k};
    for (int i = 0; i < count; ++i) {
      auto values = draw_values(seed, i, 9, amp);
      auto v = geom.with_values(values);
      auto sol = solve_total_field(v, inc, grid);
      auto rep = nodal_check(sol);
      records.push_back(json{{"kind", "nodal"},
                             {"item", i},
                             {"contrast_product", contrast_product(v, k)},
                             {"min_abs", rep.min_abs}});
    }
  } else if (check == "normratio") {
    double k = ctx.config.value("k", 1.0);
    auto pot = load_potential(ctx.config);
    Grid grid = load_grid(ctx.config, pot->dim());
    PlaneWave inc{parse_direction(ctx.config, pot->dim()), k};
    int halvings = ctx.config.value("halvings", 1);
    // contrast sweep V, V/2, ... via scaled piecewise values
    const auto* pw = dynamic_cast<const PiecewiseConstantPotential*>(pot.get());
    if (!pw) throw InvalidInput("normratio needs a piecewise potential");
    for (int i = 0; i <= halvings; ++i) {
      double scale = std::pow(0.5, i);
      std::vector<Complex> values;
      for (const auto& v : pw->values()) values.push_back(v * scale);
      auto scaled = pw->with_values(values);
      auto sol = solve_total_field(scaled, inc, grid);
      records.push_back(json{{"kind", "normratio"},
                             {"scale", scale},
                             {"ratio", scattered_norm_ratio(sol, scaled)}});
    }
  } else {
    throw InvalidInput("unknown verify check: " + check);
  }
  for (auto& rec : records) rec["config"] = ctx.config_hash;
  io::write_json_lines(ctx.path("verification.jsonl"), records);
  ctx.artifact("verification.jsonl");
}

ExperimentSpec pixel_experiment(const json& cfg) {
  const auto& px = cfg.value("pixels", json::object());
  CellPartition part =
      pixel_lattice(px.value("rows", 3), px.value("cols", 3),
                    px.value("side", 0.5), px.value("d0", 0.05));
  size_t cells = part.cells.size();
  PiecewiseConstantPotential geom(part, std::vector<Complex>(cells, Complex(0)));
  Grid grid = Grid::cube(2, cfg.contains("grid") ? cfg["grid"].value("R", 1.1) : 1.1,
                         cfg.contains("grid") ? cfg["grid"].value("per_axis", 96)
                                              : 96);
  PlaneWave inc{parse_direction(cfg, 2), cfg.value("k", 3.0)};
  return ExperimentSpec(std::move(geom), inc, grid, cfg.value("directions", 64),
                        cfg.value("seed", 0));
}

void cmd_distinguish(RunContext& ctx) {
  ExperimentSpec spec = pixel_experiment(ctx.config);
  int pairs = ctx.config.value("pairs", 50);
  double amplitude = ctx.config.value("amplitude", 0.008);
  double floor = ctx.config.value("gap_floor", 1e-6);
  auto records =
      distinguishability_campaign(spec, pairs, amplitude, floor, ctx.threads);
  std::vector<json> lines;
  bool any_candidate = false;
  for (const auto& rec : records) {
    lines.push_back(json{{"kind", "distinguish"},
                         {"config", ctx.config_hash},
                         {"pair", rec.pair_id},
                         {"seed", spec.seed},
                         {"gap", rec.gap},
                         {"verdict", rec.verdict},
                         {"min_vertex_field", rec.min_vertex_field},
                         {"counterexample_candidate",
                          rec.counterexample_candidate}});
    any_candidate = any_candidate || rec.counterexample_candidate;
  }
  io::write_json_lines(ctx.path("ledger.jsonl"), lines);
  ctx.artifact("ledger.jsonl");
  if (any_candidate)
    throw NoConvergence("distinguishability gap below floor: counterexample "
                        "candidate recorded in the ledger");
}

void cmd_reconstruct(RunContext& ctx) {
  ExperimentSpec spec = pixel_experiment(ctx.config);
  ReconstructionOptions opt;
  opt.max_iterations = ctx.config.value("max_iterations", 50);
  opt.tol = ctx.config.value("tol", 1e-10);
  auto rec =
      reconstruction_experiment(spec, ctx.config.value("amplitude", 0.008), opt);
  json truth = json::array(), recovered = json::array();
  for (const auto& v : rec.truth) truth.push_back(complex_to_json(v));
  for (const auto& v : rec.recovered) recovered.push_back(complex_to_json(v));
  json line{{"kind", "reconstruct"},
            {"config", ctx.config_hash},
            {"seed", spec.seed},
            {"truth", truth},
            {"recovered", recovered},
            {"max_value_error", rec.max_value_error},
            {"truth_scale", rec.truth_scale},
            {"residual", rec.residual},
            {"iterations", rec.iterations}};
  io::write_json_lines(ctx.path("ledger.jsonl"), {line});
  ctx.artifact("ledger.jsonl");
}

void cmd_plot(RunContext& ctx) {
  if (!ctx.config.contains("input")) throw InvalidInput("plot needs input");
  auto records = io::read_json_lines(ctx.config["input"].get<std::string>());
  if (records.empty()) throw UnknownResultType("empty result file");
  std::ostringstream out;
  out << "series,x,y\n";
  char line[256];
  auto emit = [&](const std::string& series, double x, double y) {
    std::snprintf(line, sizeof(line), "%s,%.17g,%.17g\n", series.c_str(), x, y);
    out << line;
  };
  for (const auto& rec : records) {
    std::string kind = rec.value("kind", "");
    if (kind == "corner_sweep") {
      emit("ReJ", rec["s"], rec["re"]);
      emit("ImJ", rec["s"], rec["im"]);
    } else if (kind == "distinguish") {
      emit("gap", rec["pair"], rec["gap"]);
    } else if (kind == "alessandrini") {
      emit("residual", rec["h"], rec["residual"]);
    } else if (kind == "alessandrini_summary") {
      emit("fitted_order", 0.0, rec["fitted_order"]);
    } else if (kind == "conelab") {
      emit("scaled_abs", rec["s"], rec["scaled_abs"]);
      if (rec.value("c1_abs", 0.0) != 0.0) {
        emit("c1_abs", rec["eps"], rec["c1_abs"]);
        emit("rest_abs", rec["eps"], rec["rest_abs"]);
      }
    } else if (kind == "nodal") {
      emit("min_abs", rec["item"], rec["min_abs"]);
    } else if (kind == "normratio") {
      emit("ratio", rec["scale"], rec["ratio"]);
    } else if (kind == "reconstruct") {
      emit("max_value_error", 0.0, rec["max_value_error"]);
      emit("iterations", 0.0, rec["iterations"]);
      emit("residual", 0.0, rec["residual"]);
    } else if (kind.size() >= 7 && kind.substr(kind.size() - 7) == "summary") {
      // summaries other than alessandrini carry no series
    } else {
      throw UnknownResultType("unrecognized record kind: " + kind);
    }
  }
  io::write_text_file(ctx.path("plot.csv"), out.str());
  ctx.artifact("plot.csv");
}

void apply_override(json& config, const std::string& kv) {
  auto eq = kv.find('=');
  if (eq == std::string::npos)
    throw InvalidInput("override must be KEY=VALUE: " + kv);
  std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
  json* node = &config;
  size_t start = 0;
  for (;;) {
    size_t dot = key.find('.', start);
    std::string part = key.substr(start, dot - start);
    if (dot == std::string::npos) {
      json parsed;
      try {
        parsed = json::parse(value);
      } catch (...) {
        parsed = value;
      }
      (*node)[part] = parsed;
      break;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyscat experiment runner"};
  std::string config_path, out_dir;
  uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "config file (JSON)")->required();
  app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "override config seed");
  app.add_option("--threads", threads, "worker pool size for batch items");
  app.add_option("--override", overrides, "KEY=VALUE config overrides");
  CLI11_PARSE(app, argc, argv);
  seed_set = seed_opt->count() > 0;

  RunContext ctx;
  std::string command;
  try {
    std::string text = io::read_text_file(config_path);
    ctx.config = json::parse(text);
    for (const auto& kv : overrides) apply_override(ctx.config, kv);
    if (seed_set) ctx.config["seed"] = seed;
    ctx.config_hash = io::hash_bytes(ctx.config.dump());
    ctx.threads = std::max(1, threads);
    command = ctx.config.value("command", "");

    if (out_dir.empty()) {
      const char* root = std::getenv("POLYSCAT_OUT_ROOT");
      out_dir = std::string(root ? root : ".") + "/" + command + "_" +
                ctx.config_hash.substr(0, 8);
    }
    ctx.out_dir = out_dir;
    fs::create_directories(ctx.out_dir);
  } catch (const std::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  try {
    if (command == "forward")
      cmd_forward(ctx);
    else if (command == "farfield")
      cmd_farfield(ctx);
    else if (command == "conelab")
      cmd_conelab(ctx);
    else if (command == "verify")
      cmd_verify(ctx);
    else if (command == "distinguish")
      cmd_distinguish(ctx);
    else if (command == "reconstruct")
      cmd_reconstruct(ctx);
    else if (command == "plot")
      cmd_plot(ctx);
    else
      throw InvalidInput("unknown command: " + command);
  } catch (const InvalidInput& e) {
    io::write_text_file(ctx.path("error.json"),
                        json{{"type", "invalid_input"}, {"error", e.what()}}.dump(2));
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    io::write_text_file(ctx.path("error.json"),
                        json{{"type", "numerical"}, {"error", e.what()}}.dump(2));
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  }
  double wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  io::write_manifest(ctx.out_dir, command, ctx.config_hash, wall_ms,
                     ctx.artifacts);
  std::cout << ctx.out_dir << "\n";
  return 0;
}
