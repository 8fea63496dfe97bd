#include "polyscat/inverse.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <future>
#include <random>

#include "polyscat/identities.hpp"

namespace polyscat {

namespace {

FieldSolution solve_values(const ExperimentSpec& spec,
                           const std::vector<Complex>& values) {
  auto v = spec.geometry.with_values(values);
  return solve_total_field(v, spec.incident, spec.grid);
}

double min_abs(const std::vector<Complex>& field) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& x : field) m = std::min(m, std::abs(x));
  return m;
}

GapReport gap_report(const Potential& va, const Potential& vb,
                     const std::vector<Vec>& vertices, const PlaneWave& inc,
                     const Grid& grid, int direction_count, double gap_floor) {
  FieldSolution sol = solve_total_field(va, inc, grid);
  FieldSolution sol_prime = solve_total_field(vb, inc, grid);

  GapReport report;
  report.iterations_u = sol.iterations;
  report.iterations_u_prime = sol_prime.iterations;
  report.min_abs_u = min_abs(sol.total);
  report.min_abs_u_prime = min_abs(sol_prime.total);

  // Vertex non-vanishing hypothesis, |u| by interpolation at each vertex.
  FieldFn u = grid_field(grid, sol.total);
  FieldFn up = grid_field(grid, sol_prime.total);
  double umax = 0;
  for (const auto& x : sol.total) umax = std::max(umax, std::abs(x));
  const double threshold = 1e-6 * umax;
  bool violated = false;
  for (const auto& vtx : vertices) {
    VertexFieldCheck check;
    check.vertex = vtx;
    check.abs_u = std::abs(u(vtx));
    check.abs_u_prime = std::abs(up(vtx));
    check.hypothesis_ok =
        check.abs_u > threshold || check.abs_u_prime > threshold;
    violated = violated || !check.hypothesis_ok;
    report.vertex_checks.push_back(check);
  }

  auto dirs = sphere_directions(grid.n, direction_count);
  auto A = far_field(sol, dirs);
  auto A_prime = far_field(sol_prime, dirs);
  report.gap = far_field_distance(A, A_prime);
  report.verdict = report.gap > gap_floor ? "DISTINGUISHED" : "IDENTICAL";

  if (violated)
    throw HypothesisViolated(
        "total fields vanish at a structure vertex; report gap " +
        std::to_string(report.gap));
  return report;
}

}  // namespace

GapReport distinguishability(const ExperimentSpec& spec,
                             const std::vector<Complex>& values,
                             const std::vector<Complex>& values_prime,
                             double gap_floor) {
  if (spec.geometry.is_nested())
    throw InvalidInput("use nested_distinguishability for nested geometry");
  auto va = spec.geometry.with_values(values);
  auto vb = spec.geometry.with_values(values_prime);
  return gap_report(va, vb, spec.geometry.structure_vertices(), spec.incident,
                    spec.grid, spec.direction_count, gap_floor);
}

GapReport nested_distinguishability(const PiecewiseConstantPotential& va,
                                    const PiecewiseConstantPotential& vb,
                                    const PlaneWave& incident, const Grid& grid,
                                    int direction_count, double gap_floor) {
  if (!va.is_nested() || !vb.is_nested())
    throw InvalidInput("nested_distinguishability needs nested geometries");
  std::vector<Vec> vertices = va.structure_vertices();
  for (const auto& v : vb.structure_vertices()) vertices.push_back(v);
  return gap_report(va, vb, vertices, incident, grid, direction_count,
                    gap_floor);
}

FarFieldPattern experiment_far_field(const ExperimentSpec& spec,
                                     const std::vector<Complex>& values) {
  FieldSolution sol = solve_values(spec, values);
  return far_field(sol, sphere_directions(spec.grid.n, spec.direction_count));
}

ReconstructionResult reconstruct_cells(const ExperimentSpec& spec,
                                       const FarFieldPattern& measured,
                                       std::vector<Complex> init,
                                       const ReconstructionOptions& opt) {
  const size_t cells = spec.geometry.values().size();
  if (init.size() != cells) throw InvalidInput("one initial value per cell");
  auto dirs = sphere_directions(spec.grid.n, spec.direction_count);
  if (measured.directions.size() != dirs.size())
    throw DirectionMismatch("measured pattern has a different direction set");

  const size_t m = measured.values.size();
  double meas_norm = 0;
  for (const auto& v : measured.values) meas_norm += std::norm(v);
  meas_norm = std::sqrt(meas_norm);
  if (meas_norm == 0.0) throw InvalidInput("measured pattern is zero");

  auto residual_vec = [&](const std::vector<Complex>& values) {
    FarFieldPattern A = experiment_far_field(spec, values);
    Eigen::VectorXcd r(m);
    for (size_t i = 0; i < m; ++i) r(i) = A.values[i] - measured.values[i];
    return r;
  };

  ReconstructionResult result;
  result.values = std::move(init);
  Eigen::VectorXcd r = residual_vec(result.values);
  double obj = r.norm();
  result.objective_history.push_back(obj);
  result.residual = obj / meas_norm;

  for (int it = 0; it < opt.max_iterations; ++it) {
    if (result.residual <= opt.tol) break;
    result.iterations = it + 1;

    // Finite-difference Jacobian: the far field is holomorphic in each cell
    // value, so a single complex column per cell suffices.
    Eigen::MatrixXcd jac(m, cells);
    for (size_t j = 0; j < cells; ++j) {
      std::vector<Complex> bumped = result.values;
      bumped[j] += opt.fd_step;
      Eigen::VectorXcd rj = residual_vec(bumped);
      jac.col(j) = (rj - r) / opt.fd_step;
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
        jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cut = opt.svd_truncation * sv(0);
    Eigen::VectorXcd proj = svd.matrixU().adjoint() * (-r);
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      proj(i) = sv(i) > cut ? proj(i) / sv(i) : Complex(0);
    Eigen::VectorXcd step = svd.matrixV() * proj;
    double damping = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < opt.max_backtracks; ++bt) {
      std::vector<Complex> trial = result.values;
      for (size_t j = 0; j < cells; ++j) trial[j] += damping * step(j);
      try {
        Eigen::VectorXcd rt = residual_vec(trial);
        if (rt.norm() < obj) {
          result.values = std::move(trial);
          r = std::move(rt);
          obj = r.norm();
          accepted = true;
          break;
        }
      } catch (const NoConvergence&) {
        // overshot into an unsolvable contrast; shrink the step
      } catch (const DivergentSeries&) {
      }
      damping *= 0.5;
    }
    result.objective_history.push_back(obj);
    result.residual = obj / meas_norm;
    if (!accepted) {
      if (result.residual <= 10 * opt.tol) break;  // at the numerical floor
      throw StalledOptimization("Gauss-Newton cannot decrease the objective");
    }
  }
  if (result.residual > opt.tol && result.iterations >= opt.max_iterations)
    throw NoConvergence("Gauss-Newton iteration limit reached");
  return result;
}

std::vector<Complex> draw_values(uint64_t seed, uint64_t stream_id,
                                 size_t count, double amplitude) {
  std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1)));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> values;
  values.reserve(count);
  for (size_t j = 0; j < count; ++j)
    values.emplace_back(amplitude * u(rng), amplitude * u(rng));
  return values;
}

std::vector<PairGapRecord> distinguishability_campaign(const ExperimentSpec& spec,
                                                       int pairs,
                                                       double amplitude,
                                                       double gap_floor,
                                                       int threads) {
  const size_t cells = spec.geometry.values().size();
  auto run_pair = [&](int pair_id) {
    auto va = draw_values(spec.seed, 2 * pair_id, cells, amplitude);
    auto vb = draw_values(spec.seed, 2 * pair_id + 1, cells, amplitude);
    GapReport rep = distinguishability(spec, va, vb, gap_floor);
    PairGapRecord rec;
    rec.pair_id = pair_id;
    rec.gap = rep.gap;
    rec.verdict = rep.verdict;
    rec.min_vertex_field = std::numeric_limits<double>::infinity();
    for (const auto& check : rep.vertex_checks)
      rec.min_vertex_field = std::min(
          rec.min_vertex_field, std::max(check.abs_u, check.abs_u_prime));
    rec.counterexample_candidate = rep.gap < gap_floor;
    return rec;
  };

  std::vector<PairGapRecord> records(pairs);
  if (threads <= 1) {
    for (int i = 0; i < pairs; ++i) records[i] = run_pair(i);
    return records;
  }
  std::vector<std::future<PairGapRecord>> inflight;
  int next = 0, done = 0;
  while (done < pairs) {
    while (next < pairs && static_cast<int>(inflight.size()) < threads)
      inflight.push_back(
          std::async(std::launch::async, run_pair, next++));
    PairGapRecord rec = inflight.front().get();
    inflight.erase(inflight.begin());
    records[rec.pair_id] = std::move(rec);
    ++done;
  }
  return records;
}

ReconstructionRecord reconstruction_experiment(const ExperimentSpec& spec,
                                               double amplitude,
                                               const ReconstructionOptions& opt) {
  const size_t cells = spec.geometry.values().size();
  ReconstructionRecord rec;
  rec.truth = draw_values(spec.seed, 0, cells, amplitude);
  FarFieldPattern measured = experiment_far_field(spec, rec.truth);
  ReconstructionResult result = reconstruct_cells(
      spec, measured, std::vector<Complex>(cells, Complex(0)), opt);
  rec.recovered = result.values;
  rec.residual = result.residual;
  rec.iterations = result.iterations;
  for (size_t j = 0; j < cells; ++j) {
    rec.max_value_error =
        std::max(rec.max_value_error, std::abs(rec.recovered[j] - rec.truth[j]));
    rec.truth_scale = std::max(rec.truth_scale, std::abs(rec.truth[j]));
  }
  return rec;
}

}  // namespace polyscat
