#include "fncalc/leaf_solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fncalc/error.hpp"

namespace fncalc {
namespace {

struct Stencil {
  double east, west, north, south;
};

Stencil stencil(const LeafProblem& pb) {
  const double h = 1.0 / pb.n;
  return {1 + pb.drift_x * h / 2, 1 - pb.drift_x * h / 2, 1 + pb.drift_y * h / 2, 1 - pb.drift_y * h / 2};
}

void check_grid(const LeafProblem& pb, const LeafGrid& g) {
  if (pb.n < 3) throw PreconditionViolation("leaf grid needs n >= 3");
  if (g.size() != static_cast<std::size_t>(pb.n) * static_cast<std::size_t>(pb.n))
    throw PreconditionViolation("grid size differs from n * n");
}

// Neighbour sum weighted by the stencil; identical arithmetic in both modes.
inline double weighted(const Stencil& s, const LeafGrid& p, int n, int i, int j) {
  const int ip = (i + 1) % n, im = (i + n - 1) % n, jp = (j + 1) % n, jm = (j + n - 1) % n;
  return s.east * p[static_cast<std::size_t>(ip * n + j)] + s.west * p[static_cast<std::size_t>(im * n + j)] +
         s.north * p[static_cast<std::size_t>(i * n + jp)] + s.south * p[static_cast<std::size_t>(i * n + jm)];
}

}  // namespace

void leaf_sweep(const LeafProblem& pb, const LeafGrid& in, LeafGrid& out, Execution mode) {
  check_grid(pb, in);
  out.resize(in.size());
  const Stencil s = stencil(pb);
  const int n = pb.n;
  const double w = pb.omega;
  if (mode == Execution::Serial) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const std::size_t k = static_cast<std::size_t>(i * n + j);
        out[k] = (1 - w) * in[k] + w * (weighted(s, in, n, i, j) / 4);
      }
    return;
  }
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::size_t k = static_cast<std::size_t>(i * n + j);
      out[k] = (1 - w) * in[k] + w * (weighted(s, in, n, i, j) / 4);
    }
}

double leaf_residual(const LeafProblem& pb, const LeafGrid& p, Execution mode) {
  check_grid(pb, p);
  const Stencil s = stencil(pb);
  const int n = pb.n;
  const double inv_h2 = static_cast<double>(n) * n;
  double worst = 0;
  if (mode == Execution::Serial) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        worst = std::max(worst, std::abs((weighted(s, p, n, i, j) - 4 * p[static_cast<std::size_t>(i * n + j)]) * inv_h2));
    return worst;
  }
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      worst = std::max(worst, std::abs((weighted(s, p, n, i, j) - 4 * p[static_cast<std::size_t>(i * n + j)]) * inv_h2));
  return worst;
}

LeafSolve leaf_solve(const LeafProblem& pb, LeafGrid initial, double residual_tol, int max_iterations,
                     Execution mode) {
  check_grid(pb, initial);
  LeafSolve out;
  LeafGrid next(initial.size());
  out.p = std::move(initial);
  constexpr int kCheckEvery = 50;
  out.residual = leaf_residual(pb, out.p, mode);
  while (out.residual > residual_tol && out.iterations < max_iterations) {
    const int batch = std::min(kCheckEvery, max_iterations - out.iterations);
    for (int b = 0; b < batch; ++b) {
      leaf_sweep(pb, out.p, next, mode);
      out.p.swap(next);
    }
    out.iterations += batch;
    out.residual = leaf_residual(pb, out.p, mode);
  }
  out.converged = out.residual <= residual_tol;
  const auto [lo, hi] = std::minmax_element(out.p.begin(), out.p.end());
  out.oscillation = *hi - *lo;
  return out;
}

LeafGrid bump_grid(int n) {
  LeafGrid g(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  const double c = 0.37;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = static_cast<double>(i) / n - c, y = static_cast<double>(j) / n - c;
      g[static_cast<std::size_t>(i * n + j)] = std::exp(-40 * (x * x + y * y));
    }
  return g;
}

LeafGrid noisy_grid(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  LeafGrid g = bump_grid(n);
  for (auto& v : g) v = 0.5 * v + 0.25 * u(rng);
  return g;
}

bool MaxPrincipleReport::passed() const {
  return !cases.empty() && std::all_of(cases.begin(), cases.end(), [](const MaxPrincipleCase& c) { return c.constant; });
}

MaxPrincipleReport max_principle_demo(int n, double tolerance, Execution mode, std::uint64_t seed) {
  MaxPrincipleReport report;
  report.n = n;
  report.tolerance = tolerance;
  constexpr double kResidualTol = 1e-9;
  constexpr int kMaxIterations = 200000;
  auto run = [&](std::string label, const LeafProblem& pb, LeafGrid initial) {
    MaxPrincipleCase c{std::move(label), leaf_solve(pb, std::move(initial), kResidualTol, kMaxIterations, mode), false};
    c.constant = c.solve.converged && c.solve.oscillation <= tolerance;
    report.cases.push_back(std::move(c));
  };
  LeafProblem flat;
  flat.n = n;
  run("laplace, bump", flat, bump_grid(n));
  run("laplace, noise", flat, noisy_grid(n, seed));
  LeafProblem drift = flat;
  drift.drift_x = 1.5;
  drift.drift_y = -0.75;
  run("drift, bump", drift, bump_grid(n));
  run("drift, noise", drift, noisy_grid(n, seed + 1));
  return report;
}

}  // namespace fncalc
