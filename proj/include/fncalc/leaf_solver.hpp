#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fncalc {

/// Finite-difference model of the leafwise equation Delta p + c . grad p = 0
/// on a periodic n x n grid of the unit torus (a leaf of the hyperplane model).
struct LeafProblem {
  int n = 64;
  double drift_x = 0;
  double drift_y = 0;
  /// Damping of the Jacobi update; below 1 so the checkerboard mode decays.
  double omega = 0.8;
};

enum class Execution { Serial, Parallel };

/// Row-major grid values, index i * n + j.
using LeafGrid = std::vector<double>;

/// One damped Jacobi sweep from `in` into `out`.
void leaf_sweep(const LeafProblem& problem, const LeafGrid& in, LeafGrid& out, Execution mode);
/// Sup norm of the discrete operator applied to `p`.
double leaf_residual(const LeafProblem& problem, const LeafGrid& p, Execution mode);

struct LeafSolve {
  LeafGrid p;
  int iterations = 0;
  double residual = 0;
  /// max p - min p.
  double oscillation = 0;
  bool converged = false;
};

/// Iterates until the residual drops below `residual_tol` or `max_iterations`.
LeafSolve leaf_solve(const LeafProblem& problem, LeafGrid initial, double residual_tol, int max_iterations,
                     Execution mode);

/// Smooth bump with its maximum at an interior grid point.
LeafGrid bump_grid(int n);
/// Seeded uniform noise in [0, 1] plus a bump, so the maximum is interior.
LeafGrid noisy_grid(int n, std::uint64_t seed);

struct MaxPrincipleCase {
  std::string label;
  LeafSolve solve;
  bool constant = false;
};

struct MaxPrincipleReport {
  int n = 0;
  double tolerance = 0;
  std::vector<MaxPrincipleCase> cases;
  bool passed() const;
};

/// Solves from several initial iterates with an interior maximum and checks
/// that every converged iterate is constant within `tolerance`.
MaxPrincipleReport max_principle_demo(int n = 64, double tolerance = 1e-6, Execution mode = Execution::Parallel,
                                      std::uint64_t seed = 7);

}  // namespace fncalc
