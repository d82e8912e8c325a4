#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "fncalc/dgla.hpp"
#include "fncalc/forms.hpp"
#include "fncalc/vvform.hpp"
#include "fncalc/scalar.hpp"

namespace gen {

using namespace fncalc;

struct Rng {
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(engine); }
  std::mt19937_64 engine;
};

// Polynomial with small integer coefficients, total degree <= max_degree.
inline Scalar polynomial(Rng& rng, int n, int max_degree, int max_terms = 3) {
  Scalar out;
  const int terms = rng.uniform(0, max_terms);
  for (int t = 0; t < terms; ++t) {
    Scalar mono(rng.uniform(-3, 3));
    const int deg = rng.uniform(0, max_degree);
    for (int k = 0; k < deg; ++k) mono *= Scalar::coordinate(rng.uniform(0, n - 1));
    out += mono;
  }
  return out;
}

inline Scalar nonzero_polynomial(Rng& rng, int n, int max_degree) {
  while (true) {
    Scalar s = polynomial(rng, n, max_degree);
    if (!s.is_zero()) return s;
  }
}

// Occasionally a rational function with a simple denominator.
inline Scalar coefficient(Rng& rng, int n, int max_degree, bool allow_rational) {
  Scalar s = polynomial(rng, n, max_degree);
  if (allow_rational && rng.coin(0.2)) {
    Scalar den = Scalar(1) + Scalar::coordinate(rng.uniform(0, n - 1)) * Scalar::coordinate(rng.uniform(0, n - 1));
    s = s / den;
  }
  return s;
}

inline std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  for (IndexMask m = 0; m < (IndexMask{1} << n); ++m)
    if (popcount(m) == k) out.push_back(indices_of(m));
  return out;
}

inline KForm form(Rng& rng, const Chart& chart, int k, int max_degree = 2, bool allow_rational = false) {
  KForm out(chart, k);
  for (const auto& idx : subsets(chart.dim(), k))
    if (rng.coin(0.6)) out.add_term(mask_of(idx), coefficient(rng, chart.dim(), max_degree, allow_rational));
  return out;
}

inline VectorField vector_field(Rng& rng, const Chart& chart, int max_degree = 2, bool allow_rational = false) {
  std::vector<Scalar> comps;
  for (int i = 0; i < chart.dim(); ++i) comps.push_back(coefficient(rng, chart.dim(), max_degree, allow_rational));
  return VectorField(chart, std::move(comps));
}

inline VVForm vvform(Rng& rng, const Chart& chart, int k, int max_degree = 2, bool allow_rational = false) {
  if (k < 0 || k > chart.dim()) return VVForm(chart, std::max(k, -1));
  std::vector<KForm> comps;
  for (int i = 0; i < chart.dim(); ++i)
    comps.push_back(rng.coin(0.75) ? form(rng, chart, k, max_degree, allow_rational) : KForm(chart, k));
  return VVForm(chart, k, std::move(comps));
}

inline Matrix matrix(Rng& rng, int n, int max_degree = 1) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = polynomial(rng, n, max_degree, 2);
  return m;
}

// P N P^{-1} with N strictly upper triangular and P a random permutation.
inline VVForm nilpotent_endo(Rng& rng, const Chart& chart, int max_degree = 2) {
  const int n = chart.dim();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng.engine);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      m(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) = polynomial(rng, n, max_degree, 2);
  return VVForm::from_endo_matrix(chart, m);
}

inline Derivation derivation(Rng& rng, const Chart& chart, int k, int max_degree = 1) {
  VVForm l = vvform(rng, chart, k, max_degree);
  VVForm i = vvform(rng, chart, k + 1, max_degree);
  return Derivation(l, i);
}

// Coordinate functions and differentials.
inline std::vector<KForm> generating_set(const Chart& chart) {
  std::vector<KForm> out;
  for (int i = 0; i < chart.dim(); ++i) out.push_back(KForm::function(chart, Scalar::coordinate(i)));
  for (int i = 0; i < chart.dim(); ++i) out.push_back(KForm::differential(chart, i));
  return out;
}

inline std::vector<Rational> point(Rng& rng, int n) {
  std::vector<Rational> p;
  for (int i = 0; i < n; ++i) {
    p.emplace_back(rng.uniform(-7, 7), rng.uniform(1, 5));
    p.back().canonicalize();
  }
  return p;
}

}  // namespace gen
