#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fncalc/foliation.hpp"
#include "fncalc/matrix.hpp"

namespace fncalc {

/// Real chart of C^n with coordinates ordered (x1, y1, ..., xn, yn), the
/// standard complex structure and a Hermitian metric g.
class ComplexChart {
 public:
  /// Throws PreconditionViolation for odd dimension or a metric that is not
  /// symmetric, not J-invariant, or not positive definite at a sample point.
  explicit ComplexChart(Chart chart, std::optional<Matrix> metric = std::nullopt);
  /// Coordinates x1, y1, ..., xn, yn with the Euclidean metric.
  static ComplexChart standard(int n, std::optional<Matrix> metric = std::nullopt);

  const Chart& chart() const { return chart_; }
  int complex_dim() const { return chart_.dim() / 2; }
  const Matrix& metric() const { return metric_; }
  /// J d/dx_i = d/dy_i, J d/dy_i = -d/dx_i.
  const Matrix& j() const { return j_; }

  VectorField apply_j(const VectorField& v) const;
  /// (J sigma)(V) = sigma(J V).
  KForm apply_j(const KForm& sigma) const;

 private:
  Chart chart_;
  Matrix metric_;
  Matrix j_;
};

/// d^c f = -J df, so (d^c f)(V) = -df(JV).
KForm dc(const ComplexChart& cc, const Scalar& f);

/// Entry (i, j) of the complex Hessian d^2 r / dz_i dz-bar_j as real and
/// imaginary parts.
struct LeviMatrix {
  Matrix re;
  Matrix im;
};

LeviMatrix levi_form(const ComplexChart& cc, const Scalar& r);

/// Real hypersurface {r = 0} with dr not identically zero.
class Hypersurface {
 public:
  Hypersurface(ComplexChart cc, Scalar r);

  const ComplexChart& complex_chart() const { return cc_; }
  const Chart& chart() const { return cc_.chart(); }
  const Scalar& r() const { return r_; }
  KForm dr() const { return d(KForm::function(chart(), r_)); }
  /// True when f vanishes on {r = 0}: exact divisibility by the numerator of
  /// r, with the cofactor of gcd(f, r) checked on sampled real points.
  bool vanishes_on(const Scalar& f) const;

 private:
  ComplexChart cc_;
  Scalar r_;
};

struct LeviSample {
  std::vector<Rational> point;
  /// Largest |L(w, w')| over a basis of the complex tangent space.
  double magnitude = 0;
};

struct LeviFlatReport {
  bool numeric_flat = false;
  bool symbolic_flat = false;
  /// Levi distribution integrable on every level set, not only on {r = 0}.
  bool ambient_integrable = false;
  std::vector<LeviSample> samples;
  /// Sample with the largest magnitude.
  std::optional<LeviSample> witness;
  /// Generator pair whose bracket leaves the Levi distribution on {r = 0}.
  std::optional<std::pair<int, int>> symbolic_witness;
  double tolerance = 1e-6;

  bool agree() const { return numeric_flat == symbolic_flat; }
  bool flat() const { return numeric_flat && symbolic_flat; }
};

inline constexpr double kLeviTolerance = 1e-6;

/// Points of {r = 0} in [-2, 2]^{2n} by axis-line sign changes and exact
/// bisection; throws NoRealPoints when none is found.
std::vector<std::vector<Rational>> hypersurface_points(const Hypersurface& h, int count, std::uint64_t seed);
/// Same search for the zero set of any function on the chart.
std::vector<std::vector<Rational>> real_points(const Chart& chart, const Scalar& r, int count, std::uint64_t seed);

/// ker dr and ker d^c r.
Distribution levi_distribution(const Hypersurface& h);

LeviFlatReport is_levi_flat(const Hypersurface& h, int samples, std::uint64_t seed = 0x1e71);

struct CanonicalCouple {
  DefiningCouple couple;
  VectorField z;
};

/// Z = g^{-1} dr / (dr g^{-1} dr), X = JZ, gamma = d^c r.
CanonicalCouple canonical_couple(const Hypersurface& h);

/// p^Y = dr(Y).
Scalar p_of_y(const Hypersurface& h, const VectorField& y);

struct ResidualValue {
  Scalar value;
  std::vector<std::string> warnings;
};

/// (dd^c p + i_X d gamma ^ d^c p)(V, W) with (gamma, X) canonical.
ResidualValue deformation_residual(const Hypersurface& h, const Scalar& p, const VectorField& v,
                                   const VectorField& w);
/// The 2-form dd^c p + i_X d gamma ^ d^c p.
KForm deformation_form(const Hypersurface& h, const Scalar& p);

/// -d^c p.
KForm dgamma_dt(const Hypersurface& h, const Scalar& p);

}  // namespace fncalc
