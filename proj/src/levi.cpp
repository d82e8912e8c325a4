#include "fncalc/levi.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "fncalc/error.hpp"
#include "fncalc/vvform.hpp"

namespace fncalc {
namespace {

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

Matrix leading_block(const Matrix& m, int k) {
  Matrix b(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) b(i, j) = m(i, j);
  return b;
}

// Sample points for the positivity check: the origin first, then a few fixed offsets.
std::vector<std::vector<Rational>> probe_points(int n) {
  std::vector<std::vector<Rational>> out;
  for (int k = 0; k < 4; ++k) {
    std::vector<Rational> p;
    for (int i = 0; i < n; ++i) p.emplace_back(k == 0 ? 0 : (i + k) % 3 + 1, k + 1);
    for (auto& q : p) q.canonicalize();
    out.push_back(std::move(p));
  }
  return out;
}

bool positive_definite_somewhere(const Matrix& g) {
  for (const auto& pt : probe_points(g.rows())) {
    try {
      bool ok = true;
      for (int k = 1; k <= g.rows() && ok; ++k) ok = determinant(leading_block(g, k)).eval(pt) > 0;
      return ok;
    } catch (const PoleError&) {
    }
  }
  return false;
}

std::vector<Scalar> gradient(const Chart& chart, const Scalar& r) {
  std::vector<Scalar> g;
  for (int i = 0; i < chart.dim(); ++i) g.push_back(r.partial(i));
  return g;
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace

ComplexChart::ComplexChart(Chart chart, std::optional<Matrix> metric)
    : chart_(std::move(chart)), metric_(metric ? *metric : Matrix::identity(chart_.dim())), j_(chart_.dim(), chart_.dim()) {
  const int n = chart_.dim();
  if (n % 2 != 0) throw PreconditionViolation("complex chart needs even real dimension");
  for (int i = 0; i < n / 2; ++i) {
    j_(2 * i + 1, 2 * i) = Scalar(1);
    j_(2 * i, 2 * i + 1) = Scalar(-1);
  }
  if (metric_.rows() != n || metric_.cols() != n) throw PreconditionViolation("metric size differs from dimension");
  if (!(transpose(metric_) == metric_)) throw PreconditionViolation("metric is not symmetric");
  if (!(transpose(j_) * metric_ * j_ == metric_)) throw PreconditionViolation("metric is not J-invariant");
  if (!positive_definite_somewhere(metric_)) throw PreconditionViolation("metric is not positive definite");
}

ComplexChart ComplexChart::standard(int n, std::optional<Matrix> metric) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) {
    names.push_back("x" + std::to_string(i));
    names.push_back("y" + std::to_string(i));
  }
  return ComplexChart(Chart(std::move(names)), std::move(metric));
}

VectorField ComplexChart::apply_j(const VectorField& v) const {
  require_same_chart(chart_, v.chart());
  std::vector<Scalar> out(static_cast<std::size_t>(chart_.dim()));
  for (int i = 0; i < chart_.dim(); ++i)
    for (int k = 0; k < chart_.dim(); ++k)
      if (!j_(i, k).is_zero()) out[static_cast<std::size_t>(i)] += j_(i, k) * v[k];
  return VectorField(chart_, std::move(out));
}

KForm ComplexChart::apply_j(const KForm& sigma) const {
  return act_on_form(VVForm::from_endo_matrix(chart_, j_), sigma);
}

KForm dc(const ComplexChart& cc, const Scalar& f) {
  return -cc.apply_j(d(KForm::function(cc.chart(), f)));
}

LeviMatrix levi_form(const ComplexChart& cc, const Scalar& r) {
  const int n = cc.complex_dim();
  LeviMatrix m{Matrix(n, n), Matrix(n, n)};
  const Scalar quarter = Scalar(Rational(1, 4));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int xi = 2 * i, yi = 2 * i + 1, xj = 2 * j, yj = 2 * j + 1;
      m.re(i, j) = quarter * (r.partial(xi).partial(xj) + r.partial(yi).partial(yj));
      m.im(i, j) = quarter * (r.partial(xi).partial(yj) - r.partial(yi).partial(xj));
    }
  return m;
}

Hypersurface::Hypersurface(ComplexChart cc, Scalar r) : cc_(std::move(cc)), r_(std::move(r)) {
  if (r_.max_var() >= chart().dim()) throw IndexError("defining function uses a coordinate outside the chart");
  if (dr().is_zero()) throw PreconditionViolation("dr vanishes identically");
}

bool Hypersurface::vanishes_on(const Scalar& f) const {
  if (f.is_zero()) return true;
  const Polynomial common = gcd(f.num(), r_.num());
  const Polynomial rest = exact_divide(r_.num(), common);
  if (rest.is_constant()) return true;
  // The cofactor of r not dividing f may still have no real zeros, or zeros
  // where f vanishes: decide on sampled points of {rest = 0}.
  std::vector<std::vector<Rational>> pts;
  try {
    pts = real_points(chart(), Scalar(rest), 8, 0x5a3d);
  } catch (const NoRealPoints&) {
    return true;
  }
  for (const auto& p : pts) {
    try {
      if (std::abs(f.eval(p).get_d()) > kLeviTolerance) return false;
    } catch (const PoleError&) {
    }
  }
  return true;
}

std::vector<std::vector<Rational>> hypersurface_points(const Hypersurface& h, int count, std::uint64_t seed) {
  return real_points(h.chart(), h.r(), count, seed);
}

std::vector<std::vector<Rational>> real_points(const Chart& chart, const Scalar& r, int count, std::uint64_t seed) {
  const int n = chart.dim();
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const Rational tol(1, 1000000000);
  std::vector<std::vector<Rational>> out;
  auto value = [&](std::vector<Rational>& p, int axis, const Rational& t) {
    p[static_cast<std::size_t>(axis)] = t;
    return r.eval(p);
  };
  for (int attempt = 0; attempt < 200 * std::max(count, 1) && static_cast<int>(out.size()) < count; ++attempt) {
    std::vector<Rational> base;
    for (int i = 0; i < n; ++i) {
      base.emplace_back(pick(-16, 16), 8);
      base.back().canonicalize();
    }
    const int axis = pick(0, n - 1);
    std::vector<std::pair<Rational, Rational>> brackets;
    try {
      Rational prev_t(-2), prev_v = value(base, axis, prev_t);
      if (prev_v == 0) brackets.emplace_back(prev_t, prev_t);
      for (int k = -15; k <= 16; ++k) {
        Rational t(k, 8);
        t.canonicalize();
        const Rational v = value(base, axis, t);
        if (v == 0)
          brackets.emplace_back(t, t);
        else if (sgn(v) * sgn(prev_v) < 0)
          brackets.emplace_back(prev_t, t);
        prev_t = t;
        prev_v = v;
      }
    } catch (const PoleError&) {
      continue;
    }
    if (brackets.empty()) continue;
    auto [lo, hi] = brackets[static_cast<std::size_t>(pick(0, static_cast<int>(brackets.size()) - 1))];
    try {
      Rational lo_v = value(base, axis, lo);
      while (hi - lo > tol) {
        Rational mid = (lo + hi) / 2;
        const Rational mv = value(base, axis, mid);
        if (mv == 0) {
          lo = hi = mid;
          break;
        }
        if (sgn(mv) == sgn(lo_v)) {
          lo = mid;
          lo_v = mv;
        } else {
          hi = mid;
        }
      }
      Rational root = (lo + hi) / 2;
      root.canonicalize();
      base[static_cast<std::size_t>(axis)] = root;
      out.push_back(std::move(base));
    } catch (const PoleError&) {
    }
  }
  if (out.empty()) throw NoRealPoints();
  return out;
}

Distribution levi_distribution(const Hypersurface& h) {
  const Chart& chart = h.chart();
  const KForm dr = h.dr();
  const KForm dcr = dc(h.complex_chart(), h.r());
  Matrix m(2, chart.dim());
  for (int i = 0; i < chart.dim(); ++i) {
    m(0, i) = dr.coefficient(IndexMask{1} << i);
    m(1, i) = dcr.coefficient(IndexMask{1} << i);
  }
  std::vector<VectorField> gens;
  for (auto& v : kernel(m)) gens.emplace_back(chart, std::move(v));
  return Distribution(chart, std::move(gens));
}

LeviFlatReport is_levi_flat(const Hypersurface& h, int samples, std::uint64_t seed) {
  if (samples < 1) throw PreconditionViolation("need at least one sample point");
  LeviFlatReport report;
  report.tolerance = kLeviTolerance;
  const Chart& chart = h.chart();
  const int n = h.complex_chart().complex_dim();
  const std::vector<Scalar> grad = gradient(chart, h.r());
  const LeviMatrix lm = levi_form(h.complex_chart(), h.r());

  using C = std::complex<double>;
  for (auto& pt : hypersurface_points(h, samples, seed)) {
    try {
      std::vector<C> a(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        a[static_cast<std::size_t>(i)] =
            0.5 * C(to_double(grad[static_cast<std::size_t>(2 * i)].eval(pt)),
                    -to_double(grad[static_cast<std::size_t>(2 * i + 1)].eval(pt)));
      std::vector<std::vector<C>> hm(static_cast<std::size_t>(n), std::vector<C>(static_cast<std::size_t>(n)));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          hm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
              C(to_double(lm.re(i, j).eval(pt)), to_double(lm.im(i, j).eval(pt)));
      std::size_t k = 0;
      for (std::size_t i = 1; i < a.size(); ++i)
        if (std::abs(a[i]) > std::abs(a[k])) k = i;
      if (std::abs(a[k]) == 0) continue;
      // Basis e_j - (a_j / a_k) e_k of the complex tangent space.
      std::vector<std::vector<C>> basis;
      for (std::size_t j = 0; j < a.size(); ++j) {
        if (j == k) continue;
        std::vector<C> w(a.size());
        w[j] = 1;
        w[k] = -a[j] / a[k];
        basis.push_back(std::move(w));
      }
      double magnitude = 0;
      for (const auto& w : basis)
        for (const auto& v : basis) {
          C sum = 0;
          for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < a.size(); ++j) sum += hm[i][j] * w[i] * std::conj(v[j]);
          magnitude = std::max(magnitude, std::abs(sum));
        }
      magnitude /= std::abs(a[k]);
      report.samples.push_back(LeviSample{std::move(pt), magnitude});
    } catch (const PoleError&) {
    }
  }
  if (report.samples.empty()) throw NoRealPoints();
  report.witness = *std::max_element(report.samples.begin(), report.samples.end(),
                                     [](const LeviSample& x, const LeviSample& y) { return x.magnitude < y.magnitude; });
  report.numeric_flat = report.witness->magnitude < report.tolerance;

  const Distribution levi = levi_distribution(h);
  report.ambient_integrable = is_integrable(levi).integrable;
  report.symbolic_flat = true;
  if (!report.ambient_integrable) {
    // On a pair X, Y of the distribution, d^c r([X, Y]) = -dd^c r(X, Y) and dr([X, Y]) = 0.
    const KForm ddc = d(dc(h.complex_chart(), h.r()));
    const auto& g = levi.generators();
    for (int i = 0; i < levi.rank() && report.symbolic_flat; ++i)
      for (int j = i + 1; j < levi.rank(); ++j) {
        const std::vector<VectorField> pair{g[static_cast<std::size_t>(i)], g[static_cast<std::size_t>(j)]};
        if (h.vanishes_on(ddc.evaluate(pair))) continue;
        report.symbolic_flat = false;
        report.symbolic_witness = std::make_pair(i, j);
        break;
      }
  }
  return report;
}

CanonicalCouple canonical_couple(const Hypersurface& h) {
  const Chart& chart = h.chart();
  const int n = chart.dim();
  const std::vector<Scalar> grad = gradient(chart, h.r());
  const Matrix ginv = inverse(h.complex_chart().metric());
  std::vector<Scalar> up(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) up[static_cast<std::size_t>(i)] += ginv(i, k) * grad[static_cast<std::size_t>(k)];
  Scalar norm2;
  for (int i = 0; i < n; ++i) norm2 += grad[static_cast<std::size_t>(i)] * up[static_cast<std::size_t>(i)];
  if (norm2.is_zero()) throw PreconditionViolation("gradient is identically null");
  const VectorField z = norm2.inverse() * VectorField(chart, std::move(up));
  const VectorField x = h.complex_chart().apply_j(z);
  return CanonicalCouple{DefiningCouple(dc(h.complex_chart(), h.r()), x), z};
}

Scalar p_of_y(const Hypersurface& h, const VectorField& y) { return contract(y, h.dr()).function_value(); }

KForm deformation_form(const Hypersurface& h, const Scalar& p) {
  const CanonicalCouple cc = canonical_couple(h);
  const KForm dcp = dc(h.complex_chart(), p);
  return d(dcp) + wedge(contract(cc.couple.x(), d(cc.couple.gamma())), dcp);
}

ResidualValue deformation_residual(const Hypersurface& h, const Scalar& p, const VectorField& v,
                                   const VectorField& w) {
  const CanonicalCouple cc = canonical_couple(h);
  ResidualValue out;
  const KForm dr = h.dr();
  const char* names[] = {"V", "W"};
  const VectorField* fields[] = {&v, &w};
  for (int k = 0; k < 2; ++k) {
    const Scalar on_gamma = contract(*fields[k], cc.couple.gamma()).function_value();
    const Scalar on_dr = contract(*fields[k], dr).function_value();
    if (!h.vanishes_on(on_gamma) || !h.vanishes_on(on_dr))
      out.warnings.push_back(std::string(names[k]) + " is not tangent to the Levi distribution");
  }
  const std::vector<VectorField> pair{v, w};
  out.value = deformation_form(h, p).evaluate(pair);
  return out;
}

KForm dgamma_dt(const Hypersurface& h, const Scalar& p) { return -dc(h.complex_chart(), p); }

}  // namespace fncalc
