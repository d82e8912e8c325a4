#include <doctest.h>

#include <vector>

#include "fncalc/error.hpp"
#include "fncalc/expr_parser.hpp"
#include "fncalc/levi.hpp"
#include "generators.hpp"
#include "oracle.hpp"

using namespace fncalc;

namespace {

const ComplexChart kC2 = ComplexChart::standard(2);
const Chart& kChart = kC2.chart();

Scalar s(const char* text) { return parse_scalar(text, kChart.names()); }
KForm dx(int i) { return KForm::differential(kChart, i); }
VectorField e(int i) { return VectorField::coordinate(kChart, i); }
Hypersurface hyp(const char* r) { return Hypersurface(kC2, s(r)); }

// Polynomial in x1, y1 only.
Scalar leaf_polynomial(gen::Rng& rng) {
  Scalar out;
  for (int t = rng.uniform(1, 4); t > 0; --t) {
    Scalar mono(rng.uniform(-3, 3));
    for (int k = rng.uniform(0, 3); k > 0; --k) mono *= Scalar::coordinate(rng.uniform(0, 1));
    out += mono;
  }
  return out;
}

}  // namespace

TEST_CASE("complex structure") {
  const Matrix& j = kC2.j();
  CHECK(j * j == Scalar(-1) * Matrix::identity(4));
  CHECK(kC2.apply_j(e(0)) == e(1));
  CHECK(kC2.apply_j(e(1)) == -e(0));
  CHECK(kC2.apply_j(e(2)) == e(3));
  CHECK_THROWS_AS(ComplexChart(Chart({"x", "y", "z"})), PreconditionViolation);
  Matrix skew = Matrix::identity(4);
  skew(0, 1) = Scalar(1);
  CHECK_THROWS_AS(ComplexChart::standard(2, skew), PreconditionViolation);
  skew(1, 0) = Scalar(1);  // symmetric but not J-invariant
  CHECK_THROWS_AS(ComplexChart::standard(2, skew), PreconditionViolation);
  CHECK_THROWS_AS(ComplexChart::standard(2, Scalar(-1) * Matrix::identity(4)), PreconditionViolation);
  CHECK_NOTHROW(ComplexChart::standard(2, Scalar(4) * Matrix::identity(4)));
}

TEST_CASE("twisted differential") {
  CHECK(dc(kC2, s("y2")) == -dx(2));
  CHECK(dc(kC2, s("x1")) == dx(1));
  CHECK(dc(kC2, s("7")).is_zero());
  // (d^c f)(V) = -df(JV) on the coordinate frame.
  gen::Rng rng(81);
  for (int t = 0; t < 10; ++t) {
    const Scalar f = gen::polynomial(rng, 4, 3);
    const KForm df = d(KForm::function(kChart, f));
    const KForm c = dc(kC2, f);
    for (int i = 0; i < 4; ++i)
      CHECK(oracle::evaluate(c, {e(i)}) == -oracle::evaluate(df, {kC2.apply_j(e(i))}));
    const KForm ddc = d(c);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        CHECK(oracle::evaluate(ddc, {e(a), e(b)}) == -oracle::evaluate(ddc, {e(b), e(a)}));
  }
  const KForm kahler = d(dc(kC2, s("x1^2 + y1^2 + x2^2 + y2^2")));
  CHECK(kahler == Scalar(4) * (wedge(dx(0), dx(1)) + wedge(dx(2), dx(3))));
}

TEST_CASE("levi matrix") {
  auto check = [](const char* r, std::vector<Rational> re, std::vector<Rational> im) {
    const LeviMatrix m = levi_form(kC2, s(r));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        CHECK(m.re(i, j) == Scalar(re[static_cast<std::size_t>(2 * i + j)]));
        CHECK(m.im(i, j) == Scalar(im[static_cast<std::size_t>(2 * i + j)]));
      }
  };
  check("x1^2 + y1^2 + x2^2 + y2^2 - 1", {1, 0, 0, 1}, {0, 0, 0, 0});
  check("y2", {0, 0, 0, 0}, {0, 0, 0, 0});
  check("x1^2 - y1^2", {0, 0, 0, 0}, {0, 0, 0, 0});
  check("y2 + x1^2", {Rational(1, 2), 0, 0, 0}, {0, 0, 0, 0});
  // |z1 + i z2|^2 = (x1 - y2)^2 + (y1 + x2)^2 has the rank-one matrix (1, -i; i, 1).
  check("(x1 - y2)^2 + (y1 + x2)^2", {1, 0, 0, 1}, {0, -1, 1, 0});
}

TEST_CASE("hypersurface sampling") {
  const Hypersurface sphere = hyp("x1^2 + y1^2 + x2^2 + y2^2 - 1");
  const auto pts = hypersurface_points(sphere, 8, 3);
  CHECK(pts.size() == 8);
  for (const auto& p : pts) {
    const double v = sphere.r().eval(p).get_d();
    CHECK(std::abs(v) < 1e-8);
  }
  CHECK(hypersurface_points(sphere, 8, 3) == pts);
  CHECK_THROWS_AS(hypersurface_points(hyp("x1^2 + y1^2 + 1"), 3, 1), NoRealPoints);
  CHECK_THROWS_AS(hyp("5"), PreconditionViolation);
}

TEST_CASE("levi flatness") {
  const LeviFlatReport flat = is_levi_flat(hyp("y2"), 6);
  CHECK(flat.numeric_flat);
  CHECK(flat.symbolic_flat);
  CHECK(flat.ambient_integrable);
  CHECK(flat.agree());

  const LeviFlatReport sphere = is_levi_flat(hyp("x1^2 + y1^2 + x2^2 + y2^2 - 1"), 6);
  CHECK_FALSE(sphere.numeric_flat);
  CHECK_FALSE(sphere.symbolic_flat);
  REQUIRE(sphere.witness.has_value());
  CHECK(sphere.witness->magnitude > 0.1);
  CHECK(sphere.symbolic_witness.has_value());

  const LeviFlatReport bump = is_levi_flat(hyp("y2 + x1^2"), 6);
  CHECK_FALSE(bump.numeric_flat);
  CHECK_FALSE(bump.symbolic_flat);

  // Pluriharmonic perturbation of a hyperplane stays flat.
  const LeviFlatReport harmonic = is_levi_flat(hyp("y2 + x1^2 - y1^2"), 6);
  CHECK(harmonic.flat());

  // Flat on {r = 0} only; nearby level sets are not Levi-flat.
  const LeviFlatReport only_zero = is_levi_flat(hyp("y2 * (1 + x1^2)"), 6);
  CHECK_FALSE(only_zero.ambient_integrable);
  CHECK(only_zero.symbolic_flat);
  CHECK(only_zero.numeric_flat);
}

TEST_CASE("levi checks agree on the corpus") {
  const ComplexChart c3 = ComplexChart::standard(3);
  auto s3 = [&](const char* t) { return parse_scalar(t, c3.chart().names()); };
  struct Case {
    Hypersurface h;
    bool flat;
  };
  const std::vector<Case> corpus{
      {hyp("y2"), true},
      {hyp("x1^2 + y1^2 + x2^2 + y2^2 - 1"), false},
      {hyp("y2 + x1^2"), false},
      {hyp("x2 + y1^2"), false},
      {hyp("y2 + x1^3 - 3*x1*y1^2"), true},
      {hyp("x2 - x1*y1"), true},
      {hyp("y2 * (1 + x1^2)"), true},
      {hyp("x1^2 + y1^2 - x2^2 - y2^2 - 1"), false},
      {Hypersurface(c3, s3("y3 + x1*x2 - y1*y2")), true},
      {Hypersurface(c3, s3("y3 + x1^2 + y1^2 - x2^2 - y2^2")), false},
  };
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CAPTURE(i);
    const LeviFlatReport r = is_levi_flat(corpus[i].h, 5, 100 + i);
    CHECK(r.agree());
    CHECK(r.numeric_flat == corpus[i].flat);
  }
}

TEST_CASE("canonical couple") {
  const CanonicalCouple c = canonical_couple(hyp("y2"));
  CHECK(c.z == e(3));
  CHECK(c.couple.x() == -e(2));
  CHECK(c.couple.gamma() == -dx(2));
  const CanonicalCouple doubled = canonical_couple(hyp("2*y2"));
  CHECK(doubled.z == Scalar(Rational(1, 2)) * e(3));
  CHECK(doubled.couple.gamma() == Scalar(-2) * dx(2));
  const CanonicalCouple conformal = canonical_couple(Hypersurface(ComplexChart::standard(2, Scalar(4) * Matrix::identity(4)), s("y2")));
  CHECK(conformal.z == e(3));

  Matrix g = Matrix::identity(4);
  g(0, 0) = g(1, 1) = s("2 + x2^2");
  const ComplexChart weighted = ComplexChart::standard(2, g);
  gen::Rng rng(82);
  int tested = 0;
  for (int t = 0; t < 40; ++t) {
    const Scalar r = gen::polynomial(rng, 4, 2, 4);
    if (r.is_constant()) continue;
    for (const ComplexChart* cc : {&kC2, &weighted}) {
      const Hypersurface h(*cc, r);
      const CanonicalCouple k = canonical_couple(h);
      CHECK(contract(k.couple.x(), k.couple.gamma()).function_value() == Scalar(1));
      CHECK(contract(k.couple.x(), h.dr()).is_zero());
      CHECK(contract(k.z, h.dr()).function_value() == Scalar(1));
      ++tested;
    }
  }
  CHECK(tested > 20);
}

TEST_CASE("deformation function") {
  const Hypersurface h = hyp("y2");
  CHECK(p_of_y(h, e(3)) == Scalar(1));
  CHECK(p_of_y(h, s("x1") * e(3)) == s("x1"));
  CHECK(p_of_y(h, e(0) + e(2)).is_zero());
  CHECK(dgamma_dt(h, Scalar()).is_zero());
  CHECK(dgamma_dt(h, s("x1")) == -dx(1));
  CHECK(dgamma_dt(h, s("x1 + 3*y1^2")) == dgamma_dt(h, s("x1")) + Scalar(3) * dgamma_dt(h, s("y1^2")));
}

TEST_CASE("deformation residual is the leafwise laplacian") {
  const Hypersurface h = hyp("y2");
  CHECK(deformation_residual(h, s("5"), e(0), e(1)).value.is_zero());
  CHECK(deformation_residual(h, s("x1^2"), e(0), e(1)).value == Scalar(2));
  CHECK(deformation_residual(h, s("x1^2 - y1^2"), e(0), e(1)).value.is_zero());
  CHECK(deformation_residual(h, s("x1^2"), e(0), e(1)).warnings.empty());
  CHECK(deformation_residual(h, s("x1^2"), e(0), e(3)).warnings.size() == 1);
  gen::Rng rng(83);
  for (int t = 0; t < 20; ++t) {
    const Scalar p = leaf_polynomial(rng);
    const Scalar laplacian = p.partial(0).partial(0) + p.partial(1).partial(1);
    CHECK(deformation_residual(h, p, e(0), e(1)).value == laplacian);
  }
}

TEST_CASE("deformation residual through the first-order identity") {
  // alpha = -d^c p fed into delta alpha + L_Y gamma ^ gamma gives minus the
  // residual on Levi-tangent pairs.
  const Hypersurface h = hyp("y2");
  const CanonicalCouple c = canonical_couple(h);
  gen::Rng rng(84);
  for (int t = 0; t < 10; ++t) {
    const Scalar p = leaf_polynomial(rng);
    const KForm alpha = dgamma_dt(h, p);
    const VectorField y = VectorField::zero(kChart);
    const DeltaAlfaResult r = delta_alfa_residual(c.couple, alpha, y);
    CHECK(r.compatible());
    const std::vector<VectorField> pair{e(0), e(1)};
    CHECK(r.residual.evaluate(pair) == -deformation_residual(h, p, e(0), e(1)).value);
    CHECK(delta(c.couple, dc(kC2, p)).evaluate(pair) == deformation_residual(h, p, e(0), e(1)).value);
  }
}
