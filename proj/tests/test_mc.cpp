#include <doctest.h>

#include <vector>

#include "fncalc/error.hpp"
#include "fncalc/expr_parser.hpp"
#include "fncalc/mc.hpp"
#include "generators.hpp"
#include "oracle.hpp"

using namespace fncalc;

namespace {

const Chart kChart({"x", "y", "z"});

Scalar s(const char* text) { return parse_scalar(text, kChart.names()); }
KForm dx(int i) { return KForm::differential(kChart, i); }
VectorField e(int i) { return VectorField::coordinate(kChart, i); }
VectorField heis(int i) {
  if (i == 1) return VectorField(kChart, {s("0"), s("1"), s("x")});
  return i == 0 ? e(0) : e(2);
}
VVForm flag_endo() { return VVForm::tensor(dx(2) - s("x") * dx(1), e(0)); }
VVForm heis_projection() { return VVForm::tensor(dx(2) - s("x") * dx(1), e(2)); }

std::vector<KForm> test_forms(const Chart& chart) {
  std::vector<KForm> out;
  for (int i = 0; i < chart.dim(); ++i) {
    out.push_back(KForm::function(chart, Scalar::coordinate(i)));
    out.push_back(KForm::differential(chart, i));
    for (int j = 0; j < chart.dim(); ++j) out.push_back(Scalar::coordinate(i) * KForm::differential(chart, j));
  }
  return out;
}

bool zero_on_generators(const Derivation& d) {
  for (const auto& g : gen::generating_set(d.chart()))
    if (!d.apply(g).is_zero()) return false;
  return true;
}

}  // namespace

TEST_CASE("endomorphism inversion") {
  const VVForm k = VVForm::tensor(dx(2), e(0));
  const VVForm id = VVForm::identity(kChart);
  CHECK(invert_endo(id + k).inverse == id - k);
  CHECK(invert_endo(id).inverse == id);
  CHECK(invert_endo(id).warnings.empty());
  const VVForm singular = VVForm::tensor(dx(2), e(2)) + VVForm::tensor(dx(0), e(0));
  CHECK_THROWS_AS(invert_endo(singular), NotInvertible);
  try {
    invert_endo(singular);
  } catch (const NotInvertible& err) {
    CHECK(std::string(err.what()) == "endomorphism not invertible");
  }
  const VVForm scaled = s("x") * id;
  const EndoInverse inv = invert_endo(scaled);
  CHECK(inv.warnings.size() == 1);
  CHECK(inv.inverse == s("1/x") * id);
  gen::Rng rng(51);
  for (int t = 0; t < 10; ++t) {
    const VVForm r = r_phi(gen::vvform(rng, kChart, 1, 1));
    if (determinant(r.as_endo_matrix()).is_zero()) continue;
    const VVForm ri = invert_endo(r).inverse;
    CHECK(compose(ri, r) == id);
    CHECK(compose(r, ri) == id);
  }
}

TEST_CASE("conjugated differential") {
  gen::Rng rng(52);
  const KForm sigma = gen::form(rng, kChart, 1, 2, true);
  CHECK(d_phi_apply(VVForm(kChart, 1), sigma) == d(sigma));
  const VVForm phi = gen::nilpotent_endo(rng, kChart);
  const KForm f = KForm::function(kChart, s("x^2*y - z"));
  const VectorField X = gen::vector_field(rng, kChart);
  const std::vector<VectorField> one{X};
  const std::vector<VectorField> image{apply_vvf(phi, one)};
  CHECK(d_phi_apply(phi, f).evaluate(one) == d(f).evaluate(one) + d(f).evaluate(image));
  const VVForm k = VVForm::tensor(dx(2), e(0));
  const KForm xdy = s("x") * dx(1);
  CHECK(d_phi_apply(k, d_phi_apply(k, xdy)).is_zero());
  for (int t = 0; t < 5; ++t) {
    const VVForm p = gen::nilpotent_endo(rng, kChart);
    for (const auto& g : test_forms(kChart)) CHECK(d_phi_apply(p, d_phi_apply(p, g)).is_zero());
  }
}

TEST_CASE("b of phi") {
  CHECK(b_of_phi(VVForm::tensor(dx(2), e(2))).is_zero());
  const std::vector<VectorField> x23{heis(1), heis(2)};
  CHECK(apply_vvf(b_of_phi(flag_endo()), x23) == -e(0));
  CHECK(b_of_phi(VVForm(kChart, 1)).is_zero());
}

TEST_CASE("canonical solution") {
  const MCSolution zero = e_phi(VVForm(kChart, 1));
  CHECK(zero.e_phi.is_zero());
  gen::Rng rng(53);
  for (int t = 0; t < 6; ++t) {
    const VVForm phi = gen::nilpotent_endo(rng, kChart);
    const MCSolution sol = e_phi(phi);
    CHECK(sol.e_phi.l_part() == phi);
    CHECK(sol.b_phi == b_of_phi(phi));
    const KForm f = KForm::function(kChart, gen::nonzero_polynomial(rng, 3, 2));
    const std::vector<VectorField> one{gen::vector_field(rng, kChart)};
    const std::vector<VectorField> image{apply_vvf(phi, one)};
    CHECK(sol.e_phi.apply(f).evaluate(one) == d(f).evaluate(image));
    for (const auto& g : test_forms(kChart)) CHECK(sol.e_phi.apply(g) == d_phi_apply(phi, g) - d(g));
    CHECK(zero_on_generators(mc_residual(sol.e_phi)));
  }
  // Non-nilpotent but invertible R_Phi.
  const VVForm phi = s("x") * VVForm::tensor(dx(1), e(0)) + VVForm::tensor(dx(2), e(2));
  const MCSolution sol = e_phi(phi);
  for (const auto& g : test_forms(kChart)) CHECK(sol.e_phi.apply(g) == d_phi_apply(phi, g) - d(g));
  CHECK(zero_on_generators(mc_residual(sol.e_phi)));
}

TEST_CASE("maurer-cartan uniqueness") {
  CHECK(mc_residual(Derivation::zero(kChart, 1)).is_zero());
  const VVForm k = VVForm::tensor(dx(2), e(0));
  const VVForm perturbation = VVForm::tensor(wedge(dx(0), dx(1)), e(0));
  const Derivation wrong(k, b_of_phi(k) + perturbation);
  CHECK_FALSE(zero_on_generators(mc_residual(wrong)));
  gen::Rng rng(54);
  for (int t = 0; t < 4; ++t) {
    const VVForm phi = gen::nilpotent_endo(rng, kChart);
    const VVForm b = b_of_phi(phi);
    for (int j = 0; j < 10; ++j) {
      VVForm delta = gen::vvform(rng, kChart, 2, 2);
      if (delta.is_zero()) delta = perturbation;
      CHECK_FALSE(zero_on_generators(mc_residual(Derivation(phi, b + delta))));
    }
  }
}

TEST_CASE("gamma series") {
  const VVForm flag = flag_endo();
  CHECK(gamma_k(flag, 1) == Derivation::lie(flag));
  CHECK(gamma_k(flag, 2) == Scalar(Rational(-1, 2)) * Derivation::insertion(fn_bracket(flag, flag)));
  CHECK(gamma_k(flag, 3).is_zero());
  CHECK(gamma_k(flag, 1) + gamma_k(flag, 2) == e_phi(flag).e_phi);
  CHECK_THROWS_AS(gamma_k(flag, 0), PreconditionViolation);
  gen::Rng rng(55);
  for (int t = 0; t < 4; ++t) {
    const VVForm phi = gen::nilpotent_endo(rng, kChart, 1);
    const auto rec = gamma_recursive(phi, 5);
    for (int k = 1; k <= 5; ++k) CHECK(rec[static_cast<std::size_t>(k - 1)] == gamma_k(phi, k));
    for (int k = 2; k <= 5; ++k) CHECK(rec[static_cast<std::size_t>(k - 1)].l_part().is_zero());
    // Nilpotent of index <= 3 in dimension 3, so the type is at most 3.
    Derivation sum = Derivation::zero(kChart, 1);
    for (int k = 1; k <= 5; ++k) sum = sum + gamma_k(phi, k);
    CHECK(sum == e_phi(phi).e_phi);
  }
}

TEST_CASE("printed recursion sign disagrees with the closed form at odd k") {
  gen::Rng rng(56);
  const VVForm phi = gen::nilpotent_endo(rng, kChart, 1);
  const auto rec = gamma_recursive(phi, 2);
  // gamma_3 with the factor -(-1)^k / 2 = +1/2 at k = 3.
  const Derivation printed = Scalar(Rational(1, 2)) * (aleph(derivation_bracket(rec[0], rec[1])) +
                                                       aleph(derivation_bracket(rec[1], rec[0])));
  if (!gamma_k(phi, 3).is_zero()) CHECK_FALSE(printed == gamma_k(phi, 3));
  CHECK(printed == -gamma_k(phi, 3));
}

TEST_CASE("finite type classification") {
  const TypeReport flat = finite_type(VVForm::tensor(dx(2), e(2)));
  CHECK(flat.status == TypeStatus::Finite);
  CHECK(flat.type_value == 0);
  CHECK_FALSE(flat.witness);

  const TypeReport one = finite_type(flag_endo());
  CHECK(one.status == TypeStatus::Finite);
  CHECK(one.type_value == 1);
  REQUIRE(one.witness);
  CHECK(one.witness->level == 0);

  const VVForm proj = heis_projection();
  const TypeReport inf = finite_type(proj);
  CHECK(inf.status == TypeStatus::Infinite);
  CHECK(inf.describe() == "infinite");
  REQUIRE(inf.stabilization_index);
  CHECK(*inf.stabilization_index == 1);
  VVForm level = fn_bracket(proj, proj);
  const std::vector<VectorField> pair{heis(0), heis(1)};
  for (int k = 1; k <= 6; ++k) {
    level = compose(proj, level);
    CHECK(apply_vvf(level, pair) == Scalar(2) * e(2));
  }

  // No stabilization: a non-nilpotent, non-idempotent endomorphism.
  const VVForm twice = Scalar(2) * proj;
  const TypeReport capped = finite_type(twice, 4);
  CHECK(capped.status == TypeStatus::ExceedsCap);
  CHECK(capped.describe() == "exceeds cap 4");
  REQUIRE(capped.witness);
  CHECK(capped.witness->level == 4);
  CHECK_THROWS_AS(finite_type(proj, 0), PreconditionViolation);
}

TEST_CASE("type zero iff daleth e vanishes iff nijenhuis vanishes") {
  gen::Rng rng(57);
  std::vector<VVForm> corpus{VVForm::tensor(dx(2), e(2)), flag_endo(), heis_projection(), VVForm(kChart, 1)};
  for (int t = 0; t < 4; ++t) corpus.push_back(gen::nilpotent_endo(rng, kChart, 1));
  for (const auto& phi : corpus) {
    const bool type0 = finite_type(phi).status == TypeStatus::Finite && finite_type(phi).type_value == 0;
    CHECK(type0 == daleth(e_phi(phi).e_phi).is_zero());
    CHECK(type0 == nijenhuis(phi).is_zero());
  }
}

TEST_CASE("type report invariants") {
  gen::Rng rng(58);
  for (int t = 0; t < 6; ++t) {
    const VVForm phi = gen::nilpotent_endo(rng, kChart, 1);
    const TypeReport rep = finite_type(phi);
    REQUIRE(rep.status == TypeStatus::Finite);
    VVForm level = fn_bracket(phi, phi);
    for (int k = 0; k < rep.type_value; ++k) {
      CHECK_FALSE(level.is_zero());
      level = compose(phi, level);
    }
    CHECK(level.is_zero());
    CHECK(rep.type_value <= 3);
  }
}
