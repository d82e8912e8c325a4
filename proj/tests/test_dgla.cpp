#include <doctest.h>

#include <vector>

#include "fncalc/dgla.hpp"
#include "fncalc/error.hpp"
#include "fncalc/expr_parser.hpp"
#include "generators.hpp"
#include "oracle.hpp"

using namespace fncalc;

namespace {

const Chart kChart({"x", "y", "z"});

Scalar s(const char* text) { return parse_scalar(text, kChart.names()); }
KForm dx(int i) { return KForm::differential(kChart, i); }
VectorField e(int i) { return VectorField::coordinate(kChart, i); }

// Frame X1 = d/dx, X2 = d/dy + x d/dz, X3 = d/dz.
VectorField heis(int i) {
  if (i == 1) return VectorField(kChart, {s("0"), s("1"), s("x")});
  return i == 0 ? e(0) : e(2);
}

// Flag endomorphism: X1, X2 -> 0, X3 -> X1; equals (dz - x dy) (x) d/dx.
VVForm flag_endo() { return VVForm::tensor(dx(2) - s("x") * dx(1), e(0)); }

// Projection onto span(d/dz) along span(X1, X2).
VVForm projection_endo() { return VVForm::tensor(dx(2) - s("x") * dx(1), e(2)); }

bool same_operator(const Derivation& a, const OpaqueDerivation& b) {
  return agree_on_generators(OpaqueDerivation::from(a), b);
}

Derivation bracket_alternative_reading(const Derivation& a, const Derivation& b) {
  // L_{[Phi1,Phi2]} + I_{I_{Psi1}Phi2 - s I_{Psi2}Phi1 + I_{Psi1}Psi2 - s I_{Psi2}Psi1 + ...}
  // with the insertion terms moved out of the L subscript.
  const bool sign = (a.degree() * b.degree()) % 2 != 0;
  const auto sg = [&](const VVForm& v) { return sign ? v : -v; };
  VVForm l = fn_bracket(a.l_part(), b.l_part());
  VVForm i = insert(a.i_part(), b.i_part()) + sg(insert(b.i_part(), a.i_part())) +
             fn_bracket(a.l_part(), b.i_part()) + sg(fn_bracket(b.l_part(), a.i_part()));
  const VVForm moved = insert(a.i_part(), b.l_part()) + sg(insert(b.i_part(), a.l_part()));
  if (moved.degree() == i.degree()) i += moved;
  return Derivation(l, i);
}

}  // namespace

TEST_CASE("decompose recovers canonical parts") {
  const Derivation dd = decompose(OpaqueDerivation{kChart, 1, [](const KForm& sg) { return d(sg); }});
  CHECK(dd.l_part() == VVForm::identity(kChart));
  CHECK(dd.i_part().is_zero());
  for (int k = -1; k <= 3; ++k) {
    const Derivation z = decompose(OpaqueDerivation{kChart, k, [k](const KForm& sg) {
                                                      return KForm(sg.chart(), std::max(sg.degree() + k, -1));
                                                    }});
    CHECK(z.is_zero());
  }
  gen::Rng rng(41);
  for (int t = 0; t < 8; ++t)
    for (int k = -1; k <= 3; ++k) {
      const Derivation D = gen::derivation(rng, kChart, k, 2);
      CHECK(decompose(OpaqueDerivation::from(D)) == D);
    }
}

TEST_CASE("decompose rejects operators that are not derivations") {
  const OpaqueDerivation scale{kChart, 0, [](const KForm& sg) { return Scalar::coordinate(0) * sg; }};
  CHECK_THROWS_AS(decompose(scale), NotDerivation);
  const OpaqueDerivation twisted{kChart, 1, [](const KForm& sg) {
                                   return d(Scalar::coordinate(0) * sg);
                                 }};
  CHECK_THROWS_AS(decompose(twisted), NotDerivation);
  // Correct on generators, wrong on products.
  const OpaqueDerivation square{kChart, 0, [](const KForm& sg) {
                                  if (sg.degree() == 0) return KForm(sg.chart(), 0);
                                  return sg;
                                }};
  CHECK_THROWS_AS(decompose(square), NotDerivation);
  try {
    decompose(scale);
  } catch (const NotDerivation& err) {
    CHECK(std::string(err.what()) == "input is not a graded derivation");
  }
}

TEST_CASE("bracket examples") {
  gen::Rng rng(42);
  const VVForm phi = gen::vvform(rng, kChart, 1);
  const Derivation iphi = Derivation::insertion(phi);
  const Derivation iid = Derivation::insertion(VVForm::identity(kChart));
  CHECK(derivation_bracket(iphi, iid).is_zero());
  const VVForm psi = gen::vvform(rng, kChart, 2);
  const Derivation ll = derivation_bracket(Derivation::lie(phi), Derivation::lie(psi));
  CHECK(ll.l_part() == fn_bracket(phi, psi));
  CHECK(ll.i_part().is_zero());
  const Derivation D = gen::derivation(rng, kChart, 1);
  CHECK(derivation_bracket(Derivation::exterior(kChart), D) == daleth(D));
}

TEST_CASE("closed bracket formula matches the operator commutator") {
  gen::Rng rng(43);
  for (int t = 0; t < 6; ++t)
    for (int k1 = -1; k1 <= 2; ++k1)
      for (int k2 = -1; k2 <= 2; ++k2) {
        if (k1 + k2 > 3) continue;
        const Derivation a = gen::derivation(rng, kChart, k1);
        const Derivation b = gen::derivation(rng, kChart, k2);
        const OpaqueDerivation comm = commutator(OpaqueDerivation::from(a), OpaqueDerivation::from(b));
        const Derivation closed = derivation_bracket(a, b);
        CHECK(same_operator(closed, comm));
        if (k1 + k2 >= -1) CHECK(decompose(comm) == closed);
      }
}

TEST_CASE("alternative reading of the bracket formula fails the oracle") {
  gen::Rng rng(44);
  int disagreements = 0;
  for (int t = 0; t < 10; ++t) {
    const Derivation a = gen::derivation(rng, kChart, 1);
    const Derivation b = gen::derivation(rng, kChart, 1);
    const Derivation alt = bracket_alternative_reading(a, b);
    const OpaqueDerivation comm = commutator(OpaqueDerivation::from(a), OpaqueDerivation::from(b));
    if (!same_operator(alt, comm)) ++disagreements;
  }
  CHECK(disagreements > 0);
}

TEST_CASE("mixed bracket of an insertion and a Lie derivative") {
  // [I_Psi, L_Phi] = L_{I_Psi Phi} + (-1)^{|Phi|} I_{[Psi,Phi]}; the opposite
  // sign on the second term fails against the operator commutator.
  gen::Rng rng(50);
  int printed_sign_failures = 0;
  for (int t = 0; t < 5; ++t)
    for (int p = 0; p <= 2; ++p)
      for (int q = 1; q <= 2; ++q) {
        const VVForm phi = gen::vvform(rng, kChart, p);
        const VVForm psi = gen::vvform(rng, kChart, q);
        const OpaqueDerivation comm = commutator(OpaqueDerivation::from(Derivation::insertion(psi)),
                                                 OpaqueDerivation::from(Derivation::lie(phi)));
        const VVForm ipsi_phi = insert(psi, phi);
        const VVForm br = fn_bracket(psi, phi);
        const Derivation lie_part = Derivation::lie(ipsi_phi);
        const Derivation ins_part = Derivation::insertion(br);
        const Derivation good = lie_part + ((p % 2) ? -ins_part : ins_part);
        const Derivation printed = lie_part - ((p % 2) ? -ins_part : ins_part);
        CHECK(same_operator(good, comm));
        if (!same_operator(printed, comm)) ++printed_sign_failures;
      }
  CHECK(printed_sign_failures > 0);
}

TEST_CASE("daleth") {
  gen::Rng rng(45);
  const VVForm phi = gen::vvform(rng, kChart, 1);
  CHECK(daleth(Derivation::lie(phi)).is_zero());
  CHECK(daleth(Derivation::insertion(VVForm::identity(kChart))) == -Derivation::exterior(kChart));
  for (int k = -1; k <= 3; ++k) {
    const Derivation D = gen::derivation(rng, kChart, k);
    CHECK(daleth(daleth(D)).is_zero());
    const OpaqueDerivation comm =
        commutator(OpaqueDerivation::from(Derivation::exterior(kChart)), OpaqueDerivation::from(D));
    CHECK(same_operator(daleth(D), comm));
  }
  // [I_Psi, d] = L_Psi
  const VVForm psi = gen::vvform(rng, kChart, 2);
  const OpaqueDerivation comm = commutator(OpaqueDerivation::from(Derivation::insertion(psi)),
                                           OpaqueDerivation::from(Derivation::exterior(kChart)));
  CHECK(same_operator(Derivation::lie(psi), comm));
}

TEST_CASE("aleph is a contracting homotopy") {
  gen::Rng rng(46);
  CHECK(aleph(Derivation::insertion(gen::vvform(rng, kChart, 2))).is_zero());
  const VVForm phi = gen::vvform(rng, kChart, 2);
  CHECK(aleph(Derivation::lie(phi)) == Derivation::insertion(phi));
  for (int k = -1; k <= 3; ++k) {
    const Derivation D = gen::derivation(rng, kChart, k);
    const Derivation a = aleph(D);
    CHECK(a.l_part().is_zero());
    if (k >= 0) {
      CHECK(daleth(aleph(D)) + aleph(daleth(D)) == D);
    }
  }
}

TEST_CASE("fn bracket examples") {
  const VVForm id = VVForm::identity(kChart);
  CHECK(fn_bracket(id, id).is_zero());
  const VVForm flag = flag_endo();
  const VVForm ff = fn_bracket(flag, flag);
  const std::vector<VectorField> x23{heis(1), heis(2)};
  const std::vector<VectorField> x12{heis(0), heis(1)};
  const std::vector<VectorField> x13{heis(0), heis(2)};
  CHECK(apply_vvf(ff, x23) == Scalar(2) * e(0));
  CHECK(apply_vvf(ff, x12).is_zero());
  CHECK(apply_vvf(ff, x13).is_zero());
  const VVForm proj = projection_endo();
  CHECK(apply_vvf(fn_bracket(proj, proj), x12) == Scalar(2) * e(2));
}

TEST_CASE("fn bracket cross-checks") {
  gen::Rng rng(47);
  for (int t = 0; t < 10; ++t) {
    const VVForm a = gen::vvform(rng, kChart, 1, 2, t % 3 == 0);
    const VVForm b = gen::vvform(rng, kChart, 1, 2);
    CHECK(fn_bracket(a, b) == fn_bracket(b, a));
    CHECK(fn_bracket(a, b) == fn_bracket_endo(a, b));
    CHECK(fn_bracket(a, a) == Scalar(2) * nijenhuis(a));
    CHECK(fn_bracket(VVForm::identity(kChart), a).is_zero());
  }
}

TEST_CASE("fn bracket realizes the commutator of Lie derivatives") {
  gen::Rng rng(48);
  for (int t = 0; t < 4; ++t)
    for (int k = 0; k <= 2; ++k)
      for (int l = 0; l <= 2; ++l) {
        const VVForm a = gen::vvform(rng, kChart, k);
        const VVForm b = gen::vvform(rng, kChart, l);
        const OpaqueDerivation comm =
            commutator(OpaqueDerivation::from(Derivation::lie(a)), OpaqueDerivation::from(Derivation::lie(b)));
        CHECK(same_operator(Derivation::lie(fn_bracket(a, b)), comm));
        const VVForm sym = fn_bracket(b, a);
        CHECK(fn_bracket(a, b) == (((k * l) % 2) ? sym : -sym));
      }
}

TEST_CASE("nijenhuis tensor") {
  const Chart c4({"x1", "y1", "x2", "y2"});
  Matrix j(4, 4);
  j(1, 0) = Scalar(1);
  j(0, 1) = Scalar(-1);
  j(3, 2) = Scalar(1);
  j(2, 3) = Scalar(-1);
  CHECK(nijenhuis(VVForm::from_endo_matrix(c4, j)).is_zero());
  const std::vector<VectorField> x23{heis(1), heis(2)};
  CHECK(apply_vvf(nijenhuis(flag_endo()), x23) == e(0));
  CHECK(nijenhuis(VVForm::identity(kChart)).is_zero());
  CHECK_THROWS_AS(nijenhuis(VVForm(kChart, 2)), DegreeMismatch);
}

TEST_CASE("graded antisymmetry, Jacobi and daleth compatibility") {
  gen::Rng rng(49);
  for (int t = 0; t < 6; ++t) {
    const int k1 = rng.uniform(-1, 1), k2 = rng.uniform(-1, 1), k3 = rng.uniform(-1, 1);
    const Derivation a = gen::derivation(rng, kChart, k1);
    const Derivation b = gen::derivation(rng, kChart, k2);
    const Derivation c = gen::derivation(rng, kChart, k3);
    const Derivation ab = derivation_bracket(a, b);
    const Derivation ba = derivation_bracket(b, a);
    CHECK(ab == (((k1 * k2) % 2) ? ba : -ba));
    // [a,[b,c]] = [[a,b],c] + (-1)^{k1 k2} [b,[a,c]]
    const Derivation lhs = derivation_bracket(a, derivation_bracket(b, c));
    const Derivation r2 = derivation_bracket(b, derivation_bracket(a, c));
    const Derivation rhs = derivation_bracket(ab, c) + (((k1 * k2) % 2) ? -r2 : r2);
    CHECK(lhs == rhs);
    const Derivation left = daleth(ab);
    const Derivation second = derivation_bracket(a, daleth(b));
    const Derivation right = derivation_bracket(daleth(a), b) + ((k1 % 2) ? -second : second);
    CHECK(left == right);
  }
}
