#include "fncalc/dgla.hpp"

#include <random>
#include <vector>

#include "fncalc/error.hpp"

namespace fncalc {

namespace {

bool odd(int k) { return (k % 2) != 0; }

KForm signed_form(bool negative, const KForm& a) { return negative ? -a : a; }
VVForm signed_vv(bool negative, const VVForm& a) { return negative ? -a : a; }

}  // namespace

Derivation::Derivation(VVForm l_part, VVForm i_part) : l_part_(std::move(l_part)), i_part_(std::move(i_part)) {
  require_same_chart(l_part_.chart(), i_part_.chart());
  if (i_part_.degree() != l_part_.degree() + 1) throw DegreeMismatch("derivation parts have inconsistent degrees");
}

Derivation Derivation::zero(const Chart& chart, int degree) {
  return Derivation(VVForm(chart, degree), VVForm(chart, degree + 1));
}

Derivation Derivation::lie(const VVForm& phi) { return Derivation(phi, VVForm(phi.chart(), phi.degree() + 1)); }

Derivation Derivation::insertion(const VVForm& psi) { return Derivation(VVForm(psi.chart(), psi.degree() - 1), psi); }

Derivation Derivation::exterior(const Chart& chart) { return lie(VVForm::identity(chart)); }

KForm Derivation::apply(const KForm& sigma) const {
  KForm out = apply_L(l_part_, sigma);
  if (!i_part_.is_zero()) out += apply_I(i_part_, sigma);
  return out;
}

Derivation Derivation::operator+(const Derivation& o) const {
  return Derivation(l_part_ + o.l_part_, i_part_ + o.i_part_);
}

Derivation Derivation::operator-(const Derivation& o) const {
  return Derivation(l_part_ - o.l_part_, i_part_ - o.i_part_);
}

Derivation Derivation::operator-() const { return Derivation(-l_part_, -i_part_); }

Derivation operator*(const Scalar& f, const Derivation& a) { return Derivation(f * a.l_part_, f * a.i_part_); }

OpaqueDerivation OpaqueDerivation::from(const Derivation& d) {
  return {d.chart(), d.degree(), [d](const KForm& s) { return d.apply(s); }};
}

OpaqueDerivation commutator(const OpaqueDerivation& p, const OpaqueDerivation& q) {
  require_same_chart(p.chart, q.chart);
  const bool negative = !odd(p.degree * q.degree);
  return {p.chart, p.degree + q.degree, [p, q, negative](const KForm& s) {
            KForm out = p(q(s));
            const KForm back = q(p(s));
            return negative ? out - back : out + back;
          }};
}

namespace {

std::vector<KForm> generators(const Chart& chart) {
  std::vector<KForm> out;
  for (int i = 0; i < chart.dim(); ++i) out.push_back(KForm::function(chart, Scalar::coordinate(i)));
  for (int i = 0; i < chart.dim(); ++i) out.push_back(KForm::differential(chart, i));
  return out;
}

KForm sample_form(std::mt19937_64& rng, const Chart& chart, int degree) {
  const int n = chart.dim();
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> var(0, n - 1);
  KForm out(chart, degree);
  for (IndexMask m = 0; m < (IndexMask{1} << n); ++m) {
    if (popcount(m) != degree) continue;
    Scalar c(coef(rng));
    c += Scalar(coef(rng)) * Scalar::coordinate(var(rng)) * Scalar::coordinate(var(rng));
    out.add_term(m, c);
  }
  return out;
}

bool leibniz_holds(const OpaqueDerivation& op, const KForm& a, const KForm& b) {
  const KForm lhs = op(wedge(a, b));
  const KForm rhs = wedge(op(a), b) + signed_form(odd(op.degree * a.degree()), wedge(a, op(b)));
  return lhs == rhs;
}

}  // namespace

Derivation decompose(const OpaqueDerivation& op, std::uint64_t sample_seed) {
  const Chart& chart = op.chart;
  const int n = chart.dim();
  const int k = op.degree;
  if (k < -1 || k > n) throw DegreeMismatch("derivation degree out of range");
  try {
    std::vector<KForm> l_comps;
    for (int i = 0; i < n; ++i) {
      const KForm image = op(KForm::function(chart, Scalar::coordinate(i)));
      if (image.degree() != k) throw NotDerivation();
      l_comps.push_back(image);
    }
    const VVForm phi(chart, k, std::move(l_comps));
    std::vector<KForm> i_comps;
    for (int i = 0; i < n; ++i) {
      const KForm dxi = KForm::differential(chart, i);
      const KForm image = op(dxi);
      if (image.degree() != k + 1) throw NotDerivation();
      i_comps.push_back(image - apply_L(phi, dxi));
    }
    const Derivation result(phi, VVForm(chart, k + 1, std::move(i_comps)));

    // Products of generators and a few sample forms.
    const auto gens = generators(chart);
    for (std::size_t a = 0; a < gens.size(); ++a)
      for (std::size_t b = a; b < gens.size(); ++b)
        if (!leibniz_holds(op, gens[a], gens[b])) throw NotDerivation();
    std::mt19937_64 rng(sample_seed);
    for (int p = 0; p <= n; ++p) {
      const KForm s = sample_form(rng, chart, p);
      if (!(op(s) == result.apply(s))) throw NotDerivation();
    }
    if (!(op(KForm::function(chart, Scalar(1))).is_zero())) throw NotDerivation();
    return result;
  } catch (const DegreeMismatch&) {
    throw NotDerivation();
  }
}

bool agree_on_generators(const OpaqueDerivation& a, const OpaqueDerivation& b) {
  require_same_chart(a.chart, b.chart);
  if (a.degree != b.degree) return false;
  for (const auto& g : generators(a.chart))
    if (!(a(g) == b(g))) return false;
  return true;
}

VVForm insert(const VVForm& psi, const VVForm& phi) {
  require_same_chart(psi.chart(), phi.chart());
  std::vector<KForm> comps;
  for (const auto& c : phi.components()) comps.push_back(apply_I(psi, c));
  const int degree = psi.degree() + phi.degree() - 1;
  if (phi.degree() == 0) return VVForm(phi.chart(), degree);
  return VVForm(phi.chart(), degree, std::move(comps));
}

VVForm fn_bracket(const VVForm& phi, const VVForm& psi) {
  require_same_chart(phi.chart(), psi.chart());
  const Chart& chart = phi.chart();
  const int n = chart.dim();
  const int k = phi.degree();
  const int l = psi.degree();
  std::vector<KForm> out(static_cast<std::size_t>(n), KForm(chart, k + l));
  if (k < 0 || l < 0) return VVForm(chart, k + l);
  // [a (x) d_i, b (x) d_j] = a ^ d_i b (x) d_j - d_j a ^ b (x) d_i
  //   + (-1)^k (da ^ i_{d_i} b (x) d_j + i_{d_j} a ^ db (x) d_i)
  for (int i = 0; i < n; ++i) {
    const KForm& a = phi.component(i);
    if (a.is_zero()) continue;
    const KForm da = d(a);
    const VectorField di = VectorField::coordinate(chart, i);
    for (int j = 0; j < n; ++j) {
      const KForm& b = psi.component(j);
      if (b.is_zero()) continue;
      const VectorField dj = VectorField::coordinate(chart, j);
      KForm& out_j = out[static_cast<std::size_t>(j)];
      KForm& out_i = out[static_cast<std::size_t>(i)];
      out_j += wedge(a, b.partial(i));
      out_i -= wedge(a.partial(j), b);
      if (l > 0) out_j += signed_form(odd(k), wedge(da, contract(di, b)));
      if (k > 0) out_i += signed_form(odd(k), wedge(contract(dj, a), d(b)));
    }
  }
  return VVForm(chart, k + l, std::move(out));
}

VectorField frame_value(const VVForm& phi, int a, int b) {
  const std::vector<VectorField> pair{VectorField::coordinate(phi.chart(), a), VectorField::coordinate(phi.chart(), b)};
  return apply_vvf(phi, pair);
}

namespace {

// Assemble a vector-valued 2-form from its values on frame pairs a < b.
template <typename F>
VVForm two_form_from_values(const Chart& chart, F value) {
  const int n = chart.dim();
  VVForm out(chart, 2);
  std::vector<KForm> comps(static_cast<std::size_t>(n), KForm(chart, 2));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const VectorField v = value(a, b);
      for (int i = 0; i < n; ++i) comps[static_cast<std::size_t>(i)].add_term((IndexMask{1} << a) | (IndexMask{1} << b), v[i]);
    }
  return VVForm(chart, 2, std::move(comps));
}

VectorField apply_endo(const VVForm& phi, const VectorField& v) {
  const std::vector<VectorField> one{v};
  return apply_vvf(phi, one);
}

}  // namespace

VVForm fn_bracket_endo(const VVForm& phi, const VVForm& psi) {
  if (phi.degree() != 1 || psi.degree() != 1) throw DegreeMismatch("endomorphism bracket requires degree 1");
  require_same_chart(phi.chart(), psi.chart());
  return two_form_from_values(phi.chart(), [&](int a, int b) {
    const VectorField x = VectorField::coordinate(phi.chart(), a);
    const VectorField y = VectorField::coordinate(phi.chart(), b);
    const VectorField px = apply_endo(phi, x), py = apply_endo(phi, y);
    const VectorField qx = apply_endo(psi, x), qy = apply_endo(psi, y);
    const VectorField xy = lie_bracket(x, y);
    return lie_bracket(px, qy) + lie_bracket(qx, py) + apply_endo(phi, apply_endo(psi, xy)) +
           apply_endo(psi, apply_endo(phi, xy)) - apply_endo(phi, lie_bracket(qx, y)) -
           apply_endo(phi, lie_bracket(x, qy)) - apply_endo(psi, lie_bracket(px, y)) -
           apply_endo(psi, lie_bracket(x, py));
  });
}

VVForm nijenhuis(const VVForm& phi) {
  if (phi.degree() != 1) throw DegreeMismatch("Nijenhuis tensor requires degree 1");
  return two_form_from_values(phi.chart(), [&](int a, int b) {
    const VectorField x = VectorField::coordinate(phi.chart(), a);
    const VectorField y = VectorField::coordinate(phi.chart(), b);
    const VectorField px = apply_endo(phi, x), py = apply_endo(phi, y);
    return lie_bracket(px, py) + apply_endo(phi, apply_endo(phi, lie_bracket(x, y))) -
           apply_endo(phi, lie_bracket(px, y)) - apply_endo(phi, lie_bracket(x, py));
  });
}

Derivation derivation_bracket(const Derivation& a, const Derivation& b) {
  require_same_chart(a.chart(), b.chart());
  const int k1 = a.degree();
  const int k2 = b.degree();
  const bool sign = odd(k1 * k2);
  const Chart& chart = a.chart();
  const int k = k1 + k2;
  // L_{[Phi1,Phi2] + I_{Psi1}Phi2 - (-1)^{k1k2} I_{Psi2}Phi1}
  //   + I_{I_{Psi1}Psi2 - (-1)^{k1k2} I_{Psi2}Psi1 + [Phi1,Psi2] - (-1)^{k1k2}[Phi2,Psi1]}
  VVForm l(chart, k);
  VVForm i(chart, k + 1);
  const auto add = [](VVForm& target, const VVForm& term) {
    if (!term.is_zero()) target += term;
  };
  add(l, fn_bracket(a.l_part(), b.l_part()));
  add(l, insert(a.i_part(), b.l_part()));
  add(l, signed_vv(!sign, insert(b.i_part(), a.l_part())));
  add(i, insert(a.i_part(), b.i_part()));
  add(i, signed_vv(!sign, insert(b.i_part(), a.i_part())));
  add(i, fn_bracket(a.l_part(), b.i_part()));
  add(i, signed_vv(!sign, fn_bracket(b.l_part(), a.i_part())));
  return Derivation(l, i);
}

Derivation daleth(const Derivation& d) {
  // [d, L_Phi] = 0 and [d, I_Psi] = (-1)^{k+1} L_Psi.
  const int k = d.degree();
  return Derivation::lie(signed_vv(!odd(k), d.i_part()));
}

Derivation aleph(const Derivation& d) {
  const int k = d.degree();
  return Derivation::insertion(signed_vv(odd(k), d.l_part()));
}

}  // namespace fncalc
