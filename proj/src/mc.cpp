#include "fncalc/mc.hpp"

#include <sstream>

#include "fncalc/error.hpp"

namespace fncalc {

VVForm r_phi(const VVForm& phi) { return VVForm::identity(phi.chart()) + phi; }

EndoInverse invert_endo(const VVForm& phi) {
  if (phi.degree() != 1) throw DegreeMismatch("inversion requires an endomorphism");
  const Matrix m = phi.as_endo_matrix();
  const Scalar det = determinant(m);
  if (det.is_zero()) throw NotInvertible();
  EndoInverse out{VVForm::from_endo_matrix(phi.chart(), inverse(m)), det, {}};
  if (!det.is_constant())
    out.warnings.push_back("determinant " + det.to_string(phi.chart().names()) + " vanishes on a subvariety");
  return out;
}

KForm d_phi_apply(const VVForm& phi, const KForm& sigma) {
  const VVForm r = r_phi(phi);
  const VVForm r_inv = invert_endo(r).inverse;
  return act_on_form(r, d(act_on_form(r_inv, sigma)));
}

VVForm b_of_phi(const VVForm& phi) {
  const VVForm r_inv = invert_endo(r_phi(phi)).inverse;
  return Scalar(Rational(-1, 2)) * compose(r_inv, fn_bracket(phi, phi));
}

MCSolution e_phi(const VVForm& phi) {
  const EndoInverse inv = invert_endo(r_phi(phi));
  VVForm b = Scalar(Rational(-1, 2)) * compose(inv.inverse, fn_bracket(phi, phi));
  Derivation e(phi, b);
  return {phi, std::move(b), std::move(e), inv.warnings};
}

Derivation mc_residual(const Derivation& d) {
  if (d.degree() != 1) throw DegreeMismatch("Maurer-Cartan residual requires degree 1");
  return daleth(d) + Scalar(Rational(1, 2)) * derivation_bracket(d, d);
}

Derivation gamma_k(const VVForm& phi, int k) {
  if (k < 1) throw PreconditionViolation("gamma index must be at least 1");
  if (k == 1) return Derivation::lie(phi);
  VVForm level = fn_bracket(phi, phi);
  for (int i = 0; i < k - 2; ++i) level = compose(phi, level);
  const Rational half = (k % 2 == 1) ? Rational(1, 2) : Rational(-1, 2);
  return Derivation::insertion(Scalar(half) * level);
}

std::vector<Derivation> gamma_recursive(const VVForm& phi, int k) {
  if (k < 1) throw PreconditionViolation("gamma index must be at least 1");
  std::vector<Derivation> g{Derivation::lie(phi)};
  for (int r = 2; r <= k; ++r) {
    Derivation sum = Derivation::zero(phi.chart(), 1);
    for (int p = 1; p < r; ++p)
      sum = sum + aleph(derivation_bracket(g[static_cast<std::size_t>(p - 1)], g[static_cast<std::size_t>(r - p - 1)]));
    g.push_back(Scalar(Rational(-1, 2)) * sum);
  }
  return g;
}

std::optional<FrameWitness> first_nonzero_pair(const VVForm& form, int level) {
  for (int a = 0; a < form.dim(); ++a)
    for (int b = a + 1; b < form.dim(); ++b) {
      VectorField v = frame_value(form, a, b);
      if (!v.is_zero()) return FrameWitness{level, a, b, std::move(v)};
    }
  return std::nullopt;
}

TypeReport finite_type(const VVForm& phi, int cap) {
  if (cap < 1) throw PreconditionViolation("cap must be at least 1");
  if (phi.degree() != 1) throw DegreeMismatch("finite type requires an endomorphism");
  TypeReport report;
  report.cap = cap;

  // Stabilization index: least j <= n with Phi^{j+1} = Phi^j.
  std::optional<int> stable;
  {
    const Matrix m = phi.as_endo_matrix();
    Matrix power = Matrix::identity(phi.dim());
    for (int j = 0; j <= phi.dim(); ++j) {
      const Matrix next = power * m;
      if (next == power) {
        stable = j;
        break;
      }
      power = next;
    }
  }

  VVForm level = fn_bracket(phi, phi);
  for (int r = 0; r <= cap; ++r) {
    if (level.is_zero()) {
      report.status = TypeStatus::Finite;
      report.type_value = r;
      return report;
    }
    report.witness = first_nonzero_pair(level, r);
    if (stable && r >= *stable) {
      report.status = TypeStatus::Infinite;
      report.stabilization_index = *stable;
      return report;
    }
    if (r < cap) level = compose(phi, level);
  }
  report.status = TypeStatus::ExceedsCap;
  return report;
}

std::string TypeReport::describe() const {
  std::ostringstream os;
  switch (status) {
    case TypeStatus::Finite:
      os << type_value;
      break;
    case TypeStatus::Infinite:
      os << "infinite";
      break;
    case TypeStatus::ExceedsCap:
      os << "exceeds cap " << cap;
      break;
  }
  return os.str();
}

}  // namespace fncalc
