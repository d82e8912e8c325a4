#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "fncalc/vvform.hpp"

namespace fncalc {

/// Graded derivation of degree k in canonical form L_Phi + I_Psi, with
/// Phi of degree k and Psi of degree k + 1.
class Derivation {
 public:
  Derivation(VVForm l_part, VVForm i_part);
  static Derivation zero(const Chart& chart, int degree);
  static Derivation lie(const VVForm& phi);
  static Derivation insertion(const VVForm& psi);
  /// The exterior derivative, L_Id.
  static Derivation exterior(const Chart& chart);

  int degree() const { return l_part_.degree(); }
  const Chart& chart() const { return l_part_.chart(); }
  const VVForm& l_part() const { return l_part_; }
  const VVForm& i_part() const { return i_part_; }
  bool is_zero() const { return l_part_.is_zero() && i_part_.is_zero(); }

  KForm apply(const KForm& sigma) const;

  Derivation operator+(const Derivation& o) const;
  Derivation operator-(const Derivation& o) const;
  Derivation operator-() const;
  friend Derivation operator*(const Scalar& f, const Derivation& a);

  friend bool operator==(const Derivation&, const Derivation&) = default;

 private:
  VVForm l_part_;
  VVForm i_part_;
};

/// A degree-k linear operator on forms given only by its action.
struct OpaqueDerivation {
  Chart chart;
  int degree;
  std::function<KForm(const KForm&)> eval;

  KForm operator()(const KForm& sigma) const { return eval(sigma); }
  static OpaqueDerivation from(const Derivation& d);
};

/// [P, Q] = PQ - (-1)^{|P||Q|} QP as an operator.
OpaqueDerivation commutator(const OpaqueDerivation& p, const OpaqueDerivation& q);

/// Recover (Phi, Psi) from an operator; the Leibniz rule is checked on a
/// sample of products and a wrong input raises NotDerivation.
Derivation decompose(const OpaqueDerivation& op, std::uint64_t sample_seed = 0x5eed);

/// True when both operators agree on every x_i and dx_i.
bool agree_on_generators(const OpaqueDerivation& a, const OpaqueDerivation& b);

/// I_Psi applied to a tangent-valued form, componentwise.
VVForm insert(const VVForm& psi, const VVForm& phi);

/// Frolicher-Nijenhuis bracket by bilinear extension over the coordinate frame.
VVForm fn_bracket(const VVForm& phi, const VVForm& psi);
/// Endomorphism formula for [Phi, Psi] evaluated on frame pairs.
VVForm fn_bracket_endo(const VVForm& phi, const VVForm& psi);
/// N_Phi(X,Y) = [PhiX,PhiY] + Phi^2[X,Y] - Phi[PhiX,Y] - Phi[X,PhiY].
VVForm nijenhuis(const VVForm& phi);

Derivation derivation_bracket(const Derivation& a, const Derivation& b);
/// Daleth D = [d, D].
Derivation daleth(const Derivation& d);
/// Contracting homotopy: daleth aleph + aleph daleth = Id.
Derivation aleph(const Derivation& d);

/// Value of a 2-vector-valued form on the frame pair (d/dx_a, d/dx_b).
VectorField frame_value(const VVForm& phi, int a, int b);

}  // namespace fncalc
