#pragma once

#include <span>
#include <string>
#include <vector>

#include "fncalc/forms.hpp"
#include "fncalc/matrix.hpp"

namespace fncalc {

/// Tangent-valued k-form sum_i component(i) (x) d/dx_i.
///
/// Degree 1 doubles as an endomorphism of TM; degree 0 is a vector field and
/// negative degrees and degrees above n only ever hold zero.
class VVForm {
 public:
  VVForm(Chart chart, int degree);
  VVForm(Chart chart, int degree, std::vector<KForm> components);
  static VVForm identity(const Chart& chart);
  /// Entry (i, j) is the coefficient of dx_j in component i.
  static VVForm from_endo_matrix(const Chart& chart, const Matrix& m);
  /// alpha (x) X.
  static VVForm tensor(const KForm& alpha, const VectorField& x);
  static VVForm from_vector_field(const VectorField& x);

  const Chart& chart() const { return chart_; }
  int degree() const { return degree_; }
  int dim() const { return chart_.dim(); }
  const KForm& component(int i) const { return components_[static_cast<std::size_t>(i)]; }
  const std::vector<KForm>& components() const { return components_; }
  bool is_zero() const;

  Matrix as_endo_matrix() const;
  VectorField as_vector_field() const;

  VVForm operator+(const VVForm& o) const;
  VVForm operator-(const VVForm& o) const;
  VVForm operator-() const;
  VVForm& operator+=(const VVForm& o);
  VVForm& operator-=(const VVForm& o);
  friend VVForm operator*(const Scalar& f, const VVForm& a);

  std::string to_string() const;

  friend bool operator==(const VVForm& a, const VVForm& b) {
    return a.degree_ == b.degree_ && a.chart_ == b.chart_ && a.components_ == b.components_;
  }

 private:
  Chart chart_;
  int degree_;
  std::vector<KForm> components_;
};

/// Phi(V_1, ..., V_k).
VectorField apply_vvf(const VVForm& phi, std::span<const VectorField> vectors);
/// Pullback action (Phi sigma)(V_1..V_p) = sigma(Phi V_1, ..., Phi V_p).
KForm act_on_form(const VVForm& phi, const KForm& sigma);
/// Postcomposition Phi o Psi for an endomorphism Phi.
VVForm compose(const VVForm& phi, const VVForm& psi);
/// Insertion I_Psi applied componentwise to the endomorphism Phi.
VVForm i_product(const VVForm& psi, const VVForm& phi);

/// Insertion operator I_Phi sigma = sum_i Phi^i ^ i_{d/dx_i} sigma.
KForm apply_I(const VVForm& phi, const KForm& sigma);
/// Lie derivative L_Phi sigma = sum_i Phi^i ^ L_{d/dx_i} sigma + (-1)^k dPhi^i ^ i_{d/dx_i} sigma.
KForm apply_L(const VVForm& phi, const KForm& sigma);

}  // namespace fncalc
