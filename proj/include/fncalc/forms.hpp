#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fncalc/scalar.hpp"

namespace fncalc {

/// A single coordinate chart: dimension and coordinate names.
///
/// Charts compare equal when their coordinate names agree; copies share the
/// name table.
class Chart {
 public:
  explicit Chart(std::vector<std::string> names);
  /// Chart with coordinates x0, x1, ... x{n-1}.
  static Chart standard(int n);

  int dim() const { return static_cast<int>(names_->size()); }
  const std::vector<std::string>& names() const { return *names_; }
  /// Index of a named coordinate; throws IndexError if absent.
  int index_of(std::string_view name) const;

  friend bool operator==(const Chart& a, const Chart& b) {
    return a.names_ == b.names_ || *a.names_ == *b.names_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> names_;
};

void require_same_chart(const Chart& a, const Chart& b);

/// Vector field sum_i components[i] d/dx_i.
class VectorField {
 public:
  VectorField(Chart chart, std::vector<Scalar> components);
  static VectorField zero(const Chart& chart);
  static VectorField coordinate(const Chart& chart, int i);

  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim(); }
  const Scalar& operator[](int i) const { return components_[static_cast<std::size_t>(i)]; }
  const std::vector<Scalar>& components() const { return components_; }
  bool is_zero() const;

  VectorField operator+(const VectorField& o) const;
  VectorField operator-(const VectorField& o) const;
  VectorField operator-() const;
  friend VectorField operator*(const Scalar& f, const VectorField& v);

  /// Directional derivative X(f).
  Scalar apply(const Scalar& f) const;

  friend bool operator==(const VectorField&, const VectorField&) = default;

 private:
  Chart chart_;
  std::vector<Scalar> components_;
};

VectorField lie_bracket(const VectorField& x, const VectorField& y);

/// Strictly increasing index tuple encoded as a bit set.
using IndexMask = std::uint32_t;

IndexMask mask_of(std::span<const int> indices);
std::vector<int> indices_of(IndexMask mask);
int popcount(IndexMask mask);

/// Alternating k-form sum_I c_I dx_I with rational-function coefficients.
///
/// Any integer degree is accepted; outside [0, n] the form is always zero.
class KForm {
 public:
  KForm(Chart chart, int degree);
  static KForm function(const Chart& chart, Scalar f);
  static KForm differential(const Chart& chart, int i);
  /// Builds from arbitrary index tuples; reorders with sign, drops repeats.
  static KForm from_terms(const Chart& chart, int degree,
                          const std::vector<std::pair<std::vector<int>, Scalar>>& terms);

  const Chart& chart() const { return chart_; }
  int degree() const { return degree_; }
  const std::map<IndexMask, Scalar>& terms() const { return terms_; }
  Scalar coefficient(IndexMask mask) const;
  /// Coefficient of the empty tuple; meaningful for 0-forms.
  Scalar function_value() const { return coefficient(0); }
  bool is_zero() const { return terms_.empty(); }

  void add_term(IndexMask mask, const Scalar& c);

  KForm operator+(const KForm& o) const;
  KForm operator-(const KForm& o) const;
  KForm operator-() const;
  KForm& operator+=(const KForm& o);
  KForm& operator-=(const KForm& o);
  friend KForm operator*(const Scalar& f, const KForm& a);

  /// Lie derivative along d/dx_i: coefficientwise partial derivative.
  KForm partial(int i) const;

  /// sigma(V_1, ..., V_k) via the determinant expansion.
  Scalar evaluate(std::span<const VectorField> vectors) const;

  std::string to_string() const;

  friend bool operator==(const KForm& a, const KForm& b) {
    return a.degree_ == b.degree_ && a.chart_ == b.chart_ && a.terms_ == b.terms_;
  }

 private:
  Chart chart_;
  int degree_;
  std::map<IndexMask, Scalar> terms_;
};

KForm wedge(const KForm& a, const KForm& b);
KForm d(const KForm& a);
KForm contract(const VectorField& x, const KForm& a);
KForm lie_derivative(const VectorField& x, const KForm& a);

}  // namespace fncalc
