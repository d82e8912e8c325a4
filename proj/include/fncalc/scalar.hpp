#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fncalc {

using Rational = mpq_class;

/// Largest chart dimension the monomial encoding supports.
inline constexpr int kMaxVars = 8;

struct Monomial {
  std::array<std::uint16_t, kMaxVars> exp{};

  unsigned degree() const;
  bool divides(const Monomial& other) const;
  Monomial operator*(const Monomial& other) const;
  /// Exponent-wise difference; caller guarantees `other.divides(*this)`.
  Monomial operator/(const Monomial& other) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Graded lexicographic order: total degree first, then lex with x0 > x1 > ...
bool grlex_less(const Monomial& a, const Monomial& b);

struct Term {
  Monomial mono;
  Rational coef;
};

/// Sparse multivariate polynomial over Q. Terms are kept in strictly
/// decreasing graded-lex order with no zero coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(const Rational& c);
  explicit Polynomial(long c) : Polynomial(Rational(c)) {}

  static Polynomial variable(int i);
  /// Sorts and combines like terms; zero coefficients are dropped.
  static Polynomial from_terms(std::vector<Term> terms);
  static Polynomial monomial(const Monomial& m, const Rational& c);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Value of a constant polynomial (0 for the zero polynomial).
  Rational constant_value() const;
  const std::vector<Term>& terms() const { return terms_; }
  const Term& leading() const { return terms_.front(); }

  Polynomial operator-() const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(const Rational& c) const;
  Polynomial times_monomial(const Monomial& m) const;

  Polynomial partial(int i) const;
  Rational eval(std::span<const Rational> point) const;

  int degree_in(int var) const;
  unsigned total_degree() const;
  /// Highest variable index occurring, or -1 for constants.
  int max_var() const;
  /// Coefficients as a polynomial in `var`: result[k] multiplies var^k.
  std::vector<Polynomial> coefficients_in(int var) const;
  Monomial min_exponents() const;

  std::string to_string(std::span<const std::string> names = {}) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b);

 private:
  std::vector<Term> terms_;
};

/// Quotient a / b; throws if b does not divide a exactly.
Polynomial exact_divide(const Polynomial& a, const Polynomial& b);
/// Quotient a / b, or nothing when the division leaves a remainder.
std::optional<Polynomial> try_divide(const Polynomial& a, const Polynomial& b);
/// Monic greatest common divisor over Q (zero only if both inputs are zero).
Polynomial gcd(const Polynomial& a, const Polynomial& b);
/// Divide by the leading coefficient.
Polynomial make_monic(const Polynomial& p);

/// Rational function num/den over Q in the chart coordinates.
///
/// Kept in lowest terms with a monic denominator, so equal field elements
/// have identical representations and zero is exactly (0, 1).
class Scalar {
 public:
  Scalar() : den_(Rational(1)) {}
  Scalar(long c) : num_(c), den_(Rational(1)) {}  // NOLINT(google-explicit-constructor)
  Scalar(const Rational& c) : num_(c), den_(Rational(1)) {}  // NOLINT
  explicit Scalar(Polynomial p) : num_(std::move(p)), den_(Rational(1)) {}
  Scalar(Polynomial num, Polynomial den);

  static Scalar coordinate(int i) { return Scalar(Polynomial::variable(i)); }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const { return den_.is_constant(); }
  Rational constant_value() const { return num_.constant_value(); }

  Scalar operator-() const;
  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  Scalar inverse() const;
  Scalar partial(int i) const;
  Rational eval(std::span<const Rational> point) const;
  int max_var() const;

  std::string to_string(std::span<const std::string> names = {}) const;

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  struct Normalized {};
  Scalar(Polynomial num, Polynomial den, Normalized)
      : num_(std::move(num)), den_(std::move(den)) {}

  Polynomial num_;
  Polynomial den_;
};

Scalar pow(const Scalar& base, int exponent);

}  // namespace fncalc
