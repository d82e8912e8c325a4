#include "fncalc/scalar.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <utility>

#include "fncalc/error.hpp"

namespace fncalc {

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (auto e : exp) d += e;
  return d;
}

bool Monomial::divides(const Monomial& other) const {
  for (int i = 0; i < kMaxVars; ++i)
    if (exp[i] > other.exp[i]) return false;
  return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i) r.exp[i] = static_cast<std::uint16_t>(exp[i] + other.exp[i]);
  return r;
}

Monomial Monomial::operator/(const Monomial& other) const {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i) r.exp[i] = static_cast<std::uint16_t>(exp[i] - other.exp[i]);
  return r;
}

bool grlex_less(const Monomial& a, const Monomial& b) {
  const unsigned da = a.degree();
  const unsigned db = b.degree();
  if (da != db) return da < db;
  for (int i = 0; i < kMaxVars; ++i)
    if (a.exp[i] != b.exp[i]) return a.exp[i] < b.exp[i];
  return false;
}

namespace {

bool grlex_greater(const Term& a, const Term& b) { return grlex_less(b.mono, a.mono); }

}  // namespace

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(const Rational& c) {
  if (c != 0) terms_.push_back({Monomial{}, c});
}

Polynomial Polynomial::variable(int i) {
  if (i < 0 || i >= kMaxVars) throw IndexError("coordinate index out of range");
  Monomial m;
  m.exp[i] = 1;
  return monomial(m, Rational(1));
}

Polynomial Polynomial::monomial(const Monomial& m, const Rational& c) {
  Polynomial p;
  if (c != 0) p.terms_.push_back({m, c});
  return p;
}

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), grlex_greater);
  Polynomial p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coef += t.coef;
    } else {
      if (!p.terms_.empty() && p.terms_.back().coef == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().coef == 0) p.terms_.pop_back();
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.degree() == 0);
}

Rational Polynomial::constant_value() const {
  if (terms_.empty()) return Rational(0);
  const Term& last = terms_.back();
  return last.mono.degree() == 0 ? last.coef : Rational(0);
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r;
  r.terms_.reserve(terms_.size() + o.terms_.size());
  auto i = terms_.begin();
  auto j = o.terms_.begin();
  while (i != terms_.end() && j != o.terms_.end()) {
    if (i->mono == j->mono) {
      Rational c = i->coef + j->coef;
      if (c != 0) r.terms_.push_back({i->mono, std::move(c)});
      ++i;
      ++j;
    } else if (grlex_less(j->mono, i->mono)) {
      r.terms_.push_back(*i++);
    } else {
      r.terms_.push_back(*j++);
    }
  }
  r.terms_.insert(r.terms_.end(), i, terms_.end());
  r.terms_.insert(r.terms_.end(), j, o.terms_.end());
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return {};
  if (o.terms_.size() == 1 && o.terms_[0].mono.degree() == 0) return scaled(o.terms_[0].coef);
  if (terms_.size() == 1 && terms_[0].mono.degree() == 0) return o.scaled(terms_[0].coef);
  std::vector<Term> prod;
  prod.reserve(terms_.size() * o.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) prod.push_back({a.mono * b.mono, a.coef * b.coef});
  return from_terms(std::move(prod));
}

Polynomial Polynomial::scaled(const Rational& c) const {
  if (c == 0) return {};
  Polynomial r = *this;
  for (auto& t : r.terms_) t.coef *= c;
  return r;
}

Polynomial Polynomial::times_monomial(const Monomial& m) const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.mono = t.mono * m;
  return r;
}

Polynomial Polynomial::partial(int i) const {
  if (i < 0 || i >= kMaxVars) throw IndexError("coordinate index out of range");
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.mono.exp[i] == 0) continue;
    Term d{t.mono, t.coef * t.mono.exp[i]};
    d.mono.exp[i] -= 1;
    out.push_back(std::move(d));
  }
  return from_terms(std::move(out));
}

Rational Polynomial::eval(std::span<const Rational> point) const {
  const int needed = max_var() + 1;
  if (static_cast<int>(point.size()) < needed) throw IndexError("evaluation point has too few coordinates");
  std::vector<Rational> at(point.begin(), point.begin() + needed);
  for (auto& v : at) v.canonicalize();
  Rational sum = 0;
  for (const auto& t : terms_) {
    Rational v = t.coef;
    for (int i = 0; i < needed; ++i) {
      for (unsigned e = 0; e < t.mono.exp[i]; ++e) v *= at[i];
    }
    sum += v;
  }
  return sum;
}

int Polynomial::degree_in(int var) const {
  int d = 0;
  for (const auto& t : terms_) d = std::max<int>(d, t.mono.exp[var]);
  return d;
}

unsigned Polynomial::total_degree() const { return terms_.empty() ? 0 : terms_.front().mono.degree(); }

int Polynomial::max_var() const {
  int v = -1;
  for (const auto& t : terms_)
    for (int i = kMaxVars - 1; i > v; --i)
      if (t.mono.exp[i] != 0) {
        v = i;
        break;
      }
  return v;
}

std::vector<Polynomial> Polynomial::coefficients_in(int var) const {
  std::vector<std::vector<Term>> buckets(degree_in(var) + 1);
  for (const auto& t : terms_) {
    Term c = t;
    const auto e = c.mono.exp[var];
    c.mono.exp[var] = 0;
    buckets[e].push_back(std::move(c));
  }
  std::vector<Polynomial> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
  return out;
}

Monomial Polynomial::min_exponents() const {
  if (terms_.empty()) return {};
  Monomial m = terms_.front().mono;
  for (const auto& t : terms_)
    for (int i = 0; i < kMaxVars; ++i) m.exp[i] = std::min(m.exp[i], t.mono.exp[i]);
  return m;
}

std::string Polynomial::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coef;
    const bool negative = c < 0;
    if (negative) c = -c;
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    const bool has_vars = t.mono.degree() > 0;
    if (!has_vars || c != 1) {
      os << c.get_str();
      if (has_vars) os << "*";
    }
    bool first_var = true;
    for (int i = 0; i < kMaxVars; ++i) {
      if (t.mono.exp[i] == 0) continue;
      if (!first_var) os << "*";
      first_var = false;
      if (i < static_cast<int>(names.size()))
        os << names[i];
      else
        os << "x" << i;
      if (t.mono.exp[i] > 1) os << "^" << t.mono.exp[i];
    }
  }
  return os.str();
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coef != b.terms_[i].coef) return false;
  return true;
}

std::optional<Polynomial> try_divide(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw ZeroDenominator();
  if (b.is_constant()) return a.scaled(1 / b.constant_value());
  for (int v = 0; v < kMaxVars; ++v)
    if (b.degree_in(v) > a.degree_in(v) && !a.is_zero()) return std::nullopt;
  const Term& lb = b.leading();
  std::vector<Term> quotient;
  Polynomial r = a;
  while (!r.is_zero()) {
    const Term& lr = r.leading();
    if (!lb.mono.divides(lr.mono)) return std::nullopt;
    Term q{lr.mono / lb.mono, lr.coef / lb.coef};
    r = r - b.times_monomial(q.mono).scaled(q.coef);
    quotient.push_back(std::move(q));
  }
  return Polynomial::from_terms(std::move(quotient));
}

Polynomial exact_divide(const Polynomial& a, const Polynomial& b) {
  auto q = try_divide(a, b);
  if (!q) throw Error("polynomial division is not exact");
  return *std::move(q);
}

Polynomial make_monic(const Polynomial& p) {
  if (p.is_zero()) return p;
  return p.scaled(1 / p.leading().coef);
}

namespace {

Polynomial gcd_rec(const Polynomial& a, const Polynomial& b);

// gcd of the coefficients of p viewed as a polynomial in var.
Polynomial content_in(const Polynomial& p, int var) {
  Polynomial g;
  for (const auto& c : p.coefficients_in(var)) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? make_monic(c) : gcd_rec(g, c);
    if (g.is_constant()) break;
  }
  return g;
}

// Scale to coprime integer coefficients with a positive leading term.
Polynomial integer_primitive(const Polynomial& p) {
  if (p.is_zero()) return p;
  mpz_class num_gcd = 0;
  mpz_class den_lcm = 1;
  for (const auto& t : p.terms()) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.coef.get_num_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coef.get_den_mpz_t());
  }
  Rational scale(den_lcm, num_gcd);
  scale.canonicalize();
  if (p.leading().coef < 0) scale = -scale;
  return p.scaled(scale);
}

Polynomial primitive_part(const Polynomial& p, int var) {
  const Polynomial c = content_in(p, var);
  return integer_primitive(c.is_constant() ? p : exact_divide(p, c));
}

Polynomial pseudo_remainder(Polynomial a, const Polynomial& b, int var) {
  const int db = b.degree_in(var);
  const auto bc = b.coefficients_in(var);
  const Polynomial& lb = bc.back();
  while (!a.is_zero()) {
    const int da = a.degree_in(var);
    if (da < db) break;
    const Polynomial la = a.coefficients_in(var).back();
    Monomial shift;
    shift.exp[var] = static_cast<std::uint16_t>(da - db);
    a = a * lb - (la * b).times_monomial(shift);
  }
  return a;
}

mpz_class max_norm(const Polynomial& p) {
  mpz_class m = 0;
  for (const auto& t : p.terms()) {
    mpz_class c = abs(t.coef.get_num());
    if (c > m) m = c;
  }
  return m;
}

Polynomial substitute(const Polynomial& p, int var, const mpz_class& value) {
  std::vector<Term> out;
  out.reserve(p.terms().size());
  for (const auto& t : p.terms()) {
    mpz_class power;
    mpz_pow_ui(power.get_mpz_t(), value.get_mpz_t(), t.mono.exp[var]);
    Term nt{t.mono, t.coef * Rational(power)};
    nt.mono.exp[var] = 0;
    out.push_back(std::move(nt));
  }
  return Polynomial::from_terms(std::move(out));
}

// Recover a polynomial in `var` from its image at var = xi using balanced
// xi-adic digits of the integer coefficients.
Polynomial lift(Polynomial image, int var, const mpz_class& xi) {
  std::vector<Term> out;
  const mpz_class half = xi / 2;
  for (std::uint16_t power = 0; !image.is_zero(); ++power) {
    std::vector<Term> digit;
    for (const auto& t : image.terms()) {
      mpz_class r;
      mpz_fdiv_r(r.get_mpz_t(), t.coef.get_num_mpz_t(), xi.get_mpz_t());
      if (r > half) r -= xi;
      if (r != 0) digit.push_back({t.mono, Rational(r)});
    }
    const Polynomial g = Polynomial::from_terms(digit);
    image = (image - g).scaled(Rational(1) / Rational(xi));
    for (auto& t : digit) {
      t.mono.exp[var] = power;
      out.push_back(std::move(t));
    }
    if (power > 2000) return {};
  }
  return Polynomial::from_terms(std::move(out));
}

// Heuristic gcd of integer polynomials by evaluation and xi-adic lifting.
// Returns nothing when the heuristic gives up.
std::optional<Polynomial> gcd_heuristic(const Polynomial& a_in, const Polynomial& b_in, int depth) {
  if (a_in.is_zero()) return b_in;
  if (b_in.is_zero()) return a_in;
  if (a_in.is_constant() || b_in.is_constant()) {
    mpz_class g = 0;
    for (const auto* p : {&a_in, &b_in})
      for (const auto& t : p->terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coef.get_num_mpz_t());
    return Polynomial(Rational(g));
  }
  if (depth > 12) return std::nullopt;
  mpz_class content = 0;
  for (const auto* p : {&a_in, &b_in})
    for (const auto& t : p->terms()) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), t.coef.get_num_mpz_t());
  const Polynomial a = integer_primitive(a_in);
  const Polynomial b = integer_primitive(b_in);
  const int var = std::max(a.max_var(), b.max_var());
  mpz_class xi = 2 * std::min(max_norm(a), max_norm(b)) + 29;
  for (int attempt = 0; attempt < 6; ++attempt) {
    const auto image = gcd_heuristic(substitute(a, var, xi), substitute(b, var, xi), depth + 1);
    if (image) {
      Polynomial candidate = integer_primitive(lift(*image, var, xi));
      if (!candidate.is_zero() && try_divide(a, candidate) && try_divide(b, candidate))
        return candidate.scaled(Rational(content));
    }
    xi = xi * 73794 / 27011;
  }
  return std::nullopt;
}

Polynomial gcd_rec(const Polynomial& a_in, const Polynomial& b_in) {
  if (a_in.is_zero()) return make_monic(b_in);
  if (b_in.is_zero()) return make_monic(a_in);
  if (a_in.is_constant() || b_in.is_constant()) return Polynomial(1);
  {
    const Polynomial ia = integer_primitive(a_in);
    const Polynomial ib = integer_primitive(b_in);
    if (auto g = gcd_heuristic(ia, ib, 0)) return make_monic(*g);
  }

  // Split off monomial content first.
  const Monomial ma = a_in.min_exponents();
  const Monomial mb = b_in.min_exponents();
  Monomial m;
  for (int i = 0; i < kMaxVars; ++i) m.exp[i] = std::min(ma.exp[i], mb.exp[i]);
  const Polynomial a = exact_divide(a_in, Polynomial::monomial(ma, 1));
  const Polynomial b = exact_divide(b_in, Polynomial::monomial(mb, 1));
  const Polynomial mono = Polynomial::monomial(m, 1);
  if (a.is_constant() || b.is_constant()) return mono;

  // A variable missing from one side can only enter the gcd through the
  // content of the other side.
  for (int v = 0; v < kMaxVars; ++v) {
    const int da = a.degree_in(v);
    const int db = b.degree_in(v);
    if (da > 0 && db == 0) return make_monic(mono * gcd_rec(content_in(a, v), b));
    if (db > 0 && da == 0) return make_monic(mono * gcd_rec(a, content_in(b, v)));
  }
  int var = -1;
  for (int v = 0; v < kMaxVars; ++v) {
    const int dv = std::max(a.degree_in(v), b.degree_in(v));
    if (dv > 0 && (var < 0 || dv < std::max(a.degree_in(var), b.degree_in(var)))) var = v;
  }
  const Polynomial ca = content_in(a, var);
  const Polynomial cb = content_in(b, var);
  const Polynomial content_gcd = gcd_rec(ca, cb);
  Polynomial p = integer_primitive(ca.is_constant() ? a : exact_divide(a, ca));
  Polynomial q = integer_primitive(cb.is_constant() ? b : exact_divide(b, cb));
  if (p.degree_in(var) < q.degree_in(var)) std::swap(p, q);
  Polynomial g;
  while (true) {
    Polynomial r = pseudo_remainder(p, q, var);
    if (r.is_zero()) {
      g = q;
      break;
    }
    if (r.degree_in(var) == 0) {
      g = Polynomial(1);
      break;
    }
    p = std::move(q);
    q = primitive_part(r, var);
  }
  return make_monic(mono * content_gcd * primitive_part(g, var));
}

}  // namespace

Polynomial gcd(const Polynomial& a, const Polynomial& b) { return make_monic(gcd_rec(a, b)); }

// ---------------------------------------------------------------------------
// Scalar

Scalar::Scalar(Polynomial num, Polynomial den) {
  if (den.is_zero()) throw ZeroDenominator();
  if (num.is_zero()) {
    den_ = Polynomial(1);
    return;
  }
  if (den.is_constant()) {
    num_ = num.scaled(1 / den.constant_value());
    den_ = Polynomial(1);
    return;
  }
  const Polynomial g = gcd(num, den);
  if (!g.is_constant()) {
    num = exact_divide(num, g);
    den = exact_divide(den, g);
  }
  const Rational lc = den.leading().coef;
  if (den.is_constant()) {
    num_ = num.scaled(1 / lc);
    den_ = Polynomial(1);
  } else {
    num_ = num.scaled(1 / lc);
    den_ = den.scaled(1 / lc);
  }
}

Scalar Scalar::operator-() const { return Scalar(-num_, den_, Normalized{}); }

Scalar Scalar::operator+(const Scalar& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  if (is_polynomial() && o.is_polynomial()) return Scalar(num_ + o.num_);
  if (den_ == o.den_) return Scalar(num_ + o.num_, den_);
  if (o.is_polynomial()) return Scalar(num_ + o.num_ * den_, den_);
  if (is_polynomial()) return Scalar(num_ * o.den_ + o.num_, o.den_);
  return Scalar(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
  if (is_zero() || o.is_zero()) return {};
  if (is_polynomial() && o.is_polynomial()) return Scalar(num_ * o.num_);
  return Scalar(num_ * o.num_, den_ * o.den_);
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw ZeroDenominator();
  return Scalar(den_, num_);
}

Scalar Scalar::operator/(const Scalar& o) const {
  if (o.is_zero()) throw ZeroDenominator();
  if (is_zero()) return {};
  if (o.is_constant()) return Scalar(num_.scaled(1 / o.constant_value()), den_, Normalized{});
  return Scalar(num_ * o.den_, den_ * o.num_);
}

Scalar Scalar::partial(int i) const {
  if (i < 0 || i >= kMaxVars) throw IndexError("coordinate index out of range");
  if (is_polynomial()) return Scalar(num_.partial(i));
  // (n/d)' = (n' d - n d') / d^2
  return Scalar(num_.partial(i) * den_ - num_ * den_.partial(i), den_ * den_);
}

Rational Scalar::eval(std::span<const Rational> point) const {
  const Rational d = den_.eval(point);
  if (d == 0) throw PoleError();
  return num_.eval(point) / d;
}

int Scalar::max_var() const { return std::max(num_.max_var(), den_.max_var()); }

std::string Scalar::to_string(std::span<const std::string> names) const {
  if (is_polynomial()) return num_.to_string(names);
  const auto wrap = [&](const Polynomial& p) {
    std::string s = p.to_string(names);
    return p.terms().size() > 1 ? "(" + s + ")" : s;
  };
  return wrap(num_) + "/" + wrap(den_);
}

Scalar pow(const Scalar& base, int exponent) {
  if (exponent < 0) return pow(base.inverse(), -exponent);
  Scalar result(1);
  Scalar b = base;
  while (exponent > 0) {
    if (exponent & 1) result *= b;
    exponent >>= 1;
    if (exponent) b *= b;
  }
  return result;
}

}  // namespace fncalc
