#include "fncalc/forms.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

#include "fncalc/error.hpp"

namespace fncalc {

Chart::Chart(std::vector<std::string> names) {
  if (names.empty()) throw PreconditionViolation("chart dimension must be at least 1");
  if (static_cast<int>(names.size()) > kMaxVars)
    throw PreconditionViolation("chart dimension exceeds " + std::to_string(kMaxVars));
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) throw PreconditionViolation("empty coordinate name");
    if (!seen.insert(n).second) throw PreconditionViolation("duplicate coordinate name '" + n + "'");
  }
  names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
}

Chart Chart::standard(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  return Chart(std::move(names));
}

int Chart::index_of(std::string_view name) const {
  for (int i = 0; i < dim(); ++i)
    if ((*names_)[static_cast<std::size_t>(i)] == name) return i;
  throw IndexError("unknown coordinate '" + std::string(name) + "'");
}

void require_same_chart(const Chart& a, const Chart& b) {
  if (!(a == b)) throw ChartMismatch();
}

// ---------------------------------------------------------------------------

VectorField::VectorField(Chart chart, std::vector<Scalar> components)
    : chart_(std::move(chart)), components_(std::move(components)) {
  if (static_cast<int>(components_.size()) != chart_.dim())
    throw DegreeMismatch("vector field component count differs from chart dimension");
}

VectorField VectorField::zero(const Chart& chart) {
  return VectorField(chart, std::vector<Scalar>(static_cast<std::size_t>(chart.dim())));
}

VectorField VectorField::coordinate(const Chart& chart, int i) {
  if (i < 0 || i >= chart.dim()) throw IndexError("coordinate index out of range");
  VectorField v = zero(chart);
  v.components_[static_cast<std::size_t>(i)] = Scalar(1);
  return v;
}

bool VectorField::is_zero() const {
  return std::all_of(components_.begin(), components_.end(), [](const Scalar& s) { return s.is_zero(); });
}

VectorField VectorField::operator+(const VectorField& o) const {
  require_same_chart(chart_, o.chart_);
  VectorField r = *this;
  for (std::size_t i = 0; i < components_.size(); ++i) r.components_[i] += o.components_[i];
  return r;
}

VectorField VectorField::operator-(const VectorField& o) const { return *this + (-o); }

VectorField VectorField::operator-() const {
  VectorField r = *this;
  for (auto& c : r.components_) c = -c;
  return r;
}

VectorField operator*(const Scalar& f, const VectorField& v) {
  VectorField r = v;
  for (auto& c : r.components_) c = f * c;
  return r;
}

Scalar VectorField::apply(const Scalar& f) const {
  Scalar out;
  for (int i = 0; i < dim(); ++i) {
    const Scalar& c = components_[static_cast<std::size_t>(i)];
    if (!c.is_zero()) out += c * f.partial(i);
  }
  return out;
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  require_same_chart(x.chart(), y.chart());
  std::vector<Scalar> out;
  out.reserve(static_cast<std::size_t>(x.dim()));
  for (int i = 0; i < x.dim(); ++i) out.push_back(x.apply(y[i]) - y.apply(x[i]));
  return VectorField(x.chart(), std::move(out));
}

// ---------------------------------------------------------------------------

IndexMask mask_of(std::span<const int> indices) {
  IndexMask m = 0;
  for (int i : indices) m |= IndexMask{1} << i;
  return m;
}

std::vector<int> indices_of(IndexMask mask) {
  std::vector<int> out;
  for (int i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1u) out.push_back(i);
  return out;
}

int popcount(IndexMask mask) { return std::popcount(mask); }

namespace {

// Elements of `mask` strictly greater than i.
int count_above(IndexMask mask, int i) { return std::popcount(mask >> (i + 1)); }
// Elements of `mask` strictly less than i.
int count_below(IndexMask mask, int i) { return std::popcount(mask & ((IndexMask{1} << i) - 1)); }

// Sign of dx_a ^ dx_b relative to dx_{a|b}, for disjoint a and b.
int wedge_sign(IndexMask a, IndexMask b) {
  int inversions = 0;
  for (IndexMask rest = b; rest != 0; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    inversions += count_above(a, j);
  }
  return (inversions & 1) ? -1 : 1;
}

Scalar determinant(std::vector<std::vector<Scalar>> m) {
  const std::size_t n = m.size();
  if (n == 0) return Scalar(1);
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  Scalar det;
  for (std::size_t col = 0; col < n; ++col) {
    if (m[0][col].is_zero()) continue;
    std::vector<std::vector<Scalar>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Scalar> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != col) row.push_back(m[r][c]);
      minor.push_back(std::move(row));
    }
    const Scalar term = m[0][col] * determinant(std::move(minor));
    det += (col % 2 == 0) ? term : -term;
  }
  return det;
}

}  // namespace

KForm::KForm(Chart chart, int degree) : chart_(std::move(chart)), degree_(degree) {}

KForm KForm::function(const Chart& chart, Scalar f) {
  KForm k(chart, 0);
  k.add_term(0, f);
  return k;
}

KForm KForm::differential(const Chart& chart, int i) {
  if (i < 0 || i >= chart.dim()) throw IndexError("coordinate index out of range");
  KForm k(chart, 1);
  k.add_term(IndexMask{1} << i, Scalar(1));
  return k;
}

KForm KForm::from_terms(const Chart& chart, int degree,
                        const std::vector<std::pair<std::vector<int>, Scalar>>& terms) {
  KForm k(chart, degree);
  for (const auto& [idx, coef] : terms) {
    if (static_cast<int>(idx.size()) != degree) throw DegreeMismatch("index tuple length differs from degree");
    std::vector<int> sorted = idx;
    for (int i : sorted)
      if (i < 0 || i >= chart.dim()) throw IndexError("form index out of range");
    // Bubble sort to count the permutation parity.
    int swaps = 0;
    bool repeated = false;
    for (std::size_t a = 0; a < sorted.size(); ++a)
      for (std::size_t b = 0; b + 1 < sorted.size() - a; ++b) {
        if (sorted[b] == sorted[b + 1]) repeated = true;
        if (sorted[b] > sorted[b + 1]) {
          std::swap(sorted[b], sorted[b + 1]);
          ++swaps;
        }
      }
    for (std::size_t a = 0; a + 1 < sorted.size(); ++a)
      if (sorted[a] == sorted[a + 1]) repeated = true;
    if (repeated) continue;
    k.add_term(mask_of(sorted), (swaps & 1) ? -coef : coef);
  }
  return k;
}

Scalar KForm::coefficient(IndexMask mask) const {
  auto it = terms_.find(mask);
  return it == terms_.end() ? Scalar() : it->second;
}

void KForm::add_term(IndexMask mask, const Scalar& c) {
  if (c.is_zero()) return;
  if (degree_ < 0 || degree_ > chart_.dim()) return;
  if (popcount(mask) != degree_) throw DegreeMismatch("term degree differs from form degree");
  auto [it, inserted] = terms_.try_emplace(mask, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

KForm KForm::operator+(const KForm& o) const {
  KForm r = *this;
  r += o;
  return r;
}

KForm& KForm::operator+=(const KForm& o) {
  require_same_chart(chart_, o.chart_);
  if (degree_ != o.degree_) throw DegreeMismatch("adding forms of different degree");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

KForm& KForm::operator-=(const KForm& o) { return *this += -o; }

KForm KForm::operator-(const KForm& o) const { return *this + (-o); }

KForm KForm::operator-() const {
  KForm r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

KForm operator*(const Scalar& f, const KForm& a) {
  KForm r(a.chart_, a.degree_);
  if (f.is_zero()) return r;
  for (const auto& [m, c] : a.terms_) r.add_term(m, f * c);
  return r;
}

KForm KForm::partial(int i) const {
  KForm r(chart_, degree_);
  for (const auto& [m, c] : terms_) r.add_term(m, c.partial(i));
  return r;
}

Scalar KForm::evaluate(std::span<const VectorField> vectors) const {
  if (static_cast<int>(vectors.size()) != degree_) throw DegreeMismatch("form arity mismatch");
  for (const auto& v : vectors) require_same_chart(chart_, v.chart());
  Scalar out;
  for (const auto& [m, c] : terms_) {
    const auto idx = indices_of(m);
    std::vector<std::vector<Scalar>> mat(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t col = 0; col < vectors.size(); ++col) mat[r].push_back(vectors[col][idx[r]]);
    out += c * determinant(std::move(mat));
  }
  return out;
}

std::string KForm::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string(chart_.names()) << ")";
    for (int i : indices_of(m)) os << " d" << chart_.names()[static_cast<std::size_t>(i)];
  }
  return os.str();
}

KForm wedge(const KForm& a, const KForm& b) {
  require_same_chart(a.chart(), b.chart());
  KForm r(a.chart(), a.degree() + b.degree());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      if (ma & mb) continue;
      const Scalar c = ca * cb;
      r.add_term(ma | mb, wedge_sign(ma, mb) > 0 ? c : -c);
    }
  return r;
}

KForm d(const KForm& a) {
  KForm r(a.chart(), a.degree() + 1);
  const int n = a.chart().dim();
  for (const auto& [m, c] : a.terms())
    for (int j = 0; j < n; ++j) {
      if (m & (IndexMask{1} << j)) continue;
      const Scalar dc = c.partial(j);
      if (dc.is_zero()) continue;
      r.add_term(m | (IndexMask{1} << j), (count_below(m, j) & 1) ? -dc : dc);
    }
  return r;
}

KForm contract(const VectorField& x, const KForm& a) {
  require_same_chart(x.chart(), a.chart());
  KForm r(a.chart(), a.degree() - 1);
  if (a.degree() <= 0) return r;
  for (const auto& [m, c] : a.terms()) {
    int position = 0;
    for (IndexMask rest = m; rest != 0; rest &= rest - 1, ++position) {
      const int i = std::countr_zero(rest);
      if (x[i].is_zero()) continue;
      const Scalar t = x[i] * c;
      r.add_term(m & ~(IndexMask{1} << i), (position & 1) ? -t : t);
    }
  }
  return r;
}

KForm lie_derivative(const VectorField& x, const KForm& a) {
  require_same_chart(x.chart(), a.chart());
  if (a.degree() == 0) return KForm::function(a.chart(), x.apply(a.function_value()));
  return d(contract(x, a)) + contract(x, d(a));
}

}  // namespace fncalc
