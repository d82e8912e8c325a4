#include "fncalc/vvform.hpp"

#include <algorithm>
#include <sstream>

#include "fncalc/error.hpp"

namespace fncalc {

namespace {

std::vector<KForm> zero_components(const Chart& chart, int degree) {
  return std::vector<KForm>(static_cast<std::size_t>(chart.dim()), KForm(chart, degree));
}

void require_degree(const VVForm& phi, int degree, const char* what) {
  if (phi.degree() != degree) throw DegreeMismatch(std::string(what) + " requires degree " + std::to_string(degree));
}

}  // namespace

VVForm::VVForm(Chart chart, int degree)
    : chart_(chart), degree_(degree), components_(zero_components(chart, degree)) {}

VVForm::VVForm(Chart chart, int degree, std::vector<KForm> components)
    : chart_(std::move(chart)), degree_(degree), components_(std::move(components)) {
  if (static_cast<int>(components_.size()) != chart_.dim())
    throw DegreeMismatch("vector-valued form needs one component per coordinate");
  for (const auto& c : components_) {
    require_same_chart(chart_, c.chart());
    if (c.degree() != degree_) throw DegreeMismatch("component degree differs from form degree");
  }
}

VVForm VVForm::identity(const Chart& chart) {
  std::vector<KForm> comps;
  for (int i = 0; i < chart.dim(); ++i) comps.push_back(KForm::differential(chart, i));
  return VVForm(chart, 1, std::move(comps));
}

VVForm VVForm::from_endo_matrix(const Chart& chart, const Matrix& m) {
  if (m.rows() != chart.dim() || m.cols() != chart.dim()) throw DegreeMismatch("endomorphism matrix has wrong shape");
  VVForm out(chart, 1);
  for (int i = 0; i < chart.dim(); ++i)
    for (int j = 0; j < chart.dim(); ++j) out.components_[static_cast<std::size_t>(i)].add_term(IndexMask{1} << j, m(i, j));
  return out;
}

VVForm VVForm::tensor(const KForm& alpha, const VectorField& x) {
  require_same_chart(alpha.chart(), x.chart());
  std::vector<KForm> comps;
  for (int i = 0; i < x.dim(); ++i) comps.push_back(x[i] * alpha);
  return VVForm(alpha.chart(), alpha.degree(), std::move(comps));
}

VVForm VVForm::from_vector_field(const VectorField& x) {
  return tensor(KForm::function(x.chart(), Scalar(1)), x);
}

bool VVForm::is_zero() const {
  return std::all_of(components_.begin(), components_.end(), [](const KForm& k) { return k.is_zero(); });
}

Matrix VVForm::as_endo_matrix() const {
  require_degree(*this, 1, "endomorphism matrix");
  Matrix m(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) m(i, j) = component(i).coefficient(IndexMask{1} << j);
  return m;
}

VectorField VVForm::as_vector_field() const {
  require_degree(*this, 0, "vector field view");
  std::vector<Scalar> comps;
  for (const auto& c : components_) comps.push_back(c.function_value());
  return VectorField(chart_, std::move(comps));
}

VVForm VVForm::operator+(const VVForm& o) const {
  VVForm r = *this;
  r += o;
  return r;
}

VVForm VVForm::operator-(const VVForm& o) const {
  VVForm r = *this;
  r -= o;
  return r;
}

VVForm VVForm::operator-() const {
  VVForm r = *this;
  for (auto& c : r.components_) c = -c;
  return r;
}

VVForm& VVForm::operator+=(const VVForm& o) {
  require_same_chart(chart_, o.chart_);
  if (degree_ != o.degree_) throw DegreeMismatch("adding vector-valued forms of different degree");
  for (std::size_t i = 0; i < components_.size(); ++i) components_[i] += o.components_[i];
  return *this;
}

VVForm& VVForm::operator-=(const VVForm& o) {
  require_same_chart(chart_, o.chart_);
  if (degree_ != o.degree_) throw DegreeMismatch("subtracting vector-valued forms of different degree");
  for (std::size_t i = 0; i < components_.size(); ++i) components_[i] -= o.components_[i];
  return *this;
}

VVForm operator*(const Scalar& f, const VVForm& a) {
  VVForm r = a;
  for (auto& c : r.components_) c = f * c;
  return r;
}

std::string VVForm::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < dim(); ++i) {
    if (component(i).is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "[" << component(i).to_string() << "] d/d" << chart_.names()[static_cast<std::size_t>(i)];
  }
  return first ? "0" : os.str();
}

VectorField apply_vvf(const VVForm& phi, std::span<const VectorField> vectors) {
  std::vector<Scalar> comps;
  for (int i = 0; i < phi.dim(); ++i) comps.push_back(phi.component(i).evaluate(vectors));
  return VectorField(phi.chart(), std::move(comps));
}

KForm act_on_form(const VVForm& phi, const KForm& sigma) {
  require_degree(phi, 1, "form action");
  require_same_chart(phi.chart(), sigma.chart());
  if (sigma.degree() <= 0) return sigma;
  KForm out(sigma.chart(), sigma.degree());
  for (const auto& [mask, coef] : sigma.terms()) {
    KForm term = KForm::function(sigma.chart(), coef);
    for (int i : indices_of(mask)) term = wedge(term, phi.component(i));
    out += term;
  }
  return out;
}

VVForm compose(const VVForm& phi, const VVForm& psi) {
  require_degree(phi, 1, "composition");
  require_same_chart(phi.chart(), psi.chart());
  const Matrix m = phi.as_endo_matrix();
  std::vector<KForm> comps;
  for (int i = 0; i < phi.dim(); ++i) {
    KForm c(psi.chart(), psi.degree());
    for (int j = 0; j < phi.dim(); ++j)
      if (!m(i, j).is_zero()) c += m(i, j) * psi.component(j);
    comps.push_back(std::move(c));
  }
  return VVForm(psi.chart(), psi.degree(), std::move(comps));
}

VVForm i_product(const VVForm& psi, const VVForm& phi) {
  require_degree(phi, 1, "insertion product");
  require_same_chart(phi.chart(), psi.chart());
  std::vector<KForm> comps;
  for (const auto& c : phi.components()) comps.push_back(apply_I(psi, c));
  return VVForm(phi.chart(), psi.degree(), std::move(comps));
}

KForm apply_I(const VVForm& phi, const KForm& sigma) {
  require_same_chart(phi.chart(), sigma.chart());
  const int degree = sigma.degree() + phi.degree() - 1;
  KForm out(sigma.chart(), degree);
  if (sigma.degree() == 0 || sigma.is_zero()) return out;
  for (int i = 0; i < phi.dim(); ++i) {
    if (phi.component(i).is_zero()) continue;
    const KForm inner = contract(VectorField::coordinate(sigma.chart(), i), sigma);
    if (!inner.is_zero()) out += wedge(phi.component(i), inner);
  }
  return out;
}

KForm apply_L(const VVForm& phi, const KForm& sigma) {
  require_same_chart(phi.chart(), sigma.chart());
  const int k = phi.degree();
  KForm out(sigma.chart(), sigma.degree() + k);
  for (int i = 0; i < phi.dim(); ++i) {
    const KForm& a = phi.component(i);
    if (a.is_zero()) continue;
    const KForm lie = sigma.partial(i);
    if (!lie.is_zero()) out += wedge(a, lie);
    if (sigma.degree() > 0) {
      const KForm inner = contract(VectorField::coordinate(sigma.chart(), i), sigma);
      const KForm da = d(a);
      if (!inner.is_zero() && !da.is_zero()) out += (k % 2 == 0) ? wedge(da, inner) : -wedge(da, inner);
    }
  }
  return out;
}

}  // namespace fncalc
