#include "fncalc/foliation.hpp"

#include "fncalc/dgla.hpp"
#include "fncalc/error.hpp"

namespace fncalc {
namespace {

Matrix rows_of(const Chart& chart, const std::vector<VectorField>& fields) {
  Matrix m(static_cast<int>(fields.size()), chart.dim());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) m(r, c) = fields[static_cast<std::size_t>(r)][c];
  return m;
}

Matrix columns_of(const Chart& chart, const std::vector<VectorField>& fields) {
  Matrix m(chart.dim(), static_cast<int>(fields.size()));
  for (int c = 0; c < m.cols(); ++c)
    for (int r = 0; r < m.rows(); ++r) m(r, c) = fields[static_cast<std::size_t>(c)][r];
  return m;
}

int generic_rank(const Chart& chart, const std::vector<VectorField>& fields) {
  if (fields.empty()) return 0;
  return rank(rows_of(chart, fields));
}

std::vector<std::string> degeneracy_warnings(const Chart& chart, const Scalar& det, const std::string& what) {
  if (det.is_constant()) return {};
  return {what + " degenerates where " + det.to_string(chart.names()) + " = 0"};
}

}  // namespace

Distribution::Distribution(Chart chart, std::vector<VectorField> generators)
    : chart_(std::move(chart)), generators_(std::move(generators)) {
  for (const auto& g : generators_) require_same_chart(chart_, g.chart());
  const int r = generic_rank(chart_, generators_);
  if (r != rank())
    throw RankDeficient("generators have generic rank " + std::to_string(r) + ", expected " +
                        std::to_string(rank()));
}

Matrix Distribution::as_rows() const { return rows_of(chart_, generators_); }

bool Distribution::contains(const VectorField& v) const {
  require_same_chart(chart_, v.chart());
  if (v.is_zero()) return true;
  std::vector<VectorField> extended = generators_;
  extended.push_back(v);
  return generic_rank(chart_, extended) == rank();
}

Distribution kernel_distribution(const KForm& gamma) {
  if (gamma.degree() != 1) throw DegreeMismatch("kernel distribution needs a 1-form");
  if (gamma.is_zero()) throw PreconditionViolation("kernel of the zero 1-form is not a hyperplane field");
  const Chart& chart = gamma.chart();
  Matrix row(1, chart.dim());
  for (int i = 0; i < chart.dim(); ++i) row(0, i) = gamma.coefficient(IndexMask{1} << i);
  std::vector<VectorField> gens;
  for (auto& v : kernel(row)) gens.emplace_back(chart, std::move(v));
  return Distribution(chart, std::move(gens));
}

IntegrabilityReport is_integrable(const Distribution& xi) {
  IntegrabilityReport report;
  const auto& g = xi.generators();
  for (int i = 0; i < xi.rank(); ++i)
    for (int j = i + 1; j < xi.rank(); ++j) {
      VectorField b = lie_bracket(g[static_cast<std::size_t>(i)], g[static_cast<std::size_t>(j)]);
      if (xi.contains(b)) continue;
      report.integrable = false;
      report.i = i;
      report.j = j;
      report.bracket = std::move(b);
      return report;
    }
  return report;
}

XiStar xi_star(const Distribution& xi, int cap) {
  if (cap < 0) throw PreconditionViolation("cap must be non-negative");
  std::vector<VectorField> gens = xi.generators();
  const Chart& chart = xi.chart();
  for (int round = 0;; ++round) {
    std::vector<VectorField> next = gens;
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = i + 1; j < gens.size(); ++j) {
        VectorField b = lie_bracket(gens[i], gens[j]);
        if (b.is_zero()) continue;
        next.push_back(b);
        if (generic_rank(chart, next) < static_cast<int>(next.size())) next.pop_back();
      }
    if (next.size() == gens.size()) {
      const int dim = static_cast<int>(gens.size());
      return XiStar{Distribution(chart, std::move(gens)), dim, round};
    }
    if (round >= cap)
      throw NotStabilized("rank still growing after " + std::to_string(cap) +
                          " rounds; partial closure has dimension " + std::to_string(next.size()));
    gens = std::move(next);
  }
}

Scalar direct_sum_determinant(const Distribution& xi, const Distribution& zeta) {
  require_same_chart(xi.chart(), zeta.chart());
  if (xi.rank() + zeta.rank() != xi.chart().dim())
    throw PreconditionViolation("ranks " + std::to_string(xi.rank()) + " + " +
                                std::to_string(zeta.rank()) + " do not sum to the dimension");
  std::vector<VectorField> all = xi.generators();
  all.insert(all.end(), zeta.generators().begin(), zeta.generators().end());
  return determinant(columns_of(xi.chart(), all));
}

VVForm projection_endo(const Distribution& xi, const Distribution& zeta) {
  const Scalar det = direct_sum_determinant(xi, zeta);
  if (det.is_zero()) throw PreconditionViolation("not a direct sum: combined determinant is 0");
  const Chart& chart = xi.chart();
  std::vector<VectorField> all = xi.generators();
  all.insert(all.end(), zeta.generators().begin(), zeta.generators().end());
  const Matrix f = columns_of(chart, all);
  Matrix p(chart.dim(), chart.dim());
  for (int i = xi.rank(); i < chart.dim(); ++i) p(i, i) = Scalar(1);
  return VVForm::from_endo_matrix(chart, f * p * inverse(f));
}

Matrix canonical_shift(int d, int s) {
  if (s < 1 || s > d) throw PreconditionViolation("need 1 <= s <= d");
  Matrix k(d, d);
  for (int j = 0; j + s < d; ++j) k(j, j + s) = Scalar(1);
  return k;
}

int min_nilpotent_index(int d, int s) {
  if (s < 1 || s > d) throw PreconditionViolation("need 1 <= s <= d");
  return (d + s - 1) / s;
}

Flag flag_endo(const std::vector<VectorField>& frame, int s, int d) {
  if (frame.empty()) throw PreconditionViolation("empty frame");
  const Chart& chart = frame.front().chart();
  const int n = chart.dim();
  if (static_cast<int>(frame.size()) != n) throw PreconditionViolation("frame size differs from dimension");
  if (s < 1 || s > d || d > n) throw PreconditionViolation("need 1 <= s <= d <= n");
  for (const auto& v : frame) require_same_chart(chart, v.chart());
  const Matrix f = columns_of(chart, frame);
  const Scalar det = determinant(f);
  if (det.is_zero()) throw NotInvertible();

  const Matrix k = canonical_shift(d, s);
  Matrix block(n, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) block(i, j) = k(i, j);
  for (int i = d; i < n; ++i) block(i, i) = Scalar(1);
  VVForm phi = VVForm::from_endo_matrix(chart, f * block * inverse(f));
  return Flag{frame, s, d, min_nilpotent_index(d, s), k, std::move(phi), degeneracy_warnings(chart, det, "frame")};
}

std::vector<VectorField> adapted_frame(const Distribution& xi, int cap) {
  const Chart& chart = xi.chart();
  std::vector<VectorField> frame = xi_star(xi, cap).closure.generators();
  for (int i = 0; i < chart.dim() && static_cast<int>(frame.size()) < chart.dim(); ++i) {
    frame.push_back(VectorField::coordinate(chart, i));
    if (generic_rank(chart, frame) < static_cast<int>(frame.size())) frame.pop_back();
  }
  return frame;
}

DefiningCouple::DefiningCouple(KForm gamma, VectorField x) : gamma_(std::move(gamma)), x_(std::move(x)) {
  require_same_chart(gamma_.chart(), x_.chart());
  if (gamma_.degree() != 1) throw PreconditionViolation("gamma must be a 1-form");
  const Scalar pairing = contract(x_, gamma_).function_value();
  if (!(pairing == Scalar(1)))
    throw PreconditionViolation("gamma(X) = " + pairing.to_string(gamma_.chart().names()) + ", expected 1");
}

KForm frobenius_defect(const DefiningCouple& couple) {
  const KForm dg = d(couple.gamma());
  return dg + wedge(contract(couple.x(), dg), couple.gamma());
}

bool frobenius_form_test(const DefiningCouple& couple) { return frobenius_defect(couple).is_zero(); }

FrobeniusReport frobenius_equivalence(const DefiningCouple& couple) {
  FrobeniusReport r;
  r.distribution_integrable = is_integrable(kernel_distribution(couple.gamma())).integrable;
  r.form_identity = frobenius_form_test(couple);
  const VVForm phi = couple_to_endo(couple);
  r.fn_bracket_zero = fn_bracket(phi, phi).is_zero();
  return r;
}

VVForm couple_to_endo(const DefiningCouple& couple) { return VVForm::tensor(couple.gamma(), couple.x()); }

KForm kodaira_bracket(const VectorField& x, const KForm& alpha, const KForm& beta) {
  require_same_chart(alpha.chart(), beta.chart());
  require_same_chart(x.chart(), alpha.chart());
  return wedge(lie_derivative(x, alpha), beta) - wedge(alpha, lie_derivative(x, beta));
}

KForm delta(const DefiningCouple& couple, const KForm& alpha) {
  return d(alpha) + kodaira_bracket(couple.x(), couple.gamma(), alpha);
}

DeltaAlfaResult delta_alfa_residual(const DefiningCouple& couple, const KForm& alpha, const VectorField& y) {
  if (alpha.degree() != 1) throw DegreeMismatch("alpha must be a 1-form");
  require_same_chart(couple.chart(), y.chart());
  KForm residual = delta(couple, alpha) + wedge(lie_derivative(y, couple.gamma()), couple.gamma());
  Scalar compat = contract(couple.x(), alpha).function_value() + contract(y, couple.gamma()).function_value();
  return DeltaAlfaResult{std::move(residual), std::move(compat)};
}

}  // namespace fncalc
