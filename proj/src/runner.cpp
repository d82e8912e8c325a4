#include "fncalc/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <random>

#include "fncalc/error.hpp"
#include "fncalc/expr_parser.hpp"

namespace fncalc {
namespace {

using nlohmann::json;

constexpr std::size_t kMaxText = 4000;
// Central-difference step of the family helper and its numeric tolerance.
constexpr const char* kFamilyStep = "1/10000";
constexpr double kFamilyTolerance = 1e-6;

std::string clip(std::string s) {
  if (s.size() > kMaxText) s = s.substr(0, kMaxText) + " ...";
  return s;
}

json vector_json(const VectorField& v) {
  json out = json::array();
  for (const auto& c : v.components()) out.push_back(c.to_string(v.chart().names()));
  return out;
}

json point_json(const std::vector<Rational>& p) {
  json out = json::array();
  for (const auto& c : p) out.push_back(c.get_str());
  return out;
}

json matrix_json(const Matrix& m, const Chart& chart) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_string(chart.names()));
    out.push_back(row);
  }
  return out;
}

std::string status_name(TypeStatus s) {
  switch (s) {
    case TypeStatus::Finite: return "finite";
    case TypeStatus::Infinite: return "infinite";
    case TypeStatus::ExceedsCap: return "exceeds_cap";
  }
  return "unknown";
}

json type_json(const TypeReport& t) {
  json w = {{"status", status_name(t.status)}, {"cap", t.cap}, {"description", t.describe()}};
  if (t.status == TypeStatus::Finite) w["type"] = t.type_value;
  if (t.witness)
    w["frame_witness"] = {
        {"level", t.witness->level}, {"a", t.witness->a}, {"b", t.witness->b}, {"value", vector_json(t.witness->value)}};
  if (t.stabilization_index) w["stabilization_index"] = *t.stabilization_index;
  return w;
}

struct Verdict {
  bool ok = true;
  std::string message;
  json witness = json::object();
};

// Applies an optional boolean expectation to a computed value.
void expect_bool(Verdict& v, const CheckSpec& c, bool actual, const std::string& what) {
  if (c.expect && c.expect->flag != actual) {
    v.ok = false;
    v.message = "expected " + std::string(c.expect->flag ? "" : "not ") + what + ", found " +
                std::string(actual ? "" : "not ") + what;
  }
}

void expect_zero(Verdict& v, const CheckSpec& c, bool is_zero, const std::string& what) {
  if (c.expect && (c.expect->word == "zero") != is_zero) {
    v.ok = false;
    v.message = "expected " + what + " " + c.expect->word + ", found " + (is_zero ? "zero" : "nonzero");
  }
}

Verdict check_integrable(const CheckSpec& c) {
  const Distribution& xi = c.get<Distribution>("distribution");
  const IntegrabilityReport r = is_integrable(xi);
  Verdict v;
  v.witness = {{"integrable", r.integrable}, {"rank", xi.rank()}};
  if (!r.integrable) {
    v.witness["pair"] = {r.i, r.j};
    v.witness["bracket"] = vector_json(*r.bracket);
    v.message = "not integrable: bracket of generators " + std::to_string(r.i) + ", " + std::to_string(r.j) +
                " leaves the distribution";
  } else {
    v.message = "integrable";
  }
  expect_bool(v, c, r.integrable, "integrable");
  return v;
}

Verdict check_type(const CheckSpec& c, int cap) {
  const VVForm phi = c.has("endo")     ? c.get<VVForm>("endo")
                     : c.has("couple") ? couple_to_endo(c.get<DefiningCouple>("couple"))
                     : c.has("flag")   ? c.get<Flag>("flag").phi
                                       : projection_endo(c.get<Distribution>("distribution"),
                                                         c.get<Distribution>("complement"));
  if (c.has("cap")) cap = static_cast<int>(c.get<long>("cap"));
  const TypeReport t = finite_type(phi, cap);
  Verdict v;
  v.witness = type_json(t);
  if (c.has("flag")) v.witness["flag_bound"] = c.get<Flag>("flag").r;
  v.message = t.describe();
  if (c.expect) {
    bool match = false;
    if (c.expect->kind == Expect::Kind::Integer)
      match = t.status == TypeStatus::Finite && t.type_value == c.expect->integer;
    else
      match = status_name(t.status) == c.expect->word;
    if (!match) {
      v.ok = false;
      v.message = "expected type " + c.expect->text + ", found: " + t.describe();
    }
  }
  if (c.has("at_most")) {
    const long bound = c.get<long>("at_most");
    if (t.status != TypeStatus::Finite || t.type_value > bound) {
      v.ok = false;
      v.message = "expected type at most " + std::to_string(bound) + ", found: " + t.describe();
    }
  }
  return v;
}

Verdict check_mc_residual(const CheckSpec& c) {
  const VVForm& phi = c.get<VVForm>("endo");
  Verdict v;
  if (c.has("i_part")) {
    const Derivation dd(phi, c.get<VVForm>("i_part"));
    const Derivation res = mc_residual(dd);
    v.witness = {{"residual_zero", res.is_zero()},
                 {"residual_l", clip(res.l_part().to_string())},
                 {"residual_i", clip(res.i_part().to_string())}};
    v.message = res.is_zero() ? "L_Phi + I_Psi solves the Maurer-Cartan equation"
                              : "L_Phi + I_Psi does not solve the Maurer-Cartan equation";
    expect_zero(v, c, res.is_zero(), "residual");
    return v;
  }
  const MCSolution sol = e_phi(phi);
  const Derivation res = mc_residual(sol.e_phi);
  const OpaqueDerivation op{phi.chart(), 1, [phi](const KForm& s) { return d_phi_apply(phi, s) - d(s); }};
  const bool paths_agree = agree_on_generators(op, OpaqueDerivation::from(sol.e_phi));
  v.witness = {{"residual_zero", res.is_zero()},
               {"operator_path_agrees", paths_agree},
               {"b_phi", clip(sol.b_phi.to_string())},
               {"warnings", sol.warnings}};
  if (!res.is_zero()) {
    v.witness["residual_l"] = clip(res.l_part().to_string());
    v.witness["residual_i"] = clip(res.i_part().to_string());
  }
  v.ok = res.is_zero() && paths_agree;
  v.message = v.ok ? "e_Phi solves the Maurer-Cartan equation and matches R d R^-1 - d"
                    : (!res.is_zero() ? "Maurer-Cartan residual of e_Phi is nonzero"
                                      : "operator path R d R^-1 - d differs from e_Phi");
  if (c.expect) expect_zero(v, c, res.is_zero(), "residual");
  return v;
}

Verdict check_fn_bracket(const CheckSpec& c, std::uint64_t seed) {
  const VVForm& a = c.get<VVForm>("left");
  const VVForm& b = c.get<VVForm>("right");
  const VVForm br = fn_bracket(a, b);
  Verdict v;
  v.witness = {{"bracket", clip(br.to_string())}, {"degree", br.degree()}};
  const int k = a.degree() + b.degree();
  bool oracle = true;
  if (k <= a.chart().dim()) {
    const Derivation dec = decompose(
        commutator(OpaqueDerivation::from(Derivation::lie(a)), OpaqueDerivation::from(Derivation::lie(b))), seed);
    oracle = dec.l_part() == br && dec.i_part().is_zero();
    v.witness["commutator_agrees"] = oracle;
  }
  v.ok = oracle;
  v.message = oracle ? (br.is_zero() ? "bracket vanishes" : "bracket is nonzero")
                     : "closed formula differs from the decomposed commutator";
  if (oracle) expect_zero(v, c, br.is_zero(), "bracket");
  return v;
}

Verdict check_frobenius(const CheckSpec& c) {
  const DefiningCouple& couple = c.get<DefiningCouple>("couple");
  const FrobeniusReport r = frobenius_equivalence(couple);
  Verdict v;
  v.witness = {{"distribution_integrable", r.distribution_integrable},
               {"form_identity", r.form_identity},
               {"fn_bracket_zero", r.fn_bracket_zero},
               {"defect", clip(frobenius_defect(couple).to_string())}};
  v.ok = r.agree();
  v.message = !v.ok ? "the three integrability criteria disagree"
                    : (r.distribution_integrable ? "ker gamma is integrable, all three criteria agree"
                                                 : "ker gamma is not integrable, all three criteria agree");
  if (v.ok) expect_bool(v, c, r.distribution_integrable, "integrable");
  return v;
}

Verdict check_levi_flat(const CheckSpec& c, std::uint64_t seed) {
  const Hypersurface& h = c.get<Hypersurface>("hypersurface");
  const int samples = c.has("samples") ? static_cast<int>(c.get<long>("samples")) : 8;
  const LeviFlatReport r = is_levi_flat(h, samples, seed);
  const LeviMatrix lm = levi_form(h.complex_chart(), h.r());
  Verdict v;
  v.witness = {{"numeric_flat", r.numeric_flat},
               {"symbolic_flat", r.symbolic_flat},
               {"ambient_integrable", r.ambient_integrable},
               {"tolerance", r.tolerance},
               {"samples", r.samples.size()},
               {"levi_matrix", {{"re", matrix_json(lm.re, h.chart())}, {"im", matrix_json(lm.im, h.chart())}}}};
  if (r.witness) {
    v.witness["max_magnitude"] = r.witness->magnitude;
    v.witness["point"] = point_json(r.witness->point);
  }
  if (r.symbolic_witness) v.witness["symbolic_pair"] = {r.symbolic_witness->first, r.symbolic_witness->second};
  v.ok = r.agree();
  v.message = !v.ok ? "numeric and symbolic Levi-flatness checks disagree"
                    : (r.flat() ? "Levi-flat by both checks" : "not Levi-flat by both checks");
  if (v.ok) expect_bool(v, c, r.flat(), "Levi-flat");
  return v;
}

Verdict check_deformation_residual(const CheckSpec& c) {
  const Hypersurface& h = c.get<Hypersurface>("hypersurface");
  const ResidualValue r =
      deformation_residual(h, c.get<Scalar>("p"), c.get<VectorField>("v"), c.get<VectorField>("w"));
  Verdict v;
  const std::string value = r.value.to_string(h.chart().names());
  v.witness = {{"value", value}, {"warnings", r.warnings}};
  v.message = "residual = " + value;
  if (c.expect && !(r.value == *c.expect->scalar)) {
    v.ok = false;
    v.message = "expected residual " + c.expect->text + ", found " + value;
  }
  return v;
}

Verdict check_gamma_series(const CheckSpec& c, int cap) {
  const VVForm& phi = c.get<VVForm>("endo");
  const int k = c.has("k") ? static_cast<int>(c.get<long>("k")) : 5;
  const std::vector<Derivation> rec = gamma_recursive(phi, k);
  json matches = json::array();
  bool all = true;
  for (int j = 1; j <= k; ++j) {
    const bool same = rec[static_cast<std::size_t>(j - 1)] == gamma_k(phi, j);
    matches.push_back(same);
    all = all && same;
  }
  Verdict v;
  v.witness = {{"k", k}, {"recursion_matches_closed_form", matches}};
  const TypeReport t = finite_type(phi, cap);
  v.witness["type"] = type_json(t);
  bool sum_ok = true;
  if (t.status == TypeStatus::Finite) {
    const Derivation target = e_phi(phi).e_phi;
    Derivation sum = Derivation::zero(phi.chart(), 1);
    for (int j = 1; j <= t.type_value + 1; ++j) sum = sum + gamma_k(phi, j);
    sum_ok = agree_on_generators(OpaqueDerivation::from(sum), OpaqueDerivation::from(target)) && sum == target;
    v.witness["finite_sum_terms"] = t.type_value + 1;
    v.witness["finite_sum_matches"] = sum_ok;
  }
  v.ok = all && sum_ok;
  if (!all)
    v.message = "recursion and closed form differ";
  else if (!sum_ok)
    v.message = "finite sum of gamma_k differs from e_Phi";
  else if (t.status == TypeStatus::Finite)
    v.message = "recursion matches closed form for k <= " + std::to_string(k) + "; gamma_1 + ... + gamma_" +
                std::to_string(t.type_value + 1) + " = e_Phi";
  else
    v.message = "recursion matches closed form for k <= " + std::to_string(k) + "; series not finite";
  return v;
}

// Replaces the identifier t by a parenthesized value.
std::string substitute_t(const std::string& text, const std::string& value) {
  std::string out;
  for (std::size_t i = 0; i < text.size();) {
    if (std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      const std::string word = text.substr(i, j - i);
      out += word == "t" ? "(" + value + ")" : word;
      i = j;
    } else {
      out += text[i++];
    }
  }
  return out;
}

std::pair<KForm, VectorField> family_at(const Chart& chart, const Family& f, const std::string& t) {
  std::vector<std::pair<std::vector<int>, Scalar>> terms;
  for (const auto& [idx, text] : f.gamma_terms) terms.emplace_back(idx, parse_scalar(substitute_t(text, t), chart.names()));
  std::vector<Scalar> comps;
  for (const auto& text : f.x_components) comps.push_back(parse_scalar(substitute_t(text, t), chart.names()));
  return {KForm::from_terms(chart, 1, terms), VectorField(chart, std::move(comps))};
}

double max_abs_at_points(const KForm& form, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coord(-7, 7);
  const int n = form.chart().dim();
  double worst = 0;
  int evaluated = 0;
  for (int attempt = 0; attempt < 64 && evaluated < 8; ++attempt) {
    std::vector<Rational> p;
    for (int i = 0; i < n; ++i) p.emplace_back(coord(rng), 7);
    try {
      double local = 0;
      for (const auto& [m, c] : form.terms()) local = std::max(local, std::abs(c.eval(p).get_d()));
      worst = std::max(worst, local);
      ++evaluated;
    } catch (const PoleError&) {
    }
  }
  return worst;
}

Verdict check_delta_alfa(const CheckSpec& c) {
  const DefiningCouple& couple = c.get<DefiningCouple>("couple");
  const VectorField y = c.has("y") ? c.get<VectorField>("y") : VectorField::zero(couple.chart());
  const DeltaAlfaResult r = delta_alfa_residual(couple, c.get<KForm>("alpha"), y);
  const bool zero = r.residual.is_zero();
  Verdict v;
  v.witness = {{"residual", clip(r.residual.to_string())},
               {"compatibility", r.compatibility.to_string(couple.chart().names())},
               {"compatible", r.compatible()}};
  v.message = zero ? "residual vanishes" : "residual is nonzero";
  expect_zero(v, c, zero, "residual");
  return v;
}

// Differentiates a user family at t = 0 by a central difference.
Verdict check_family(const Scenario& s, const CheckSpec& c, std::uint64_t seed) {
  const Family& f = c.get<Family>("family");
  const Rational h(kFamilyStep);
  const std::string plus = h.get_str(), minus = Rational(-h).get_str();
  const auto [g0, x0] = family_at(s.chart, f, "0");
  const auto [gp, xp] = family_at(s.chart, f, plus);
  const auto [gm, xm] = family_at(s.chart, f, minus);
  const Scalar inv(Rational(1) / (2 * h));
  const KForm alpha = inv * (gp - gm);
  const VectorField y = inv * (xp - xm);
  const DefiningCouple couple(g0, x0);
  const DeltaAlfaResult r = delta_alfa_residual(couple, alpha, y);
  const bool exact_zero = r.residual.is_zero();
  const double magnitude = exact_zero ? 0.0 : max_abs_at_points(r.residual, seed);
  const bool zero = magnitude <= kFamilyTolerance;
  Verdict v;
  v.witness = {{"step", kFamilyStep},
               {"alpha", clip(alpha.to_string())},
               {"y", vector_json(y)},
               {"residual_exact_zero", exact_zero},
               {"max_sampled_magnitude", magnitude},
               {"tolerance", kFamilyTolerance}};
  if (!exact_zero) v.witness["residual"] = clip(r.residual.to_string());
  v.message = exact_zero ? "central difference of the family has zero residual"
                         : (zero ? "residual below tolerance at sampled points" : "residual is nonzero");
  expect_zero(v, c, zero, "residual");
  return v;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t resolve_seed(const Scenario& scenario, std::optional<std::uint64_t> flag, const char* env) {
  if (flag) return *flag;
  if (env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    throw PreconditionViolation(std::string("FNCALC_SEED is not an unsigned integer: ") + env);
  }
  return scenario.seed.value_or(kDefaultSeed);
}

std::uint64_t check_seed(std::uint64_t seed, std::size_t index) { return splitmix(seed ^ splitmix(index)); }

CheckRecord run_check(const Scenario& scenario, const CheckSpec& check, std::uint64_t seed, int cap) {
  CheckRecord rec;
  rec.name = check.name;
  rec.kind = check.kind;
  const auto start = std::chrono::steady_clock::now();
  try {
    Verdict v;
    const std::string& k = check.kind;
    if (k == "integrable") v = check_integrable(check);
    else if (k == "type") v = check_type(check, cap);
    else if (k == "mc_residual") v = check_mc_residual(check);
    else if (k == "fn_bracket") v = check_fn_bracket(check, seed);
    else if (k == "frobenius") v = check_frobenius(check);
    else if (k == "levi_flat") v = check_levi_flat(check, seed);
    else if (k == "deformation_residual") v = check_deformation_residual(check);
    else if (k == "gamma_series") v = check_gamma_series(check, cap);
    else if (k == "delta_alfa") v = check.has("family") ? check_family(scenario, check, seed) : check_delta_alfa(check);
    else throw PreconditionViolation("unknown check kind '" + k + "'");
    rec.status = v.ok ? CheckStatus::Pass : CheckStatus::Fail;
    rec.message = v.message;
    rec.witness = std::move(v.witness);
  } catch (const std::exception& e) {
    rec.status = CheckStatus::Error;
    rec.message = e.what();
    rec.witness = {{"error", e.what()}};
  }
  const auto stop = std::chrono::steady_clock::now();
  rec.timing_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  return rec;
}

Report run_scenario(const Scenario& scenario, const RunOptions& options) {
  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < scenario.checks.size(); ++i) {
    const auto& only = options.only;
    if (only.empty() || std::find(only.begin(), only.end(), scenario.checks[i].kind) != only.end())
      selected.push_back(i);
  }
  Report report;
  report.seed = options.seed;
  report.checks.resize(selected.size());
  const long count = static_cast<long>(selected.size());
  auto one = [&](long i) {
    const std::size_t idx = selected[static_cast<std::size_t>(i)];
    report.checks[static_cast<std::size_t>(i)] =
        run_check(scenario, scenario.checks[idx], check_seed(options.seed, idx), options.cap);
  };
  if (options.mode == Execution::Serial) {
    for (long i = 0; i < count; ++i) one(i);
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < count; ++i) one(i);
  }
  return report;
}

}  // namespace fncalc
