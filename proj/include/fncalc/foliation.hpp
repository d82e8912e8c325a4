#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fncalc/forms.hpp"
#include "fncalc/matrix.hpp"
#include "fncalc/vvform.hpp"

namespace fncalc {

/// Distribution spanned by vector fields that are linearly independent over
/// the rational-function field.
class Distribution {
 public:
  /// Throws RankDeficient when the generic rank is below the generator count.
  Distribution(Chart chart, std::vector<VectorField> generators);

  const Chart& chart() const { return chart_; }
  const std::vector<VectorField>& generators() const { return generators_; }
  int rank() const { return static_cast<int>(generators_.size()); }

  /// Generators as the rows of a matrix.
  Matrix as_rows() const;
  /// Generic span membership by exact row reduction.
  bool contains(const VectorField& v) const;

 private:
  Chart chart_;
  std::vector<VectorField> generators_;
};

/// ker gamma of a nonzero 1-form, as a rank n-1 distribution.
Distribution kernel_distribution(const KForm& gamma);

struct IntegrabilityReport {
  bool integrable = true;
  /// Offending generator indices and their bracket when not integrable.
  int i = -1;
  int j = -1;
  std::optional<VectorField> bracket;
};

IntegrabilityReport is_integrable(const Distribution& xi);

struct XiStar {
  Distribution closure;
  int dimension = 0;
  int rounds = 0;
};

/// Involutive closure by iterated brackets; throws NotStabilized when the
/// rank still grows after `cap` rounds.
XiStar xi_star(const Distribution& xi, int cap);

/// Determinant of the combined generator matrix of xi and zeta.
Scalar direct_sum_determinant(const Distribution& xi, const Distribution& zeta);

/// Projection onto zeta along xi: 0 on xi and Id on zeta.
VVForm projection_endo(const Distribution& xi, const Distribution& zeta);

struct Flag {
  std::vector<VectorField> frame;
  int s = 0;
  int d = 0;
  int r = 0;
  /// d x d shift sending e_{s+j} to e_j, in the frame basis.
  Matrix k;
  /// blockdiag(K, Id) conjugated into coordinates.
  VVForm phi;
  /// Loci where the frame degenerates.
  std::vector<std::string> warnings;
};

/// Phi X_i = 0 for i <= s, Phi X_i = X_{i-s} for s < i <= d, Phi X_i = X_i above d.
Flag flag_endo(const std::vector<VectorField>& frame, int s, int d);

/// Frame adapted to xi subset xi* subset TM, completed by coordinate fields.
std::vector<VectorField> adapted_frame(const Distribution& xi, int cap);

/// The canonical d x d shift with blocks (0 Id; 0 0) of sizes s and d - s.
Matrix canonical_shift(int d, int s);
/// Least m with m >= d / s.
int min_nilpotent_index(int d, int s);

/// Pair (gamma, X) with gamma(X) = 1.
class DefiningCouple {
 public:
  /// Throws PreconditionViolation unless gamma is a 1-form with gamma(X) = 1.
  DefiningCouple(KForm gamma, VectorField x);

  const KForm& gamma() const { return gamma_; }
  const VectorField& x() const { return x_; }
  const Chart& chart() const { return gamma_.chart(); }

 private:
  KForm gamma_;
  VectorField x_;
};

/// d gamma + i_X d gamma ^ gamma, which vanishes exactly when ker gamma is integrable.
KForm frobenius_defect(const DefiningCouple& couple);
bool frobenius_form_test(const DefiningCouple& couple);

struct FrobeniusReport {
  bool distribution_integrable = false;  // i
  bool form_identity = false;            // ii
  bool fn_bracket_zero = false;          // iii
  bool agree() const {
    return distribution_integrable == form_identity && form_identity == fn_bracket_zero;
  }
};

FrobeniusReport frobenius_equivalence(const DefiningCouple& couple);

/// V -> gamma(V) X.
VVForm couple_to_endo(const DefiningCouple& couple);

/// {alpha, beta} = L_X alpha ^ beta - alpha ^ L_X beta.
KForm kodaira_bracket(const VectorField& x, const KForm& alpha, const KForm& beta);

/// delta alpha = d alpha + {gamma, alpha}, bracket taken along X.
KForm delta(const DefiningCouple& couple, const KForm& alpha);

struct DeltaAlfaResult {
  KForm residual;
  /// alpha(X) + gamma(Y).
  Scalar compatibility;
  bool compatible() const { return compatibility.is_zero(); }
};

/// delta alpha + L_Y gamma ^ gamma.
DeltaAlfaResult delta_alfa_residual(const DefiningCouple& couple, const KForm& alpha,
                                    const VectorField& y);

}  // namespace fncalc
