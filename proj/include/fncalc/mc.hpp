#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fncalc/dgla.hpp"

namespace fncalc {

/// Inverse of a degree-1 form read as an endomorphism.
struct EndoInverse {
  VVForm inverse;
  Scalar determinant;
  /// Non-empty when the determinant vanishes somewhere (poles of the inverse).
  std::vector<std::string> warnings;
};

/// R_Phi = Id + Phi.
VVForm r_phi(const VVForm& phi);
/// Exact inverse; throws NotInvertible when the determinant is identically 0.
EndoInverse invert_endo(const VVForm& phi);

/// d_Phi sigma = R_Phi d R_Phi^{-1} sigma with R acting on forms by pullback.
KForm d_phi_apply(const VVForm& phi, const KForm& sigma);
/// b(Phi) = -1/2 R_Phi^{-1} [Phi, Phi].
VVForm b_of_phi(const VVForm& phi);

struct MCSolution {
  VVForm phi;
  VVForm b_phi;
  Derivation e_phi;
  std::vector<std::string> warnings;
};

/// Canonical solution e_Phi = L_Phi + I_{b(Phi)}.
MCSolution e_phi(const VVForm& phi);

/// Daleth D + 1/2 [D, D].
Derivation mc_residual(const Derivation& d);

/// gamma_k in closed form: gamma_1 = L_Phi, gamma_k = (-1)^{k+1}/2 I_{Phi^{k-2}[Phi,Phi]}.
Derivation gamma_k(const VVForm& phi, int k);
/// gamma_1 .. gamma_k by the recursion gamma_k = -1/2 sum_{p+q=k} aleph[gamma_p, gamma_q].
std::vector<Derivation> gamma_recursive(const VVForm& phi, int k);

struct FrameWitness {
  int level = 0;  // k in Phi^k [Phi, Phi]
  int a = 0;
  int b = 0;
  VectorField value;
};

enum class TypeStatus { Finite, Infinite, ExceedsCap };

struct TypeReport {
  TypeStatus status = TypeStatus::Finite;
  int type_value = 0;  // meaningful when status is Finite
  int cap = 16;
  /// Frame pair where the last computed nonzero level is nonzero.
  std::optional<FrameWitness> witness;
  /// j with Phi^{j+1} = Phi^j and Phi^j [Phi, Phi] != 0, proving infinite type.
  std::optional<int> stabilization_index;

  std::string describe() const;
};

inline constexpr int kDefaultCap = 16;

/// Least r <= cap with Phi^r [Phi, Phi] = 0, or the reason none exists.
TypeReport finite_type(const VVForm& phi, int cap = kDefaultCap);

/// First frame pair (a < b) where a vector-valued 2-form is nonzero.
std::optional<FrameWitness> first_nonzero_pair(const VVForm& form, int level);

}  // namespace fncalc
