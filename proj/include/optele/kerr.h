#ifndef OPTELE_KERR_H_
#define OPTELE_KERR_H_

#include "optele/encodings.h"
#include "optele/fock.h"

namespace optele {

struct KerrGenParams {
  double alpha = 0.0;  // target hybrid amplitude
  double gamma = 0.0;  // auxiliary imaginary offset of the probe
  double theta = 0.0;  // cross-Kerr phase

  // theta = 2 atan(alpha / gamma), i.e. gamma tan(theta/2) = alpha.
  static KerrGenParams from_constraint(double alpha, double gamma);
  void validate() const;
};

// |e^{i theta}(alpha + i gamma) - (-alpha + i gamma)|: how far the Kerr-rotated
// V branch lands from its intended centre.
double rotation_exactness_check(const KerrGenParams& params);

struct HybridPairOptions {
  bool compensate = true;        // cancel the displacement's relative phase
  bool diagonal_basis = false;   // finish with a diagonal plate: {H,V} -> {+,-}
};

// Modes "k" (rail pair) and "k.f" (field).
inline constexpr const char* kKerrPair = "k";
inline constexpr const char* kKerrField = "k.f";

/// |+>|alpha + i gamma> -> cross-Kerr(theta) on the V rail -> D(-i gamma).
///
/// The two branches leave with a relative phase e^{2 i gamma alpha}. With
/// compensate, a phase -2 gamma alpha on the V rail removes it, so the
/// output is (|H>|alpha> + |V>|-alpha>)/sqrt2. The field cutoff covers
/// |alpha + i gamma| at policy.tail_epsilon.
PureState generate_hybrid_pair(const KerrGenParams& params, const CutoffPolicy& policy,
                               const HybridPairOptions& options = {});

// (|H>|alpha> + |V>|-alpha>)/sqrt2 (or the diagonal-basis version) at the
// given field cutoff.
PureState canonical_hybrid_pair(double alpha, unsigned cutoff, bool diagonal_basis = false);

// Splits an SCS of amplitude sqrt2 beta on a 50:50 BS with a vacuum ancilla:
// N(|beta>|beta> +/- |-beta>|-beta>) on modes "f1", "f2".
PureState generate_ecs_via_bs(double beta, Parity parity, const CutoffPolicy& policy);

}  // namespace optele

#endif  // OPTELE_KERR_H_
