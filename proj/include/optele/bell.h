#ifndef OPTELE_BELL_H_
#define OPTELE_BELL_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "optele/encodings.h"
#include "optele/measurement.h"
#include "optele/optics.h"

namespace optele {

enum class BellClass { kPhiPlus, kPhiMinus, kPsiPlus, kPsiMinus, kFail };

std::string to_string(BellClass c);
std::optional<BellIndex> bell_index(BellClass c);
BellClass bell_class(BellIndex index);

// ---------------------------------------------------------------------------
// Polarization analyzer.
//
// Circuit: optional 90-degree plate on the second input, a PBS mixing the two
// inputs, then per output arm a half-wave plate (+22.5 deg on the first arm,
// -22.5 deg on the second) in front of an analysis PBS and two detectors.
// With the 90-degree plate, one click per arm with mixed labels (H,V)/(V,H)
// identifies Psi+ and equal labels (H,H)/(V,V) identify Psi-. Without it the
// same patterns identify Phi+ and Phi-.

struct BpConfig {
  bool plate_90 = true;
};

enum class BpLabel { kHH, kHV, kVH, kVV, kBunched };

std::string to_string(BpLabel label);
bool separated(BpLabel label);

// Photon counts at (arm 1 H, arm 1 V, arm 2 H, arm 2 V).
BpLabel classify_bp_counts(const std::array<unsigned, 4>& counts);
BellClass bp_classification(BpLabel label, const BpConfig& config = {});

struct BpBranch {
  BpLabel label = BpLabel::kBunched;
  BellClass classification = BellClass::kFail;
  double probability = 0.0;
  std::vector<FineBranch> components;  // counts are the 4 detector counts
};

// Exhaustive outcome list, ordered by label. With `standalone`, every term
// must carry exactly two photons in the two pairs.
std::vector<BpBranch> run_b_p(const PureState& state, const PolPair& first, const PolPair& second,
                              const BpConfig& config = {}, bool standalone = true);

BpBranch sample_b_p(const PureState& state, const PolPair& first, const PolPair& second, uint64_t seed,
                    const BpConfig& config = {}, bool standalone = true);

// Projective reference: probabilities of the two identifiable Bell states
// and of the complement (kFail).
std::map<BellClass, double> b_p_oracle(const PureState& state, const PolPair& first, const PolPair& second,
                                       const BpConfig& config = {});

// ---------------------------------------------------------------------------
// Coherent-state analyzer: 50:50 BS followed by two parity detectors.

struct BAlphaPattern {
  ParityClass first = ParityClass::kZero;
  ParityClass second = ParityClass::kZero;

  bool operator==(const BAlphaPattern&) const = default;
  auto operator<=>(const BAlphaPattern&) const = default;
};

std::string to_string(const BAlphaPattern& p);

// (even,0)->Phi+, (odd,0)->Phi-, (0,even)->Psi+, (0,odd)->Psi-; anything else
// (including (0,0)) is a failure.
BellClass b_alpha_classification(const BAlphaPattern& p);

struct BAlphaBranch {
  BAlphaPattern pattern;
  BellClass classification = BellClass::kFail;
  double probability = 0.0;
  std::vector<FineBranch> components;  // counts are the two photon numbers
};

std::vector<BAlphaBranch> run_b_alpha(const PureState& state, const std::string& first, const std::string& second);

// ---------------------------------------------------------------------------
// Hybrid analyzer and feed-forward.

struct FeedForward {
  unsigned j = 0;  // power of X
  unsigned k = 0;  // power of Z

  bool operator==(const FeedForward&) const = default;
};

// Feed-forward rules for the hybrid scheme. B_alpha success fixes (j, k) by
// its row and a separated-click B_P outcome flips k. On B_alpha failure,
// (H,V)/(V,H) gives (0,1), (H,H)/(V,V) gives (1,1), and anything else is a
// failure (nullopt).
std::optional<FeedForward> feedforward_rule(const BAlphaPattern& b_alpha, BpLabel b_p);

struct HybridBsmResult {
  BAlphaPattern b_alpha;
  BellClass b_alpha_class = BellClass::kFail;
  BpLabel b_p = BpLabel::kBunched;
  BellClass b_p_class = BellClass::kFail;
  std::optional<FeedForward> feedforward;
  double probability = 0.0;
  // Fine components: counts = (B_alpha n1, n2, B_P four counts); post-state
  // on the remaining (receiver) modes.
  std::vector<FineBranch> components;
};

enum class MeasurementOrder { kBAlphaFirst, kBpFirst };

std::vector<HybridBsmResult> hybrid_bsm(const PureState& state, const LogicalModes& input, const LogicalModes& alice,
                                        MeasurementOrder order = MeasurementOrder::kBAlphaFirst);

}  // namespace optele

#endif  // OPTELE_BELL_H_
