#ifndef OPTELE_OPTICS_H_
#define OPTELE_OPTICS_H_

#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "optele/fock.h"

namespace optele {

// Jones matrices act on (H, V) amplitude columns: column c is the image of
// the c-th rail's creation operator.
using Jones = Eigen::Matrix2cd;

namespace jones {

Jones identity();
// The 90-degree plate: exchanges H and V.
Jones swap();
// Half-wave plate with fast axis at `angle` radians from H.
Jones half_wave_plate(double angle);
// Half-wave plate at 22.5 degrees: H -> (H+V)/sqrt2, V -> (H-V)/sqrt2.
Jones diagonal();
// Phase e^{i theta} on the V rail.
Jones phase_v(double theta);

}  // namespace jones

// Applies the passive transformation a^dag -> U00 a^dag + U10 b^dag,
// b^dag -> U01 a^dag + U11 b^dag on two modes. Components whose total photon
// number in the pair exceeds min(cutoff_a, cutoff_b) cannot be represented
// exactly and are discarded (recorded in discarded_weight).
PureState two_mode_unitary(const PureState& state, const std::string& mode_a, const std::string& mode_b,
                           const Eigen::Matrix2cd& u);

// 50:50 beam splitter with a -> (a+b)/sqrt2, b -> (a-b)/sqrt2, so that
// |x>|x> -> |sqrt2 x>|0> and |x>|-x> -> |0>|sqrt2 x>.
PureState beam_splitter_5050(const PureState& state, const std::string& mode_a, const std::string& mode_b);

PureState phase_shift(const PureState& state, const std::string& mode, double theta);

// D(beta) = exp(beta a^dag - beta^* a), evaluated as a matrix exponential on
// an enlarged truncation. Throws CutoffSaturation if more than
// policy.tail_epsilon of the output weight falls above the mode cutoff.
PureState displacement(const PureState& state, const std::string& mode, Complex beta,
                       const CutoffPolicy& policy = {});

PureState wave_plate(const PureState& state, const PolPair& pair, const Jones& jones);

// Polarizing beam splitter: H rails are transmitted, V rails are exchanged
// between the two spatial modes.
PureState pbs_route(const PureState& state, const PolPair& first, const PolPair& second);

// exp(i theta n_a n_b).
PureState cross_kerr(const PureState& state, const std::string& mode_a, const std::string& mode_b, double theta);

// Cross-Kerr between the V rail of a polarization pair and a field mode:
// |H>|z> is untouched, |V>|z> -> |V>|z e^{i theta}>.
PureState conditional_kerr(const PureState& state, const PolPair& pair, const std::string& field, double theta);

struct BeamSplitterElement {
  std::string a, b;
};
struct PhaseShiftElement {
  std::string mode;
  double theta = 0.0;
};
struct DisplacementElement {
  std::string mode;
  Complex beta;
};
struct WavePlateElement {
  PolPair pair;
  Jones jones = Jones::Identity();
};
struct PbsElement {
  PolPair first, second;
};
struct CrossKerrElement {
  std::string a, b;
  double theta = 0.0;
};
struct ConditionalKerrElement {
  PolPair pair;
  std::string field;
  double theta = 0.0;
};

using Element = std::variant<BeamSplitterElement, PhaseShiftElement, DisplacementElement, WavePlateElement,
                             PbsElement, CrossKerrElement, ConditionalKerrElement>;

PureState apply(const PureState& state, const Element& element, const CutoffPolicy& policy = {});

// Logical encodings.
enum class Encoding { kPolarization, kCoherent, kHybrid };

std::string to_string(Encoding e);
Encoding encoding_from_string(const std::string& s);

class NotPhysicallyImplementable : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Modes carrying one logical qubit. Polarization uses `pol`, coherent uses
// `field` (with `alpha` for the non-physical ideal Z), hybrid uses both.
struct LogicalModes {
  PolPair pol;
  std::string field;
  double alpha = 0.0;
};

// polarization: H<->V swap. coherent: pi phase on the field.
// hybrid: pi phase on the V rail (|+> <-> |->) and pi phase on the field,
// which exchanges |+>|a> and |->|-a>.
PureState pauli_x(const PureState& state, Encoding encoding, const LogicalModes& modes);

// polarization: pi phase on V. hybrid: H<->V swap, i.e. |+><+| - |-><-|,
// field untouched. coherent: not physically available; with ideal_z the
// field content of each branch is expanded on {|a>, |-a>} and the |-a>
// coefficient is negated, then the result is rescaled to the input norm.
PureState pauli_z(const PureState& state, Encoding encoding, const LogicalModes& modes, bool ideal_z = false);

}  // namespace optele

#endif  // OPTELE_OPTICS_H_
