#ifndef OPTELE_ENCODINGS_H_
#define OPTELE_ENCODINGS_H_

#include <string>

#include "optele/fock.h"
#include "optele/optics.h"

namespace optele {

struct LogicalAmplitudes {
  Complex a{1.0};
  Complex b{0.0};

  // Scales (a, b) to unit norm; throws std::invalid_argument on (0, 0).
  static LogicalAmplitudes normalized(Complex a, Complex b);
  void validate() const;
};

enum class BellFamily { kPhi, kPsi };
enum class BellSign { kPlus, kMinus };

struct BellIndex {
  BellFamily family = BellFamily::kPhi;
  BellSign sign = BellSign::kPlus;

  bool operator==(const BellIndex&) const = default;
};

inline constexpr BellIndex kPhiPlus{BellFamily::kPhi, BellSign::kPlus};
inline constexpr BellIndex kPhiMinus{BellFamily::kPhi, BellSign::kMinus};
inline constexpr BellIndex kPsiPlus{BellFamily::kPsi, BellSign::kPlus};
inline constexpr BellIndex kPsiMinus{BellFamily::kPsi, BellSign::kMinus};
inline constexpr BellIndex kAllBell[] = {kPhiPlus, kPhiMinus, kPsiPlus, kPsiMinus};

std::string to_string(BellIndex index);

class DegenerateBasis : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EncodingParams {
  Encoding encoding = Encoding::kHybrid;
  double alpha = 1.0;
  CutoffPolicy policy;

  // Cutoff shared by every field mode of an experiment at this alpha: large
  // enough for the sqrt(2) alpha amplitudes that appear behind a 50:50 BS.
  unsigned field_cutoff() const;
};

// N_{+/-} = (2 +/- 2 e^{-4 alpha^2})^{-1/2}.
double cat_normalization(double alpha, BellSign sign);

PureState make_polarization_bell(BellIndex index, const PolPair& first = {"p1"}, const PolPair& second = {"p2"});

// Phi: N(|a>|a> +/- |-a>|-a>), Psi: N(|a>|-a> +/- |-a>|a>).
PureState make_coherent_bell(BellIndex index, const EncodingParams& params, const std::string& first = "f1",
                             const std::string& second = "f2");

enum class Parity { kEven, kOdd };
std::string to_string(Parity p);

// N(|beta> +/- |-beta>) on one field mode, cut off at `cutoff`.
PureState scs_state(Parity parity, double beta, unsigned cutoff, const std::string& label = "f");
PureState scs_state(Parity parity, double beta, const EncodingParams& params, const std::string& label = "f");

// |0_L> = |+>|alpha>, |1_L> = |->|-alpha>.
PureState make_hybrid_qubit(const LogicalAmplitudes& amps, const EncodingParams& params, const LogicalModes& modes);

// (|0_L>|0_L> + |1_L>|1_L>)/sqrt2.
PureState make_hybrid_channel(const EncodingParams& params, const LogicalModes& alice, const LogicalModes& bob);

PureState make_polarization_qubit(const LogicalAmplitudes& amps, const PolPair& pair);

// a|alpha> + b|-alpha>, renormalized in Fock space.
PureState make_coherent_qubit(const LogicalAmplitudes& amps, const EncodingParams& params, const std::string& field);

// Dispatches on params.encoding.
PureState make_logical_qubit(const LogicalAmplitudes& amps, const EncodingParams& params, const LogicalModes& modes);

}  // namespace optele

#endif  // OPTELE_ENCODINGS_H_
