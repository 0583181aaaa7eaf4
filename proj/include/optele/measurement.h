#ifndef OPTELE_MEASUREMENT_H_
#define OPTELE_MEASUREMENT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "optele/fock.h"

namespace optele {

// Photon-number outcomes rarer than this are treated as roundoff and omitted
// from enumerations (amplitudes are already pruned at 1e-14).
inline constexpr double kNegligibleProbability = 1e-20;

enum class DetectorKind { kOnOff, kPnr, kPnpd };

// Photon-number parity classes. Vacuum is a class of its own.
enum class ParityClass : unsigned { kZero = 0, kEvenNonzero = 1, kOdd = 2 };

ParityClass parity_class(unsigned photons);
std::string to_string(ParityClass c);

// One detector counting the total photon number over its modes.
struct Detector {
  std::vector<std::string> modes;
  DetectorKind kind = DetectorKind::kPnr;
};

// Detector value: a count (pnr), 0/1 (on/off) or a ParityClass (pnpd).
struct DetectorReading {
  DetectorKind kind = DetectorKind::kPnr;
  unsigned value = 0;

  bool operator==(const DetectorReading&) const = default;
  auto operator<=>(const DetectorReading&) const = default;
};

std::string to_string(const DetectorReading& r);

// One exact photon-number outcome on the detected modes. Components of a
// multi-mode detector may share the same counts.
struct FineBranch {
  std::vector<unsigned> counts;  // per detector
  double probability = 0.0;
  PureState post_state;  // normalized, on the undetected modes
};

class MixedPostState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A detector-level outcome. Coarse detectors (on/off, pnpd) merge several
/// photon-number outcomes; the conditional state of the undetected modes is
/// then the mixture of the fine components with their weights.
struct OutcomeRecord {
  std::vector<DetectorReading> readings;
  double probability = 0.0;
  std::vector<FineBranch> components;

  // The conditional pure state; throws MixedPostState if the components are
  // not all the same ray.
  const PureState& post_state() const;
};

struct OutcomeDistribution {
  std::vector<OutcomeRecord> records;

  double total_probability() const;
  const OutcomeRecord* find(const std::vector<DetectorReading>& readings) const;
  double probability_of(const std::vector<DetectorReading>& readings) const;
};

// Exhaustive branch list at the working cutoff. Records are ordered by
// readings; fine components by counts. Outcomes below kNegligibleProbability
// are omitted.
OutcomeDistribution enumerate_outcomes(const PureState& state, const std::vector<Detector>& detectors);

// Mixing function for per-trial seeds: splitmix64(seed ^ trial).
uint64_t derive_seed(uint64_t seed, uint64_t trial);

// Uniform double in [0, 1) from the top 53 bits of a mt19937_64 draw.
double uniform_from_seed(uint64_t seed);

// Index of the record selected by `seed` (inverse-CDF over record order).
size_t sample_index(const OutcomeDistribution& dist, uint64_t seed);

OutcomeRecord sample_outcome(const PureState& state, const std::vector<Detector>& detectors, uint64_t seed);

}  // namespace optele

#endif  // OPTELE_MEASUREMENT_H_
