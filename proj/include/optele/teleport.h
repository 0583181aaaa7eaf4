#ifndef OPTELE_TELEPORT_H_
#define OPTELE_TELEPORT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "optele/bell.h"
#include "optele/encodings.h"

namespace optele {

struct SamplingMode {
  uint64_t seed = 0;
  uint64_t trials = 0;
};

struct TeleportConfig {
  Encoding encoding = Encoding::kHybrid;
  double alpha = 1.0;
  LogicalAmplitudes amps;
  bool ideal_z = false;                 // coherent encoding only
  std::optional<SamplingMode> sampled;  // exact enumeration when empty
  CutoffPolicy policy;
};

enum class RunStatus { kSuccess, kCorrectionIncomplete, kFailure };
std::string to_string(RunStatus s);

// One detector-level branch of a teleportation run.
struct TeleportRun {
  std::string outcome;         // raw detector pattern(s)
  std::string classification;  // Bell classes reported by the analyzer(s)
  std::optional<FeedForward> feedforward;
  RunStatus status = RunStatus::kFailure;
  double probability = 0.0;
  // After correction for successes; the uncorrected state otherwise.
  PureState bob_state;
  // Probability-weighted over the branch's photon-number components. For
  // kCorrectionIncomplete it measures the uncorrected state; unset for failures.
  std::optional<double> fidelity_to_input;
};

struct Metrics {
  Encoding encoding = Encoding::kHybrid;
  double alpha = 0.0;
  // Exact probability of reaching the input state, or the sampled frequency
  // when the config requests sampling.
  double success_probability = 0.0;
  double exact_success_probability = 0.0;
  // Probability that the Bell measurement itself succeeds (differs from
  // success only for coherent qubits without ideal Z).
  double bsm_success_probability = 0.0;
  double analytic_success_probability = 0.0;
  double mean_fidelity_on_success = 0.0;
  double min_fidelity_on_success = 0.0;
  unsigned cutoff_used = 0;
  double discarded_weight = 0.0;
  uint64_t trials = 0;  // 0 in exact mode
  std::vector<TeleportRun> branches;
};

// Closed-form success probability:
//   hybrid        1 - e^{-2 a^2}/2
//   polarization  1/2
//   coherent      1 - P(B_alpha vacuum) with ideal Z; otherwise the weight of
//                 the (even,0) and (0,even) outcomes, which need no Z.
double analytic_success_probability(Encoding encoding, double alpha, const LogicalAmplitudes& amps, bool ideal_z);

// Applies X^j Z^k (Z first) with the encoding's physical Paulis.
PureState apply_feedforward(const PureState& state, Encoding encoding, const LogicalModes& modes, FeedForward ff,
                            bool ideal_z = false);

// Corrections fixed by brute-force derivation (see tests).
FeedForward polarization_correction(BellClass bp_class);
FeedForward coherent_correction(BellClass b_alpha_class);

Metrics teleport_hybrid(const TeleportConfig& config);
Metrics teleport_polarization(const TeleportConfig& config);
Metrics teleport_coherent(const TeleportConfig& config);
Metrics teleport(const TeleportConfig& config);

struct SweepRow {
  double alpha = 0.0;
  Metrics metrics;
  double analytic = 0.0;
  double abs_dev = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double max_abs_dev = 0.0;
};

// Evaluates grid points concurrently; rows keep grid order.
SweepResult sweep_alpha(const TeleportConfig& base, const std::vector<double>& alphas);

// Mode names used by the drivers.
LogicalModes input_modes(double alpha);
LogicalModes alice_modes(double alpha);
LogicalModes bob_modes(double alpha);

}  // namespace optele

#endif  // OPTELE_TELEPORT_H_
