#ifndef OPTELE_FOCK_H_
#define OPTELE_FOCK_H_

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace optele {

using Complex = std::complex<double>;

// Amplitudes with magnitude below this are dropped whenever a state is built.
inline constexpr double kPruneThreshold = 1e-14;

class LayoutError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a requested operation cannot be represented at the available
// photon-number cutoff without losing more than the configured tail mass.
class CutoffSaturation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModeKind { kPolarizationRail, kField };

struct ModeDescriptor {
  std::string label;
  ModeKind kind = ModeKind::kField;
  unsigned cutoff = 1;
};

// A polarization qubit lives on two rails "<base>.H" and "<base>.V".
struct PolPair {
  std::string base;

  std::string h() const { return base + ".H"; }
  std::string v() const { return base + ".V"; }
};

inline constexpr unsigned kDefaultRailCutoff = 2;

/// Ordered registry of bosonic modes.
///
/// Occupation tuples are packed into a single 64-bit key, mode 0 in the most
/// significant bits, so that integer order on keys equals lexicographic order
/// on tuples regardless of the per-mode bit widths.
class ModeLayout {
 public:
  ModeLayout() = default;
  explicit ModeLayout(std::vector<ModeDescriptor> modes);

  static ModeLayout field(const std::string& label, unsigned cutoff);
  static ModeLayout polarization(const PolPair& pair, unsigned cutoff = kDefaultRailCutoff);

  size_t size() const { return modes_.size(); }
  const ModeDescriptor& operator[](size_t i) const { return modes_[i]; }
  const std::vector<ModeDescriptor>& modes() const { return modes_; }

  // Index of a label; throws LayoutError when absent.
  size_t index_of(const std::string& label) const;
  bool contains(const std::string& label) const;

  // Same labels and kinds in the same order; cutoffs may differ.
  bool compatible_with(const ModeLayout& other) const;
  bool operator==(const ModeLayout& other) const;

  ModeLayout concat(const ModeLayout& other) const;
  ModeLayout without(std::span<const size_t> removed) const;
  ModeLayout with_cutoff(size_t mode, unsigned cutoff) const;

  uint64_t encode(std::span<const unsigned> occupation) const;
  std::vector<unsigned> decode(uint64_t key) const;
  unsigned occupation(uint64_t key, size_t mode) const {
    return static_cast<unsigned>((key >> shift_[mode]) & mask_[mode]);
  }
  uint64_t set_occupation(uint64_t key, size_t mode, unsigned n) const {
    return (key & ~(mask_[mode] << shift_[mode])) | (static_cast<uint64_t>(n) << shift_[mode]);
  }
  unsigned total_bits() const { return total_bits_; }

 private:
  void build_codec();

  std::vector<ModeDescriptor> modes_;
  std::vector<unsigned> shift_;
  std::vector<uint64_t> mask_;
  unsigned total_bits_ = 0;
};

struct Term {
  uint64_t key;
  Complex amplitude;
};

/// Sparse pure state over a ModeLayout. Immutable after construction.
///
/// Terms are kept sorted by key, merged, and pruned below kPruneThreshold.
/// discarded_weight() accumulates the squared norm lost to cutoff truncation
/// by the operations that produced this state.
class PureState {
 public:
  PureState() = default;
  PureState(ModeLayout layout, std::vector<Term> terms, double discarded_weight = 0.0);

  static PureState vacuum(ModeLayout layout);
  static PureState basis(ModeLayout layout, std::span<const unsigned> occupation);

  const ModeLayout& layout() const { return layout_; }
  std::span<const Term> terms() const { return terms_; }
  size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  double discarded_weight() const { return discarded_weight_; }

  Complex amplitude(std::span<const unsigned> occupation) const;
  double norm_squared() const;
  double norm() const;

  // Throws std::domain_error on the zero vector.
  PureState normalized() const;
  PureState scaled(Complex factor) const;
  PureState with_discarded(double extra) const;

 private:
  ModeLayout layout_;
  std::vector<Term> terms_;
  double discarded_weight_ = 0.0;
};

/// Photon-number truncation rule for coherent amplitudes.
struct CutoffPolicy {
  double tail_epsilon = 1e-12;
  double headroom_factor = 1.4142135623730951;
  unsigned hard_limit = 256;

  void validate() const;
  // Smallest n such that the Poisson(|amplitude|^2) mass above n is below
  // tail_epsilon. Throws CutoffSaturation past hard_limit.
  unsigned cutoff_for(double amplitude) const;
};

// Squared norm beyond n of a coherent state with the given mean photon number.
double poisson_tail_above(double mean, unsigned n);

PureState coherent_state(Complex alpha, unsigned cutoff, const std::string& label = "f");
// Cutoff from policy.cutoff_for(|alpha| * headroom_factor).
PureState coherent_state(Complex alpha, const CutoffPolicy& policy, const std::string& label = "f");

PureState tensor(const PureState& a, const PureState& b);

// Re-embeds a state into a layout with the same labels and kinds but possibly
// different cutoffs. Terms that no longer fit are counted as discarded.
PureState recut(const PureState& state, const ModeLayout& target);

// <a|b>. Layouts must be compatible; differing cutoffs are reconciled.
Complex inner_product(const PureState& a, const PureState& b);

// |<a|b>|^2 for normalized inputs.
double fidelity(const PureState& a, const PureState& b);

struct Projection {
  PureState state;  // normalized, on the unselected modes; empty if probability is 0
  double probability = 0.0;
};

// Projects the selected modes onto the given allowed occupations (one list
// per selected mode) and traces them out of the layout. The probability is
// relative to the squared norm of the input.
Projection project(const PureState& state, const std::vector<std::string>& modes,
                   const std::vector<std::vector<unsigned>>& allowed);

// Drops the listed modes after projecting them onto an exact occupation.
PureState slice(const PureState& state, std::span<const size_t> modes,
                std::span<const unsigned> occupation);

// <a> for the annihilation operator of one mode.
Complex mean_field(const PureState& state, const std::string& mode);

// Photon-number distribution of one mode.
std::vector<double> photon_distribution(const PureState& state, const std::string& mode);

}  // namespace optele

#endif  // OPTELE_FOCK_H_
