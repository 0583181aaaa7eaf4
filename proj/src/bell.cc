#include "optele/bell.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace optele {

std::string to_string(BellClass c) {
  switch (c) {
    case BellClass::kPhiPlus: return "Phi+";
    case BellClass::kPhiMinus: return "Phi-";
    case BellClass::kPsiPlus: return "Psi+";
    case BellClass::kPsiMinus: return "Psi-";
    case BellClass::kFail: return "fail";
  }
  return "?";
}

std::optional<BellIndex> bell_index(BellClass c) {
  switch (c) {
    case BellClass::kPhiPlus: return kPhiPlus;
    case BellClass::kPhiMinus: return kPhiMinus;
    case BellClass::kPsiPlus: return kPsiPlus;
    case BellClass::kPsiMinus: return kPsiMinus;
    case BellClass::kFail: return std::nullopt;
  }
  return std::nullopt;
}

BellClass bell_class(BellIndex index) {
  if (index.family == BellFamily::kPhi) return index.sign == BellSign::kPlus ? BellClass::kPhiPlus : BellClass::kPhiMinus;
  return index.sign == BellSign::kPlus ? BellClass::kPsiPlus : BellClass::kPsiMinus;
}

std::string to_string(BpLabel label) {
  switch (label) {
    case BpLabel::kHH: return "(H,H)";
    case BpLabel::kHV: return "(H,V)";
    case BpLabel::kVH: return "(V,H)";
    case BpLabel::kVV: return "(V,V)";
    case BpLabel::kBunched: return "bunched";
  }
  return "?";
}

bool separated(BpLabel label) { return label != BpLabel::kBunched; }

BpLabel classify_bp_counts(const std::array<unsigned, 4>& c) {
  if (c[0] + c[1] != 1 || c[2] + c[3] != 1) return BpLabel::kBunched;
  bool upper_h = c[0] == 1;
  bool lower_h = c[2] == 1;
  if (upper_h) return lower_h ? BpLabel::kHH : BpLabel::kHV;
  return lower_h ? BpLabel::kVH : BpLabel::kVV;
}

BellClass bp_classification(BpLabel label, const BpConfig& config) {
  switch (label) {
    case BpLabel::kHV:
    case BpLabel::kVH:
      return config.plate_90 ? BellClass::kPsiPlus : BellClass::kPhiPlus;
    case BpLabel::kHH:
    case BpLabel::kVV:
      return config.plate_90 ? BellClass::kPsiMinus : BellClass::kPhiMinus;
    case BpLabel::kBunched:
      return BellClass::kFail;
  }
  return BellClass::kFail;
}

namespace {

void check_pairs(const PureState& state, const PolPair& first, const PolPair& second, bool standalone) {
  const ModeLayout& layout = state.layout();
  const size_t rails[] = {layout.index_of(first.h()), layout.index_of(first.v()), layout.index_of(second.h()),
                          layout.index_of(second.v())};
  if (!standalone) return;
  for (const auto& t : state.terms()) {
    unsigned total = 0;
    for (size_t r : rails) total += layout.occupation(t.key, r);
    if (total != 2) throw std::invalid_argument("B_P input must carry exactly two photons in the two pairs");
  }
}

}  // namespace

std::vector<BpBranch> run_b_p(const PureState& state, const PolPair& first, const PolPair& second,
                              const BpConfig& config, bool standalone) {
  check_pairs(state, first, second, standalone);
  PureState s = state;
  if (config.plate_90) s = wave_plate(s, second, jones::swap());
  s = pbs_route(s, first, second);
  s = wave_plate(s, first, jones::half_wave_plate(std::numbers::pi / 8));
  s = wave_plate(s, second, jones::half_wave_plate(-std::numbers::pi / 8));

  const std::vector<Detector> detectors = {
      {{first.h()}, DetectorKind::kPnr},
      {{first.v()}, DetectorKind::kPnr},
      {{second.h()}, DetectorKind::kPnr},
      {{second.v()}, DetectorKind::kPnr},
  };
  OutcomeDistribution dist = enumerate_outcomes(s, detectors);

  std::map<BpLabel, BpBranch> grouped;
  for (auto& rec : dist.records) {
    std::array<unsigned, 4> counts{};
    for (size_t d = 0; d < 4; ++d) counts[d] = rec.readings[d].value;
    BpLabel label = classify_bp_counts(counts);
    BpBranch& branch = grouped[label];
    branch.label = label;
    branch.classification = bp_classification(label, config);
    branch.probability += rec.probability;
    for (auto& c : rec.components) branch.components.push_back(std::move(c));
  }
  std::vector<BpBranch> out;
  for (auto& [label, branch] : grouped) out.push_back(std::move(branch));
  return out;
}

BpBranch sample_b_p(const PureState& state, const PolPair& first, const PolPair& second, uint64_t seed,
                    const BpConfig& config, bool standalone) {
  std::vector<BpBranch> branches = run_b_p(state, first, second, config, standalone);
  OutcomeDistribution dist;
  for (const auto& b : branches) dist.records.push_back({{}, b.probability, {}});
  return branches[sample_index(dist, seed)];
}

std::map<BellClass, double> b_p_oracle(const PureState& state, const PolPair& first, const PolPair& second,
                                       const BpConfig& config) {
  const ModeLayout& layout = state.layout();
  const size_t h1 = layout.index_of(first.h()), v1 = layout.index_of(first.v());
  const size_t h2 = layout.index_of(second.h()), v2 = layout.index_of(second.v());

  // Amplitudes on |HH>, |HV>, |VH>, |VV> (one photon per pair) per remainder.
  std::map<uint64_t, std::array<Complex, 4>> blocks;
  for (const auto& t : state.terms()) {
    unsigned a = layout.occupation(t.key, h1), b = layout.occupation(t.key, v1);
    unsigned c = layout.occupation(t.key, h2), d = layout.occupation(t.key, v2);
    if (a + b != 1 || c + d != 1) continue;
    uint64_t rest = t.key;
    for (size_t m : {h1, v1, h2, v2}) rest = layout.set_occupation(rest, m, 0);
    size_t slot = (a == 1 ? 0 : 2) + (c == 1 ? 0 : 1);
    blocks[rest][slot] += t.amplitude;
  }
  const double r = std::numbers::sqrt2 / 2;
  const std::array<double, 4> phi_plus{r, 0, 0, r}, phi_minus{r, 0, 0, -r};
  const std::array<double, 4> psi_plus{0, r, r, 0}, psi_minus{0, r, -r, 0};
  const auto& plus = config.plate_90 ? psi_plus : phi_plus;
  const auto& minus = config.plate_90 ? psi_minus : phi_minus;
  const BellClass plus_class = config.plate_90 ? BellClass::kPsiPlus : BellClass::kPhiPlus;
  const BellClass minus_class = config.plate_90 ? BellClass::kPsiMinus : BellClass::kPhiMinus;

  double p_plus = 0.0, p_minus = 0.0;
  for (const auto& [rest, amps] : blocks) {
    Complex op = 0.0, om = 0.0;
    for (size_t i = 0; i < 4; ++i) {
      op += plus[i] * amps[i];
      om += minus[i] * amps[i];
    }
    p_plus += std::norm(op);
    p_minus += std::norm(om);
  }
  const double total = state.norm_squared();
  p_plus /= total;
  p_minus /= total;
  return {{plus_class, p_plus}, {minus_class, p_minus}, {BellClass::kFail, std::max(0.0, 1.0 - p_plus - p_minus)}};
}

std::string to_string(const BAlphaPattern& p) { return "(" + to_string(p.first) + "," + to_string(p.second) + ")"; }

BellClass b_alpha_classification(const BAlphaPattern& p) {
  if (p.second == ParityClass::kZero) {
    if (p.first == ParityClass::kEvenNonzero) return BellClass::kPhiPlus;
    if (p.first == ParityClass::kOdd) return BellClass::kPhiMinus;
  } else if (p.first == ParityClass::kZero) {
    if (p.second == ParityClass::kEvenNonzero) return BellClass::kPsiPlus;
    if (p.second == ParityClass::kOdd) return BellClass::kPsiMinus;
  }
  return BellClass::kFail;
}

std::vector<BAlphaBranch> run_b_alpha(const PureState& state, const std::string& first, const std::string& second) {
  PureState mixed = beam_splitter_5050(state, first, second);
  OutcomeDistribution dist = enumerate_outcomes(mixed, {{{first}, DetectorKind::kPnpd}, {{second}, DetectorKind::kPnpd}});
  std::vector<BAlphaBranch> out;
  for (auto& rec : dist.records) {
    BAlphaBranch b;
    b.pattern = {static_cast<ParityClass>(rec.readings[0].value), static_cast<ParityClass>(rec.readings[1].value)};
    b.classification = b_alpha_classification(b.pattern);
    b.probability = rec.probability;
    b.components = std::move(rec.components);
    out.push_back(std::move(b));
  }
  return out;
}

std::optional<FeedForward> feedforward_rule(const BAlphaPattern& b_alpha, BpLabel b_p) {
  const bool p_separated = separated(b_p);
  const bool p_mixed = b_p == BpLabel::kHV || b_p == BpLabel::kVH;
  FeedForward ff;
  switch (b_alpha_classification(b_alpha)) {
    case BellClass::kPhiPlus: ff = {0, 0}; break;
    case BellClass::kPhiMinus: ff = {0, 1}; break;
    case BellClass::kPsiPlus: ff = {1, 0}; break;
    case BellClass::kPsiMinus: ff = {1, 1}; break;
    case BellClass::kFail:
      if (b_alpha != BAlphaPattern{}) return std::nullopt;  // not a (0,0) vacuum event
      if (!p_separated) return std::nullopt;
      return p_mixed ? FeedForward{0, 1} : FeedForward{1, 1};
  }
  if (p_separated) ff.k ^= 1u;
  return ff;
}

namespace {

struct HybridKey {
  BAlphaPattern b_alpha;
  BpLabel b_p;
  auto operator<=>(const HybridKey&) const = default;
};

std::vector<unsigned> concat_counts(const std::vector<unsigned>& a, const std::vector<unsigned>& b) {
  std::vector<unsigned> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

std::vector<HybridBsmResult> hybrid_bsm(const PureState& state, const LogicalModes& input, const LogicalModes& alice,
                                        MeasurementOrder order) {
  std::map<HybridKey, HybridBsmResult> grouped;
  auto record = [&](const BAlphaPattern& pa, BpLabel lp, std::vector<unsigned> counts, double p, PureState post) {
    if (p < kNegligibleProbability) return;
    HybridBsmResult& r = grouped[{pa, lp}];
    r.b_alpha = pa;
    r.b_alpha_class = b_alpha_classification(pa);
    r.b_p = lp;
    r.b_p_class = bp_classification(lp);
    r.feedforward = feedforward_rule(pa, lp);
    r.probability += p;
    r.components.push_back({std::move(counts), p, std::move(post)});
  };

  if (order == MeasurementOrder::kBAlphaFirst) {
    for (const auto& ba : run_b_alpha(state, input.field, alice.field)) {
      for (const auto& ca : ba.components) {
        for (const auto& bp : run_b_p(ca.post_state, input.pol, alice.pol, {}, false)) {
          for (const auto& cp : bp.components) {
            record(ba.pattern, bp.label, concat_counts(ca.counts, cp.counts), ca.probability * cp.probability,
                   cp.post_state);
          }
        }
      }
    }
  } else {
    for (const auto& bp : run_b_p(state, input.pol, alice.pol, {}, false)) {
      for (const auto& cp : bp.components) {
        for (const auto& ba : run_b_alpha(cp.post_state, input.field, alice.field)) {
          for (const auto& ca : ba.components) {
            record(ba.pattern, bp.label, concat_counts(ca.counts, cp.counts), ca.probability * cp.probability,
                   ca.post_state);
          }
        }
      }
    }
  }
  std::vector<HybridBsmResult> out;
  for (auto& [key, r] : grouped) {
    std::sort(r.components.begin(), r.components.end(),
              [](const FineBranch& x, const FineBranch& y) { return x.counts < y.counts; });
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace optele
