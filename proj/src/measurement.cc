#include "optele/measurement.h"

#include <algorithm>
#include <map>
#include <random>

namespace optele {

ParityClass parity_class(unsigned photons) {
  if (photons == 0) return ParityClass::kZero;
  return photons % 2 == 0 ? ParityClass::kEvenNonzero : ParityClass::kOdd;
}

std::string to_string(ParityClass c) {
  switch (c) {
    case ParityClass::kZero: return "0";
    case ParityClass::kEvenNonzero: return "even";
    case ParityClass::kOdd: return "odd";
  }
  return "?";
}

std::string to_string(const DetectorReading& r) {
  switch (r.kind) {
    case DetectorKind::kOnOff: return r.value ? "click" : "none";
    case DetectorKind::kPnr: return std::to_string(r.value);
    case DetectorKind::kPnpd: return to_string(static_cast<ParityClass>(r.value));
  }
  return "?";
}

const PureState& OutcomeRecord::post_state() const {
  if (components.empty()) throw std::logic_error("outcome record has no components");
  auto best = std::max_element(components.begin(), components.end(),
                               [](const FineBranch& x, const FineBranch& y) { return x.probability < y.probability; });
  if (components.size() == 1) return best->post_state;
  double spread = 0.0;
  for (const auto& c : components) spread += c.probability * (1.0 - fidelity(c.post_state, best->post_state));
  if (spread > 1e-9 * probability) {
    throw MixedPostState("detector outcome leaves a mixed conditional state");
  }
  return best->post_state;
}

double OutcomeDistribution::total_probability() const {
  double s = 0.0;
  for (const auto& r : records) s += r.probability;
  return s;
}

const OutcomeRecord* OutcomeDistribution::find(const std::vector<DetectorReading>& readings) const {
  for (const auto& r : records) {
    if (r.readings == readings) return &r;
  }
  return nullptr;
}

double OutcomeDistribution::probability_of(const std::vector<DetectorReading>& readings) const {
  const OutcomeRecord* r = find(readings);
  return r ? r->probability : 0.0;
}

OutcomeDistribution enumerate_outcomes(const PureState& state, const std::vector<Detector>& detectors) {
  const ModeLayout& layout = state.layout();
  if (detectors.empty()) throw std::invalid_argument("at least one detector is required");
  std::vector<std::vector<size_t>> detector_modes;
  std::vector<size_t> detected;
  for (const auto& d : detectors) {
    if (d.modes.empty()) throw std::invalid_argument("detector without modes");
    auto& idx = detector_modes.emplace_back();
    for (const auto& label : d.modes) {
      size_t m = layout.index_of(label);
      if (std::find(detected.begin(), detected.end(), m) != detected.end()) {
        throw std::invalid_argument("mode '" + label + "' is assigned to more than one detector");
      }
      detected.push_back(m);
      idx.push_back(m);
    }
  }
  std::vector<size_t> kept;
  for (size_t i = 0; i < layout.size(); ++i) {
    if (std::find(detected.begin(), detected.end(), i) == detected.end()) kept.push_back(i);
  }
  ModeLayout rest = layout.without(detected);

  // Fine branches are keyed by the per-detector counts followed by the full
  // occupation of the detected modes: a detector spanning several modes
  // absorbs them, so different occupations with the same total stay
  // incoherent components.
  std::map<std::vector<unsigned>, std::vector<Term>> fine;
  std::vector<unsigned> id(detectors.size() + detected.size());
  for (const auto& t : state.terms()) {
    for (size_t d = 0; d < detectors.size(); ++d) {
      id[d] = 0;
      for (size_t m : detector_modes[d]) id[d] += layout.occupation(t.key, m);
    }
    for (size_t i = 0; i < detected.size(); ++i) id[detectors.size() + i] = layout.occupation(t.key, detected[i]);
    uint64_t key = 0;
    for (size_t i = 0; i < kept.size(); ++i) key = rest.set_occupation(key, i, layout.occupation(t.key, kept[i]));
    fine[id].push_back({key, t.amplitude});
  }

  const double total = state.norm_squared();
  if (total == 0.0) throw std::domain_error("cannot measure the zero vector");
  std::map<std::vector<DetectorReading>, OutcomeRecord> coarse;
  for (auto& [fid, terms] : fine) {
    const std::vector<unsigned> c(fid.begin(), fid.begin() + detectors.size());
    PureState branch(rest, std::move(terms), state.discarded_weight());
    double p = branch.norm_squared() / total;
    if (p < kNegligibleProbability) continue;
    std::vector<DetectorReading> readings(detectors.size());
    for (size_t d = 0; d < detectors.size(); ++d) {
      readings[d].kind = detectors[d].kind;
      switch (detectors[d].kind) {
        case DetectorKind::kOnOff: readings[d].value = c[d] > 0 ? 1 : 0; break;
        case DetectorKind::kPnr: readings[d].value = c[d]; break;
        case DetectorKind::kPnpd: readings[d].value = static_cast<unsigned>(parity_class(c[d])); break;
      }
    }
    OutcomeRecord& rec = coarse[readings];
    rec.readings = readings;
    rec.probability += p;
    rec.components.push_back({c, p, branch.normalized()});
  }
  OutcomeDistribution dist;
  for (auto& [r, rec] : coarse) dist.records.push_back(std::move(rec));
  return dist;
}

uint64_t derive_seed(uint64_t seed, uint64_t trial) {
  uint64_t z = seed ^ trial;
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double uniform_from_seed(uint64_t seed) {
  std::mt19937_64 engine(seed);
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

size_t sample_index(const OutcomeDistribution& dist, uint64_t seed) {
  if (dist.records.empty()) throw std::invalid_argument("cannot sample an empty distribution");
  double u = uniform_from_seed(seed) * dist.total_probability();
  double cumulative = 0.0;
  for (size_t i = 0; i < dist.records.size(); ++i) {
    cumulative += dist.records[i].probability;
    if (u < cumulative) return i;
  }
  return dist.records.size() - 1;
}

OutcomeRecord sample_outcome(const PureState& state, const std::vector<Detector>& detectors, uint64_t seed) {
  OutcomeDistribution dist = enumerate_outcomes(state, detectors);
  return dist.records[sample_index(dist, seed)];
}

}  // namespace optele
