#include "optele/fock.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <unordered_map>

namespace optele {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Key of `key` (from `src`) restricted to `kept` modes, encoded in `dst`.
uint64_t remap_key(uint64_t key, const ModeLayout& src, const ModeLayout& dst,
                   std::span<const size_t> kept) {
  uint64_t out = 0;
  for (size_t i = 0; i < kept.size(); ++i) {
    out = dst.set_occupation(out, i, src.occupation(key, kept[i]));
  }
  return out;
}

std::vector<Term> merge_and_prune(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.key < b.key; });
  std::vector<Term> out;
  out.reserve(terms.size());
  for (const auto& t : terms) {
    if (!out.empty() && out.back().key == t.key) {
      out.back().amplitude += t.amplitude;
    } else {
      out.push_back(t);
    }
  }
  std::erase_if(out, [](const Term& t) { return std::abs(t.amplitude) < kPruneThreshold; });
  return out;
}

}  // namespace

ModeLayout::ModeLayout(std::vector<ModeDescriptor> modes) : modes_(std::move(modes)) {
  std::set<std::string> labels;
  for (const auto& m : modes_) {
    if (m.label.empty()) throw LayoutError("mode label must be non-empty");
    if (!labels.insert(m.label).second) throw LayoutError("duplicate mode label '" + m.label + "'");
    if (m.cutoff < 1) throw LayoutError("cutoff of mode '" + m.label + "' must be >= 1");
  }
  for (const auto& m : modes_) {
    if (m.kind != ModeKind::kPolarizationRail) continue;
    bool is_h = ends_with(m.label, ".H");
    bool is_v = ends_with(m.label, ".V");
    if (!is_h && !is_v) throw LayoutError("polarization rail '" + m.label + "' must end in .H or .V");
    std::string partner = m.label.substr(0, m.label.size() - 1) + (is_h ? "V" : "H");
    auto it = std::find_if(modes_.begin(), modes_.end(), [&](const ModeDescriptor& d) { return d.label == partner; });
    if (it == modes_.end() || it->kind != ModeKind::kPolarizationRail) {
      throw LayoutError("polarization rail '" + m.label + "' has no partner '" + partner + "'");
    }
  }
  build_codec();
}

void ModeLayout::build_codec() {
  shift_.assign(modes_.size(), 0);
  mask_.assign(modes_.size(), 0);
  unsigned total = 0;
  std::vector<unsigned> bits(modes_.size());
  for (size_t i = 0; i < modes_.size(); ++i) {
    bits[i] = static_cast<unsigned>(std::bit_width(modes_[i].cutoff));
    total += bits[i];
  }
  if (total > 64) throw LayoutError("layout needs " + std::to_string(total) + " key bits; at most 64 supported");
  unsigned remaining = total;
  for (size_t i = 0; i < modes_.size(); ++i) {
    remaining -= bits[i];
    shift_[i] = remaining;
    mask_[i] = (uint64_t{1} << bits[i]) - 1;
  }
  total_bits_ = total;
}

ModeLayout ModeLayout::field(const std::string& label, unsigned cutoff) {
  return ModeLayout({{label, ModeKind::kField, cutoff}});
}

ModeLayout ModeLayout::polarization(const PolPair& pair, unsigned cutoff) {
  return ModeLayout({{pair.h(), ModeKind::kPolarizationRail, cutoff}, {pair.v(), ModeKind::kPolarizationRail, cutoff}});
}

size_t ModeLayout::index_of(const std::string& label) const {
  for (size_t i = 0; i < modes_.size(); ++i) {
    if (modes_[i].label == label) return i;
  }
  throw LayoutError("no mode labelled '" + label + "'");
}

bool ModeLayout::contains(const std::string& label) const {
  return std::any_of(modes_.begin(), modes_.end(), [&](const ModeDescriptor& m) { return m.label == label; });
}

bool ModeLayout::compatible_with(const ModeLayout& other) const {
  if (modes_.size() != other.modes_.size()) return false;
  for (size_t i = 0; i < modes_.size(); ++i) {
    if (modes_[i].label != other.modes_[i].label || modes_[i].kind != other.modes_[i].kind) return false;
  }
  return true;
}

bool ModeLayout::operator==(const ModeLayout& other) const {
  if (!compatible_with(other)) return false;
  for (size_t i = 0; i < modes_.size(); ++i) {
    if (modes_[i].cutoff != other.modes_[i].cutoff) return false;
  }
  return true;
}

ModeLayout ModeLayout::concat(const ModeLayout& other) const {
  std::vector<ModeDescriptor> all = modes_;
  all.insert(all.end(), other.modes_.begin(), other.modes_.end());
  return ModeLayout(std::move(all));
}

ModeLayout ModeLayout::without(std::span<const size_t> removed) const {
  std::vector<ModeDescriptor> kept;
  for (size_t i = 0; i < modes_.size(); ++i) {
    if (std::find(removed.begin(), removed.end(), i) == removed.end()) kept.push_back(modes_[i]);
  }
  return ModeLayout(std::move(kept));
}

ModeLayout ModeLayout::with_cutoff(size_t mode, unsigned cutoff) const {
  std::vector<ModeDescriptor> copy = modes_;
  copy.at(mode).cutoff = cutoff;
  return ModeLayout(std::move(copy));
}

uint64_t ModeLayout::encode(std::span<const unsigned> occupation) const {
  if (occupation.size() != modes_.size()) throw LayoutError("occupation tuple length does not match layout");
  uint64_t key = 0;
  for (size_t i = 0; i < modes_.size(); ++i) {
    if (occupation[i] > modes_[i].cutoff) {
      throw LayoutError("occupation " + std::to_string(occupation[i]) + " exceeds cutoff of mode '" + modes_[i].label + "'");
    }
    key = set_occupation(key, i, occupation[i]);
  }
  return key;
}

std::vector<unsigned> ModeLayout::decode(uint64_t key) const {
  std::vector<unsigned> occ(modes_.size());
  for (size_t i = 0; i < modes_.size(); ++i) occ[i] = occupation(key, i);
  return occ;
}

PureState::PureState(ModeLayout layout, std::vector<Term> terms, double discarded_weight)
    : layout_(std::move(layout)), terms_(merge_and_prune(std::move(terms))), discarded_weight_(discarded_weight) {
  const unsigned bits = layout_.total_bits();
  for (const auto& t : terms_) {
    if (bits < 64 && (t.key >> bits) != 0) throw LayoutError("key has bits outside the layout");
    for (size_t m = 0; m < layout_.size(); ++m) {
      if (layout_.occupation(t.key, m) > layout_[m].cutoff) {
        throw LayoutError("term exceeds cutoff of mode '" + layout_[m].label + "'");
      }
    }
    if (!std::isfinite(t.amplitude.real()) || !std::isfinite(t.amplitude.imag())) {
      throw std::domain_error("non-finite amplitude");
    }
  }
}

PureState PureState::vacuum(ModeLayout layout) {
  return PureState(std::move(layout), {{0, 1.0}});
}

PureState PureState::basis(ModeLayout layout, std::span<const unsigned> occupation) {
  uint64_t key = layout.encode(occupation);
  return PureState(std::move(layout), {{key, 1.0}});
}

Complex PureState::amplitude(std::span<const unsigned> occupation) const {
  uint64_t key = layout_.encode(occupation);
  auto it = std::lower_bound(terms_.begin(), terms_.end(), key, [](const Term& t, uint64_t k) { return t.key < k; });
  return (it != terms_.end() && it->key == key) ? it->amplitude : Complex{};
}

double PureState::norm_squared() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::norm(t.amplitude);
  return s;
}

double PureState::norm() const { return std::sqrt(norm_squared()); }

PureState PureState::normalized() const {
  double n = norm();
  if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
  return scaled(1.0 / n);
}

PureState PureState::scaled(Complex factor) const {
  std::vector<Term> out = terms_;
  for (auto& t : out) t.amplitude *= factor;
  return PureState(layout_, std::move(out), discarded_weight_);
}

PureState PureState::with_discarded(double extra) const {
  PureState copy = *this;
  copy.discarded_weight_ += extra;
  return copy;
}

void CutoffPolicy::validate() const {
  if (!(tail_epsilon > 0.0 && tail_epsilon < 1.0)) throw std::invalid_argument("tail_epsilon must lie in (0, 1)");
  if (!(headroom_factor >= std::sqrt(2.0) - 1e-12)) throw std::invalid_argument("headroom_factor must be >= sqrt(2)");
  if (hard_limit < 1) throw std::invalid_argument("hard_limit must be >= 1");
}

double poisson_tail_above(double mean, unsigned n) {
  if (mean <= 0.0) return 0.0;
  double upper = mean + 40.0 * std::sqrt(mean) + 60.0;
  double tail = 0.0;
  // Summed from the top so that the small terms are accumulated first.
  for (auto k = static_cast<unsigned>(std::ceil(upper)); k > n; --k) {
    tail += std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
  }
  return tail;
}

unsigned CutoffPolicy::cutoff_for(double amplitude) const {
  validate();
  if (!std::isfinite(amplitude)) throw std::invalid_argument("amplitude must be finite");
  double mean = amplitude * amplitude;
  if (mean == 0.0) return 1;
  auto upper = static_cast<size_t>(std::ceil(mean + 40.0 * std::sqrt(mean) + 60.0));
  std::vector<double> suffix(upper + 2, 0.0);
  for (size_t k = upper + 1; k-- > 0;) {
    suffix[k] = suffix[k + 1] + std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
  }
  for (size_t n = 0; n <= upper; ++n) {
    if (suffix[n + 1] < tail_epsilon) {
      if (n > hard_limit) {
        throw CutoffSaturation("amplitude " + std::to_string(amplitude) + " needs cutoff " + std::to_string(n) +
                               " > hard limit " + std::to_string(hard_limit));
      }
      return std::max<unsigned>(1, static_cast<unsigned>(n));
    }
  }
  throw CutoffSaturation("no cutoff reaches the requested tail epsilon");
}

PureState coherent_state(Complex alpha, unsigned cutoff, const std::string& label) {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw std::invalid_argument("coherent amplitude must be finite");
  }
  ModeLayout layout = ModeLayout::field(label, cutoff);
  std::vector<Term> terms;
  terms.reserve(cutoff + 1);
  Complex c = std::exp(-0.5 * std::norm(alpha));
  for (unsigned n = 0; n <= cutoff; ++n) {
    if (n > 0) c *= alpha / std::sqrt(static_cast<double>(n));
    terms.push_back({layout.set_occupation(0, 0, n), c});
  }
  return PureState(layout, std::move(terms)).normalized();
}

PureState coherent_state(Complex alpha, const CutoffPolicy& policy, const std::string& label) {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw std::invalid_argument("coherent amplitude must be finite");
  }
  return coherent_state(alpha, policy.cutoff_for(std::abs(alpha) * policy.headroom_factor), label);
}

PureState tensor(const PureState& a, const PureState& b) {
  ModeLayout layout = a.layout().concat(b.layout());
  std::vector<size_t> left(a.layout().size()), right(b.layout().size());
  for (size_t i = 0; i < left.size(); ++i) left[i] = i;
  for (size_t i = 0; i < right.size(); ++i) right[i] = i;
  unsigned right_bits = b.layout().total_bits();
  std::vector<Term> terms;
  terms.reserve(a.size() * b.size());
  for (const auto& ta : a.terms()) {
    uint64_t high = right_bits == 64 ? 0 : (ta.key << right_bits);
    for (const auto& tb : b.terms()) terms.push_back({high | tb.key, ta.amplitude * tb.amplitude});
  }
  return PureState(std::move(layout), std::move(terms), a.discarded_weight() + b.discarded_weight());
}

PureState recut(const PureState& state, const ModeLayout& target) {
  if (!state.layout().compatible_with(target)) throw LayoutError("recut target has different modes");
  if (state.layout() == target) return state;
  std::vector<size_t> all(target.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<Term> terms;
  double dropped = 0.0;
  for (const auto& t : state.terms()) {
    bool fits = true;
    for (size_t m = 0; m < target.size(); ++m) fits = fits && state.layout().occupation(t.key, m) <= target[m].cutoff;
    if (fits) {
      terms.push_back({remap_key(t.key, state.layout(), target, all), t.amplitude});
    } else {
      dropped += std::norm(t.amplitude);
    }
  }
  return PureState(target, std::move(terms), state.discarded_weight() + dropped);
}

Complex inner_product(const PureState& a, const PureState& b) {
  if (!a.layout().compatible_with(b.layout())) throw LayoutError("inner product of states on different modes");
  if (!(a.layout() == b.layout())) {
    std::vector<ModeDescriptor> modes = a.layout().modes();
    for (size_t i = 0; i < modes.size(); ++i) modes[i].cutoff = std::max(modes[i].cutoff, b.layout()[i].cutoff);
    ModeLayout common(std::move(modes));
    return inner_product(recut(a, common), recut(b, common));
  }
  Complex sum = 0.0;
  auto ia = a.terms().begin(), ib = b.terms().begin();
  while (ia != a.terms().end() && ib != b.terms().end()) {
    if (ia->key < ib->key) {
      ++ia;
    } else if (ib->key < ia->key) {
      ++ib;
    } else {
      sum += std::conj(ia->amplitude) * ib->amplitude;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

double fidelity(const PureState& a, const PureState& b) {
  for (const PureState* s : {&a, &b}) {
    if (std::abs(s->norm_squared() - 1.0) > 1e-8) throw std::invalid_argument("fidelity requires normalized states");
  }
  return std::min(1.0, std::norm(inner_product(a, b)));
}

Projection project(const PureState& state, const std::vector<std::string>& modes,
                   const std::vector<std::vector<unsigned>>& allowed) {
  if (modes.empty()) throw std::invalid_argument("projection needs at least one mode");
  if (modes.size() != allowed.size()) throw std::invalid_argument("one allowed-occupation list per projected mode");
  const ModeLayout& layout = state.layout();
  std::vector<size_t> selected;
  for (const auto& m : modes) selected.push_back(layout.index_of(m));
  std::vector<size_t> kept;
  for (size_t i = 0; i < layout.size(); ++i) {
    if (std::find(selected.begin(), selected.end(), i) == selected.end()) kept.push_back(i);
  }
  ModeLayout rest = layout.without(selected);

  std::vector<Term> terms;
  for (const auto& t : state.terms()) {
    bool match = true;
    for (size_t s = 0; s < selected.size() && match; ++s) {
      unsigned n = layout.occupation(t.key, selected[s]);
      match = std::find(allowed[s].begin(), allowed[s].end(), n) != allowed[s].end();
    }
    if (match) terms.push_back({remap_key(t.key, layout, rest, kept), t.amplitude});
  }
  PureState branch(rest, std::move(terms), state.discarded_weight());
  double total = state.norm_squared();
  if (total == 0.0) throw std::domain_error("projection of the zero vector");
  Projection out;
  out.probability = branch.norm_squared() / total;
  if (out.probability > 0.0) {
    out.state = branch.normalized();
  } else {
    out.state = PureState(rest, {}, state.discarded_weight());
  }
  return out;
}

PureState slice(const PureState& state, std::span<const size_t> modes, std::span<const unsigned> occupation) {
  const ModeLayout& layout = state.layout();
  std::vector<size_t> kept;
  for (size_t i = 0; i < layout.size(); ++i) {
    if (std::find(modes.begin(), modes.end(), i) == modes.end()) kept.push_back(i);
  }
  ModeLayout rest = layout.without(modes);
  std::vector<Term> terms;
  for (const auto& t : state.terms()) {
    bool match = true;
    for (size_t s = 0; s < modes.size() && match; ++s) match = layout.occupation(t.key, modes[s]) == occupation[s];
    if (match) terms.push_back({remap_key(t.key, layout, rest, kept), t.amplitude});
  }
  return PureState(rest, std::move(terms), state.discarded_weight());
}

Complex mean_field(const PureState& state, const std::string& mode) {
  const ModeLayout& layout = state.layout();
  size_t m = layout.index_of(mode);
  auto terms = state.terms();
  Complex sum = 0.0;
  for (const auto& t : terms) {
    unsigned n = layout.occupation(t.key, m);
    if (n == 0) continue;
    uint64_t lower = layout.set_occupation(t.key, m, n - 1);
    auto it = std::lower_bound(terms.begin(), terms.end(), lower, [](const Term& x, uint64_t k) { return x.key < k; });
    if (it != terms.end() && it->key == lower) sum += std::conj(it->amplitude) * t.amplitude * std::sqrt(double(n));
  }
  return sum / state.norm_squared();
}

std::vector<double> photon_distribution(const PureState& state, const std::string& mode) {
  size_t m = state.layout().index_of(mode);
  std::vector<double> dist(state.layout()[m].cutoff + 1, 0.0);
  for (const auto& t : state.terms()) dist[state.layout().occupation(t.key, m)] += std::norm(t.amplitude);
  double total = state.norm_squared();
  for (auto& p : dist) p /= total;
  return dist;
}

}  // namespace optele
