#include "optele/optics.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "optele/expm.h"

namespace optele {

namespace jones {

Jones identity() { return Jones::Identity(); }

Jones swap() {
  Jones j;
  j << 0.0, 1.0, 1.0, 0.0;
  return j;
}

Jones half_wave_plate(double angle) {
  Jones j;
  j << std::cos(2 * angle), std::sin(2 * angle), std::sin(2 * angle), -std::cos(2 * angle);
  return j;
}

Jones diagonal() { return half_wave_plate(std::numbers::pi / 8); }

Jones phase_v(double theta) {
  Jones j = Jones::Identity();
  j(1, 1) = std::polar(1.0, theta);
  return j;
}

}  // namespace jones

namespace {

uint64_t clear_modes(const ModeLayout& layout, uint64_t key, size_t a, size_t b) {
  return layout.set_occupation(layout.set_occupation(key, a, 0), b, 0);
}

// Fock representation of a two-mode passive unitary, built one creation
// operator at a step: U|p,q> = (1/sqrt p) (U a^dag U^dag) U|p-1,q>. Every step
// is a bounded linear map, so no cancellation-prone binomial sums appear.
class PassiveRepresentation {
 public:
  PassiveRepresentation(const Eigen::Matrix2cd& u, unsigned max_total) : u_(u), stride_(max_total + 1) {
    cache_.resize(stride_ * stride_);
    done_.assign(stride_ * stride_, false);
  }

  // Amplitudes over p' = 0..p+q (second mode holds p+q-p').
  const std::vector<Complex>& column(unsigned p, unsigned q) {
    size_t idx = p * stride_ + q;
    if (done_[idx]) return cache_[idx];
    std::vector<Complex> out;
    if (p == 0 && q == 0) {
      out = {Complex{1.0}};
    } else if (p > 0) {
      out = raise(column(p - 1, q), u_(0, 0), u_(1, 0), p);
    } else {
      out = raise(column(0, q - 1), u_(0, 1), u_(1, 1), q);
    }
    cache_[idx] = std::move(out);
    done_[idx] = true;
    return cache_[idx];
  }

 private:
  static std::vector<Complex> raise(const std::vector<Complex>& v, Complex ca, Complex cb, unsigned count) {
    const size_t m = v.size() - 1;  // photons before raising
    std::vector<Complex> w(m + 2, Complex{});
    for (size_t p = 0; p <= m; ++p) {
      w[p + 1] += ca * std::sqrt(double(p + 1)) * v[p];
      w[p] += cb * std::sqrt(double(m - p + 1)) * v[p];
    }
    double scale = 1.0 / std::sqrt(double(count));
    for (auto& x : w) x *= scale;
    return w;
  }

  Eigen::Matrix2cd u_;
  size_t stride_;
  std::vector<std::vector<Complex>> cache_;
  std::vector<bool> done_;
};

}  // namespace

PureState two_mode_unitary(const PureState& state, const std::string& mode_a, const std::string& mode_b,
                           const Eigen::Matrix2cd& u) {
  const ModeLayout& layout = state.layout();
  size_t a = layout.index_of(mode_a);
  size_t b = layout.index_of(mode_b);
  if (a == b) throw std::invalid_argument("two-mode element applied to the same mode twice");
  if ((u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("two-mode transformation is not unitary");
  }
  const unsigned limit = std::min(layout[a].cutoff, layout[b].cutoff);

  struct Item {
    uint64_t rest;
    unsigned total;
    unsigned p;
    Complex amp;
  };
  std::vector<Item> items;
  items.reserve(state.size());
  double dropped = 0.0;
  for (const auto& t : state.terms()) {
    unsigned p = layout.occupation(t.key, a);
    unsigned q = layout.occupation(t.key, b);
    if (p + q > limit) {
      dropped += std::norm(t.amplitude);
      continue;
    }
    items.push_back({clear_modes(layout, t.key, a, b), p + q, p, t.amplitude});
  }
  std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) {
    return x.rest != y.rest ? x.rest < y.rest : x.total < y.total;
  });

  PassiveRepresentation rep(u, limit);
  std::vector<Term> out;
  out.reserve(items.size() * 4);
  std::vector<Complex> acc;
  for (size_t i = 0; i < items.size();) {
    size_t j = i;
    const unsigned total = items[i].total;
    acc.assign(total + 1, Complex{});
    for (; j < items.size() && items[j].rest == items[i].rest && items[j].total == total; ++j) {
      const auto& col = rep.column(items[j].p, total - items[j].p);
      for (unsigned k = 0; k <= total; ++k) acc[k] += items[j].amp * col[k];
    }
    for (unsigned k = 0; k <= total; ++k) {
      if (std::abs(acc[k]) < kPruneThreshold) continue;
      uint64_t key = layout.set_occupation(layout.set_occupation(items[i].rest, a, k), b, total - k);
      out.push_back({key, acc[k]});
    }
    i = j;
  }
  return PureState(layout, std::move(out), state.discarded_weight() + dropped);
}

PureState beam_splitter_5050(const PureState& state, const std::string& mode_a, const std::string& mode_b) {
  const ModeLayout& layout = state.layout();
  if (layout[layout.index_of(mode_a)].kind != layout[layout.index_of(mode_b)].kind) {
    throw std::invalid_argument("beam splitter needs two field modes or two polarization rails");
  }
  const double r = std::numbers::sqrt2 / 2;
  Eigen::Matrix2cd u;
  u << r, r, r, -r;
  return two_mode_unitary(state, mode_a, mode_b, u);
}

PureState phase_shift(const PureState& state, const std::string& mode, double theta) {
  size_t m = state.layout().index_of(mode);
  std::vector<Term> out(state.terms().begin(), state.terms().end());
  for (auto& t : out) t.amplitude *= std::polar(1.0, theta * state.layout().occupation(t.key, m));
  return PureState(state.layout(), std::move(out), state.discarded_weight());
}

PureState displacement(const PureState& state, const std::string& mode, Complex beta, const CutoffPolicy& policy) {
  if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag())) throw std::invalid_argument("displacement must be finite");
  const ModeLayout& layout = state.layout();
  size_t m = layout.index_of(mode);
  if (layout[m].kind != ModeKind::kField) throw std::invalid_argument("displacement acts on field modes");
  if (beta == Complex{}) return state;
  const unsigned cutoff = layout[m].cutoff;

  unsigned highest = 0;
  for (const auto& t : state.terms()) highest = std::max(highest, layout.occupation(t.key, m));
  // The generator is truncated at `dim`; every coherent component stays below
  // amplitude sqrt(highest) + |beta| along the displacement path.
  CutoffPolicy wide = policy;
  wide.hard_limit = 4 * policy.hard_limit;
  const unsigned dim = std::max(cutoff, wide.cutoff_for(std::sqrt(double(highest)) + std::abs(beta))) + 1;

  Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(dim, dim);
  for (unsigned n = 0; n + 1 < dim; ++n) {
    double s = std::sqrt(double(n + 1));
    gen(n + 1, n) = beta * s;
    gen(n, n + 1) = -std::conj(beta) * s;
  }
  const Eigen::MatrixXcd d = expm(gen).leftCols(cutoff + 1);

  std::unordered_map<uint64_t, Eigen::VectorXcd> fibres;
  for (const auto& t : state.terms()) {
    auto [it, fresh] = fibres.try_emplace(layout.set_occupation(t.key, m, 0));
    if (fresh) it->second = Eigen::VectorXcd::Zero(cutoff + 1);
    it->second(layout.occupation(t.key, m)) += t.amplitude;
  }
  std::vector<Term> out;
  double leaked = 0.0;
  for (const auto& [rest, v] : fibres) {
    Eigen::VectorXcd w = d * v;
    leaked += w.tail(dim - cutoff - 1).squaredNorm();
    for (unsigned n = 0; n <= cutoff; ++n) out.push_back({layout.set_occupation(rest, m, n), w(n)});
  }
  if (leaked > policy.tail_epsilon * state.norm_squared()) {
    throw CutoffSaturation("displacement pushes weight " + std::to_string(leaked) + " above cutoff " +
                           std::to_string(cutoff) + " of mode '" + mode + "'");
  }
  return PureState(layout, std::move(out), state.discarded_weight() + leaked);
}

PureState wave_plate(const PureState& state, const PolPair& pair, const Jones& jones) {
  const ModeLayout& layout = state.layout();
  for (const auto& rail : {pair.h(), pair.v()}) {
    if (layout[layout.index_of(rail)].kind != ModeKind::kPolarizationRail) {
      throw std::invalid_argument("wave plate target '" + rail + "' is not a polarization rail");
    }
  }
  return two_mode_unitary(state, pair.h(), pair.v(), jones);
}

PureState pbs_route(const PureState& state, const PolPair& first, const PolPair& second) {
  const ModeLayout& layout = state.layout();
  size_t v1 = layout.index_of(first.v());
  size_t v2 = layout.index_of(second.v());
  layout.index_of(first.h());
  layout.index_of(second.h());
  if (layout[v1].cutoff != layout[v2].cutoff) throw LayoutError("PBS needs equal cutoffs on the exchanged V rails");
  std::vector<Term> out(state.terms().begin(), state.terms().end());
  for (auto& t : out) {
    unsigned n1 = layout.occupation(t.key, v1);
    unsigned n2 = layout.occupation(t.key, v2);
    t.key = layout.set_occupation(layout.set_occupation(t.key, v1, n2), v2, n1);
  }
  return PureState(layout, std::move(out), state.discarded_weight());
}

PureState cross_kerr(const PureState& state, const std::string& mode_a, const std::string& mode_b, double theta) {
  const ModeLayout& layout = state.layout();
  size_t a = layout.index_of(mode_a);
  size_t b = layout.index_of(mode_b);
  if (a == b) throw std::invalid_argument("cross-Kerr needs two distinct modes");
  std::vector<Term> out(state.terms().begin(), state.terms().end());
  for (auto& t : out) {
    double n = double(layout.occupation(t.key, a)) * layout.occupation(t.key, b);
    t.amplitude *= std::polar(1.0, theta * n);
  }
  return PureState(layout, std::move(out), state.discarded_weight());
}

PureState conditional_kerr(const PureState& state, const PolPair& pair, const std::string& field, double theta) {
  state.layout().index_of(pair.h());
  return cross_kerr(state, pair.v(), field, theta);
}

PureState apply(const PureState& state, const Element& element, const CutoffPolicy& policy) {
  return std::visit(
      [&](const auto& e) -> PureState {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, BeamSplitterElement>) {
          return beam_splitter_5050(state, e.a, e.b);
        } else if constexpr (std::is_same_v<T, PhaseShiftElement>) {
          return phase_shift(state, e.mode, e.theta);
        } else if constexpr (std::is_same_v<T, DisplacementElement>) {
          return displacement(state, e.mode, e.beta, policy);
        } else if constexpr (std::is_same_v<T, WavePlateElement>) {
          return wave_plate(state, e.pair, e.jones);
        } else if constexpr (std::is_same_v<T, PbsElement>) {
          return pbs_route(state, e.first, e.second);
        } else if constexpr (std::is_same_v<T, CrossKerrElement>) {
          return cross_kerr(state, e.a, e.b, e.theta);
        } else {
          return conditional_kerr(state, e.pair, e.field, e.theta);
        }
      },
      element);
}

std::string to_string(Encoding e) {
  switch (e) {
    case Encoding::kPolarization: return "polarization";
    case Encoding::kCoherent: return "coherent";
    case Encoding::kHybrid: return "hybrid";
  }
  return "?";
}

Encoding encoding_from_string(const std::string& s) {
  if (s == "polarization") return Encoding::kPolarization;
  if (s == "coherent") return Encoding::kCoherent;
  if (s == "hybrid") return Encoding::kHybrid;
  throw std::invalid_argument("unknown encoding '" + s + "'");
}

namespace {

PureState ideal_coherent_z(const PureState& state, const LogicalModes& modes) {
  const ModeLayout& layout = state.layout();
  size_t m = layout.index_of(modes.field);
  const unsigned cutoff = layout[m].cutoff;
  if (modes.alpha <= 0.0) throw std::invalid_argument("ideal Z needs alpha > 0");
  PureState plus = coherent_state(modes.alpha, cutoff);
  PureState minus = coherent_state(-modes.alpha, cutoff);
  Eigen::VectorXcd e_plus = Eigen::VectorXcd::Zero(cutoff + 1), e_minus = e_plus;
  for (const auto& t : plus.terms()) e_plus(plus.layout().occupation(t.key, 0)) = t.amplitude;
  for (const auto& t : minus.terms()) e_minus(minus.layout().occupation(t.key, 0)) = t.amplitude;

  Eigen::Matrix<Complex, Eigen::Dynamic, 2> basis(cutoff + 1, 2);
  basis.col(0) = e_plus;
  basis.col(1) = e_minus;
  const Eigen::Matrix2cd gram = basis.adjoint() * basis;
  const auto solver = gram.partialPivLu();

  std::unordered_map<uint64_t, Eigen::VectorXcd> fibres;
  for (const auto& t : state.terms()) {
    auto [it, fresh] = fibres.try_emplace(layout.set_occupation(t.key, m, 0));
    if (fresh) it->second = Eigen::VectorXcd::Zero(cutoff + 1);
    it->second(layout.occupation(t.key, m)) += t.amplitude;
  }
  std::vector<Term> out;
  for (const auto& [rest, v] : fibres) {
    Eigen::Vector2cd c = solver.solve(basis.adjoint() * v);
    Eigen::VectorXcd residual = v - basis * c;
    if (residual.norm() > 1e-8 * v.norm() + 1e-12) {
      throw std::invalid_argument("state has field content outside span{|alpha>, |-alpha>}");
    }
    Eigen::VectorXcd w = c(0) * e_plus - c(1) * e_minus;
    for (unsigned n = 0; n <= cutoff; ++n) out.push_back({layout.set_occupation(rest, m, n), w(n)});
  }
  // The logical map is not unitary on the non-orthogonal basis; keep the
  // input norm so that it acts as a logical Pauli on physical states.
  PureState z(layout, std::move(out), state.discarded_weight());
  if (z.empty()) return z;
  return z.scaled(state.norm() / z.norm());
}

}  // namespace

PureState pauli_x(const PureState& state, Encoding encoding, const LogicalModes& modes) {
  switch (encoding) {
    case Encoding::kPolarization:
      return wave_plate(state, modes.pol, jones::swap());
    case Encoding::kCoherent:
      return phase_shift(state, modes.field, std::numbers::pi);
    case Encoding::kHybrid:
      return phase_shift(phase_shift(state, modes.pol.v(), std::numbers::pi), modes.field, std::numbers::pi);
  }
  throw std::invalid_argument("unknown encoding");
}

PureState pauli_z(const PureState& state, Encoding encoding, const LogicalModes& modes, bool ideal_z) {
  switch (encoding) {
    case Encoding::kPolarization:
      return phase_shift(state, modes.pol.v(), std::numbers::pi);
    case Encoding::kCoherent:
      if (!ideal_z) {
        throw NotPhysicallyImplementable(
            "Z on coherent-state qubits is not physically implementable with linear optics; set ideal_z for the "
            "idealized operation");
      }
      return ideal_coherent_z(state, modes);
    case Encoding::kHybrid:
      return wave_plate(state, modes.pol, jones::swap());
  }
  throw std::invalid_argument("unknown encoding");
}

}  // namespace optele
