#include "optele/encodings.h"

#include <cmath>

namespace optele {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// a|H> + b|V> on one rail pair.
PureState polarization(const PolPair& pair, Complex h, Complex v) {
  ModeLayout layout = ModeLayout::polarization(pair);
  const unsigned h_occ[] = {1, 0};
  const unsigned v_occ[] = {0, 1};
  return PureState(layout, {{layout.encode(h_occ), h}, {layout.encode(v_occ), v}});
}

PureState add(const PureState& x, const PureState& y) {
  if (!(x.layout() == y.layout())) throw LayoutError("cannot add states on different layouts");
  std::vector<Term> terms(x.terms().begin(), x.terms().end());
  terms.insert(terms.end(), y.terms().begin(), y.terms().end());
  return PureState(x.layout(), std::move(terms), x.discarded_weight() + y.discarded_weight());
}

}  // namespace

LogicalAmplitudes LogicalAmplitudes::normalized(Complex a, Complex b) {
  double n = std::sqrt(std::norm(a) + std::norm(b));
  if (n == 0.0 || !std::isfinite(n)) throw std::invalid_argument("logical amplitudes must be finite and not both zero");
  return {a / n, b / n};
}

void LogicalAmplitudes::validate() const {
  if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-12) {
    throw std::invalid_argument("logical amplitudes must satisfy |a|^2 + |b|^2 = 1");
  }
}

std::string to_string(BellIndex index) {
  std::string s = index.family == BellFamily::kPhi ? "Phi" : "Psi";
  return s + (index.sign == BellSign::kPlus ? "+" : "-");
}

std::string to_string(Parity p) { return p == Parity::kEven ? "even" : "odd"; }

unsigned EncodingParams::field_cutoff() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be a finite non-negative real");
  return policy.cutoff_for(alpha * policy.headroom_factor);
}

double cat_normalization(double alpha, BellSign sign) {
  double overlap = std::exp(-4.0 * alpha * alpha);
  return 1.0 / std::sqrt(sign == BellSign::kPlus ? 2.0 + 2.0 * overlap : 2.0 - 2.0 * overlap);
}

PureState make_polarization_bell(BellIndex index, const PolPair& first, const PolPair& second) {
  const double s = index.sign == BellSign::kPlus ? 1.0 : -1.0;
  PureState h1 = polarization(first, 1.0, 0.0), v1 = polarization(first, 0.0, 1.0);
  PureState h2 = polarization(second, 1.0, 0.0), v2 = polarization(second, 0.0, 1.0);
  PureState out = index.family == BellFamily::kPhi ? add(tensor(h1, h2), tensor(v1, v2).scaled(s))
                                                   : add(tensor(h1, v2), tensor(v1, h2).scaled(s));
  return out.scaled(kInvSqrt2);
}

PureState make_coherent_bell(BellIndex index, const EncodingParams& params, const std::string& first,
                             const std::string& second) {
  if (params.alpha <= 0.0) throw DegenerateBasis("coherent Bell states need alpha > 0");
  const unsigned cutoff = params.field_cutoff();
  PureState p1 = coherent_state(params.alpha, cutoff, first), m1 = coherent_state(-params.alpha, cutoff, first);
  PureState p2 = coherent_state(params.alpha, cutoff, second), m2 = coherent_state(-params.alpha, cutoff, second);
  const double s = index.sign == BellSign::kPlus ? 1.0 : -1.0;
  PureState out = index.family == BellFamily::kPhi ? add(tensor(p1, p2), tensor(m1, m2).scaled(s))
                                                   : add(tensor(p1, m2), tensor(m1, p2).scaled(s));
  return out.scaled(cat_normalization(params.alpha, index.sign)).normalized();
}

PureState scs_state(Parity parity, double beta, unsigned cutoff, const std::string& label) {
  if (!(beta > 0.0)) {
    if (parity == Parity::kOdd || beta < 0.0 || !std::isfinite(beta)) {
      throw DegenerateBasis("superposed coherent state needs beta > 0");
    }
    return PureState::vacuum(ModeLayout::field(label, cutoff));
  }
  PureState plus = coherent_state(beta, cutoff, label);
  PureState minus = coherent_state(-beta, cutoff, label);
  return add(plus, minus.scaled(parity == Parity::kEven ? 1.0 : -1.0)).normalized();
}

PureState scs_state(Parity parity, double beta, const EncodingParams& params, const std::string& label) {
  return scs_state(parity, beta, params.policy.cutoff_for(beta * params.policy.headroom_factor), label);
}

PureState make_hybrid_qubit(const LogicalAmplitudes& amps, const EncodingParams& params, const LogicalModes& modes) {
  amps.validate();
  const unsigned cutoff = params.field_cutoff();
  PureState zero = tensor(polarization(modes.pol, kInvSqrt2, kInvSqrt2), coherent_state(params.alpha, cutoff, modes.field));
  PureState one = tensor(polarization(modes.pol, kInvSqrt2, -kInvSqrt2), coherent_state(-params.alpha, cutoff, modes.field));
  return add(zero.scaled(amps.a), one.scaled(amps.b));
}

PureState make_hybrid_channel(const EncodingParams& params, const LogicalModes& alice, const LogicalModes& bob) {
  const LogicalAmplitudes zero{1.0, 0.0}, one{0.0, 1.0};
  PureState first = tensor(make_hybrid_qubit(zero, params, alice), make_hybrid_qubit(zero, params, bob));
  PureState second = tensor(make_hybrid_qubit(one, params, alice), make_hybrid_qubit(one, params, bob));
  return add(first, second).scaled(kInvSqrt2);
}

PureState make_polarization_qubit(const LogicalAmplitudes& amps, const PolPair& pair) {
  amps.validate();
  return polarization(pair, amps.a, amps.b);
}

PureState make_coherent_qubit(const LogicalAmplitudes& amps, const EncodingParams& params, const std::string& field) {
  amps.validate();
  const unsigned cutoff = params.field_cutoff();
  PureState out = add(coherent_state(params.alpha, cutoff, field).scaled(amps.a),
                      coherent_state(-params.alpha, cutoff, field).scaled(amps.b));
  if (out.norm() < 1e-9) throw DegenerateBasis("a|alpha> + b|-alpha> is (numerically) the zero vector");
  return out.normalized();
}

PureState make_logical_qubit(const LogicalAmplitudes& amps, const EncodingParams& params, const LogicalModes& modes) {
  switch (params.encoding) {
    case Encoding::kPolarization: return make_polarization_qubit(amps, modes.pol);
    case Encoding::kCoherent: return make_coherent_qubit(amps, params, modes.field);
    case Encoding::kHybrid: return make_hybrid_qubit(amps, params, modes);
  }
  throw std::invalid_argument("unknown encoding");
}

}  // namespace optele
