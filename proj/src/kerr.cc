#include "optele/kerr.h"

#include <cmath>
#include <numbers>

#include "optele/optics.h"

namespace optele {

KerrGenParams KerrGenParams::from_constraint(double alpha, double gamma) {
  KerrGenParams p{alpha, gamma, 2.0 * std::atan(alpha / gamma)};
  p.validate();
  return p;
}

void KerrGenParams::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite and >= 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite and > 0");
  if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
}

double rotation_exactness_check(const KerrGenParams& params) {
  params.validate();
  const Complex start{params.alpha, params.gamma};
  const Complex target{-params.alpha, params.gamma};
  return std::abs(std::polar(1.0, params.theta) * start - target);
}

namespace {

PureState rail_state(Complex h, Complex v) {
  ModeLayout layout = ModeLayout::polarization({kKerrPair});
  const unsigned h_occ[] = {1, 0};
  const unsigned v_occ[] = {0, 1};
  return PureState(layout, {{layout.encode(h_occ), h}, {layout.encode(v_occ), v}});
}

}  // namespace

PureState generate_hybrid_pair(const KerrGenParams& params, const CutoffPolicy& policy,
                               const HybridPairOptions& options) {
  params.validate();
  const Complex probe{params.alpha, params.gamma};
  const unsigned cutoff = policy.cutoff_for(std::abs(probe));
  const double r = std::numbers::sqrt2 / 2;
  const PolPair pair{kKerrPair};

  PureState s = tensor(rail_state(r, r), coherent_state(probe, cutoff, kKerrField));
  s = conditional_kerr(s, pair, kKerrField, params.theta);
  s = displacement(s, kKerrField, Complex{0.0, -params.gamma}, policy);
  if (options.compensate) s = phase_shift(s, pair.v(), -2.0 * params.gamma * params.alpha);
  if (options.diagonal_basis) s = wave_plate(s, pair, jones::diagonal());
  return s;
}

PureState canonical_hybrid_pair(double alpha, unsigned cutoff, bool diagonal_basis) {
  const double r = std::numbers::sqrt2 / 2;
  PureState first = diagonal_basis ? rail_state(r, r) : rail_state(1.0, 0.0);
  PureState second = diagonal_basis ? rail_state(r, -r) : rail_state(0.0, 1.0);
  PureState a = tensor(first, coherent_state(alpha, cutoff, kKerrField));
  PureState b = tensor(second, coherent_state(-alpha, cutoff, kKerrField));
  std::vector<Term> terms(a.terms().begin(), a.terms().end());
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return PureState(a.layout(), std::move(terms)).normalized();
}

PureState generate_ecs_via_bs(double beta, Parity parity, const CutoffPolicy& policy) {
  const unsigned cutoff = policy.cutoff_for(beta * policy.headroom_factor);
  PureState scs = scs_state(parity, std::numbers::sqrt2 * beta, cutoff, "f1");
  PureState ancilla = PureState::vacuum(ModeLayout::field("f2", cutoff));
  return beam_splitter_5050(tensor(scs, ancilla), "f1", "f2");
}

}  // namespace optele
