#include "optele/teleport.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

namespace optele {

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::kSuccess: return "success";
    case RunStatus::kCorrectionIncomplete: return "correction_incomplete";
    case RunStatus::kFailure: return "failure";
  }
  return "?";
}

LogicalModes input_modes(double alpha) { return {{"in"}, "in.f", alpha}; }
LogicalModes alice_modes(double alpha) { return {{"a"}, "a.f", alpha}; }
LogicalModes bob_modes(double alpha) { return {{"b"}, "b.f", alpha}; }

double analytic_success_probability(Encoding encoding, double alpha, const LogicalAmplitudes& amps, bool ideal_z) {
  const double a2 = alpha * alpha;
  switch (encoding) {
    case Encoding::kHybrid:
      return 1.0 - std::exp(-2.0 * a2) / 2.0;
    case Encoding::kPolarization:
      return 0.5;
    case Encoding::kCoherent: {
      const double overlap = std::exp(-2.0 * a2);  // <alpha|-alpha>
      const double channel = 2.0 + 2.0 * overlap * overlap;
      if (!ideal_z) return 2.0 * overlap * (std::cosh(2.0 * a2) - 1.0) / channel;
      const double input_norm = std::norm(amps.a) + std::norm(amps.b) + 2.0 * std::real(std::conj(amps.a) * amps.b) * overlap;
      const double fail = overlap * std::norm(amps.a + amps.b) * (2.0 + 2.0 * overlap) / (channel * input_norm);
      return 1.0 - fail;
    }
  }
  return 0.0;
}

PureState apply_feedforward(const PureState& state, Encoding encoding, const LogicalModes& modes, FeedForward ff,
                            bool ideal_z) {
  PureState out = state;
  if (ff.k) out = pauli_z(out, encoding, modes, ideal_z);
  if (ff.j) out = pauli_x(out, encoding, modes);
  return out;
}

FeedForward polarization_correction(BellClass bp_class) {
  switch (bp_class) {
    case BellClass::kPhiPlus: return {0, 0};
    case BellClass::kPhiMinus: return {0, 1};
    case BellClass::kPsiPlus: return {1, 0};
    case BellClass::kPsiMinus: return {1, 1};
    case BellClass::kFail: break;
  }
  throw std::invalid_argument("no correction for a failed Bell measurement");
}

FeedForward coherent_correction(BellClass b_alpha_class) { return polarization_correction(b_alpha_class); }

namespace {

struct Corrected {
  PureState state;
  double fidelity = 0.0;
};

// Applies `ff` to every component and returns the dominant corrected state
// with the probability-weighted fidelity.
Corrected correct_components(const std::vector<FineBranch>& components, const PureState& target, Encoding encoding,
                             const LogicalModes& bob, std::optional<FeedForward> ff, bool ideal_z) {
  Corrected out;
  double weight = 0.0, best = -1.0;
  for (const auto& c : components) {
    PureState s = ff ? apply_feedforward(c.post_state, encoding, bob, *ff, ideal_z) : c.post_state;
    out.fidelity += c.probability * fidelity(s, target);
    weight += c.probability;
    if (c.probability > best) {
      best = c.probability;
      out.state = std::move(s);
    }
  }
  out.fidelity /= weight;
  return out;
}

double max_discarded(const std::vector<FineBranch>& components) {
  double d = 0.0;
  for (const auto& c : components) d = std::max(d, c.post_state.discarded_weight());
  return d;
}

void finalize(Metrics& m, const TeleportConfig& config) {
  double success = 0.0, bsm = 0.0, fsum = 0.0;
  m.min_fidelity_on_success = std::numeric_limits<double>::infinity();
  for (const auto& b : m.branches) {
    if (b.status != RunStatus::kFailure) bsm += b.probability;
    if (b.status == RunStatus::kSuccess) {
      success += b.probability;
      fsum += b.probability * b.fidelity_to_input.value();
      m.min_fidelity_on_success = std::min(m.min_fidelity_on_success, *b.fidelity_to_input);
    }
  }
  if (success == 0.0) m.min_fidelity_on_success = 0.0;
  m.encoding = config.encoding;
  m.alpha = config.alpha;
  m.exact_success_probability = success;
  m.success_probability = success;
  m.bsm_success_probability = bsm;
  m.mean_fidelity_on_success = success > 0.0 ? fsum / success : 0.0;
  m.analytic_success_probability =
      analytic_success_probability(config.encoding, config.alpha, config.amps, config.ideal_z);

  if (config.sampled) {
    OutcomeDistribution dist;
    for (const auto& b : m.branches) dist.records.push_back({{}, b.probability, {}});
    uint64_t hits = 0;
    for (uint64_t t = 0; t < config.sampled->trials; ++t) {
      size_t idx = sample_index(dist, derive_seed(config.sampled->seed, t));
      hits += m.branches[idx].status == RunStatus::kSuccess;
    }
    m.trials = config.sampled->trials;
    m.success_probability = m.trials ? double(hits) / double(m.trials) : 0.0;
  }
}

EncodingParams params_for(const TeleportConfig& config) {
  config.amps.validate();
  return {config.encoding, config.alpha, config.policy};
}

}  // namespace

Metrics teleport_hybrid(const TeleportConfig& config) {
  if (config.encoding != Encoding::kHybrid) throw std::invalid_argument("teleport_hybrid needs the hybrid encoding");
  const EncodingParams params = params_for(config);
  const LogicalModes in = input_modes(config.alpha), alice = alice_modes(config.alpha), bob = bob_modes(config.alpha);
  PureState state = tensor(make_hybrid_qubit(config.amps, params, in), make_hybrid_channel(params, alice, bob));
  const PureState target = make_hybrid_qubit(config.amps, params, bob);

  Metrics m;
  m.cutoff_used = params.field_cutoff();
  for (const auto& r : hybrid_bsm(state, in, alice)) {
    TeleportRun run;
    run.outcome = to_string(r.b_alpha) + " " + to_string(r.b_p);
    run.classification = to_string(r.b_alpha_class) + "/" + to_string(r.b_p_class);
    run.feedforward = r.feedforward;
    run.probability = r.probability;
    Corrected c = correct_components(r.components, target, Encoding::kHybrid, bob, r.feedforward, false);
    run.bob_state = std::move(c.state);
    if (r.feedforward) {
      run.status = RunStatus::kSuccess;
      run.fidelity_to_input = c.fidelity;
    }
    m.discarded_weight = std::max(m.discarded_weight, max_discarded(r.components));
    m.branches.push_back(std::move(run));
  }
  finalize(m, config);
  return m;
}

Metrics teleport_polarization(const TeleportConfig& config) {
  if (config.encoding != Encoding::kPolarization) {
    throw std::invalid_argument("teleport_polarization needs the polarization encoding");
  }
  config.amps.validate();
  const LogicalModes in = input_modes(0.0), alice = alice_modes(0.0), bob = bob_modes(0.0);
  PureState state = tensor(make_polarization_qubit(config.amps, in.pol), make_polarization_bell(kPhiPlus, alice.pol, bob.pol));
  const PureState target = make_polarization_qubit(config.amps, bob.pol);

  Metrics m;
  for (const auto& b : run_b_p(state, in.pol, alice.pol)) {
    TeleportRun run;
    run.outcome = to_string(b.label);
    run.classification = to_string(b.classification);
    run.probability = b.probability;
    std::optional<FeedForward> ff;
    if (b.classification != BellClass::kFail) ff = polarization_correction(b.classification);
    run.feedforward = ff;
    Corrected c = correct_components(b.components, target, Encoding::kPolarization, bob, ff, false);
    run.bob_state = std::move(c.state);
    if (ff) {
      run.status = RunStatus::kSuccess;
      run.fidelity_to_input = c.fidelity;
    }
    m.branches.push_back(std::move(run));
  }
  finalize(m, config);
  return m;
}

Metrics teleport_coherent(const TeleportConfig& config) {
  if (config.encoding != Encoding::kCoherent) throw std::invalid_argument("teleport_coherent needs the coherent encoding");
  const EncodingParams params = params_for(config);
  const LogicalModes in = input_modes(config.alpha), alice = alice_modes(config.alpha), bob = bob_modes(config.alpha);
  PureState state = tensor(make_coherent_qubit(config.amps, params, in.field),
                           make_coherent_bell(kPhiPlus, params, alice.field, bob.field));
  const PureState target = make_coherent_qubit(config.amps, params, bob.field);

  Metrics m;
  m.cutoff_used = params.field_cutoff();
  for (const auto& b : run_b_alpha(state, in.field, alice.field)) {
    TeleportRun run;
    run.outcome = to_string(b.pattern);
    run.classification = to_string(b.classification);
    run.probability = b.probability;
    m.discarded_weight = std::max(m.discarded_weight, max_discarded(b.components));
    if (b.classification == BellClass::kFail) {
      run.bob_state = correct_components(b.components, target, Encoding::kCoherent, bob, std::nullopt, false).state;
      m.branches.push_back(std::move(run));
      continue;
    }
    FeedForward ff = coherent_correction(b.classification);
    run.feedforward = ff;
    if (ff.k && !config.ideal_z) {
      Corrected c = correct_components(b.components, target, Encoding::kCoherent, bob, std::nullopt, false);
      run.status = RunStatus::kCorrectionIncomplete;
      run.bob_state = std::move(c.state);
      run.fidelity_to_input = c.fidelity;
    } else {
      Corrected c = correct_components(b.components, target, Encoding::kCoherent, bob, ff, config.ideal_z);
      run.status = RunStatus::kSuccess;
      run.bob_state = std::move(c.state);
      run.fidelity_to_input = c.fidelity;
    }
    m.branches.push_back(std::move(run));
  }
  finalize(m, config);
  return m;
}

Metrics teleport(const TeleportConfig& config) {
  switch (config.encoding) {
    case Encoding::kHybrid: return teleport_hybrid(config);
    case Encoding::kPolarization: return teleport_polarization(config);
    case Encoding::kCoherent: return teleport_coherent(config);
  }
  throw std::invalid_argument("unknown encoding");
}

SweepResult sweep_alpha(const TeleportConfig& base, const std::vector<double>& alphas) {
  if (alphas.empty()) throw std::invalid_argument("alpha grid must be non-empty");
  for (size_t i = 1; i < alphas.size(); ++i) {
    if (!(alphas[i] > alphas[i - 1])) throw std::invalid_argument("alpha grid must be strictly ascending");
  }
  const size_t workers = std::max(1u, std::thread::hardware_concurrency());
  SweepResult result;
  result.rows.resize(alphas.size());
  for (size_t start = 0; start < alphas.size(); start += workers) {
    std::vector<std::future<Metrics>> batch;
    for (size_t i = start; i < std::min(alphas.size(), start + workers); ++i) {
      TeleportConfig config = base;
      config.alpha = alphas[i];
      batch.push_back(std::async(std::launch::async, [config] { return teleport(config); }));
    }
    for (size_t i = 0; i < batch.size(); ++i) {
      SweepRow& row = result.rows[start + i];
      row.alpha = alphas[start + i];
      row.metrics = batch[i].get();
      row.analytic = row.metrics.analytic_success_probability;
      row.abs_dev = std::abs(row.metrics.success_probability - row.analytic);
      result.max_abs_dev = std::max(result.max_abs_dev, row.abs_dev);
    }
  }
  return result;
}

}  // namespace optele
