#include "optele/bell.h"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "optele/teleport.h"
#include "test_util.h"

using namespace optele;

namespace {

const double r = std::numbers::sqrt2 / 2;

std::map<BellClass, double> by_class(const std::vector<BpBranch>& branches) {
  std::map<BellClass, double> out;
  for (const auto& b : branches) out[b.classification] += b.probability;
  return out;
}

PureState random_two_photon(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ModeLayout l = ModeLayout::polarization({"p1"}).concat(ModeLayout::polarization({"p2"}));
  std::vector<Term> terms;
  for (auto occ : {std::vector<unsigned>{1, 0, 1, 0}, {1, 0, 0, 1}, {0, 1, 1, 0}, {0, 1, 0, 1}}) {
    terms.push_back({l.encode(occ), Complex(g(rng), g(rng))});
  }
  return PureState(l, terms).normalized();
}

}  // namespace

TEST(Bp, identifies_psi_states_with_plate) {
  for (BellIndex i : kAllBell) {
    auto branches = run_b_p(make_polarization_bell(i), {"p1"}, {"p2"});
    auto p = by_class(branches);
    double total = 0.0;
    for (const auto& b : branches) total += b.probability;
    EXPECT_NEAR(total, 1.0, 1e-12);
    if (i.family == BellFamily::kPsi) {
      EXPECT_NEAR(p[bell_class(i)], 1.0, 1e-10) << to_string(i);
    } else {
      EXPECT_NEAR(p[BellClass::kFail], 1.0, 1e-10) << to_string(i);
    }
  }
  // Psi+ gives mixed labels, Psi- equal labels.
  for (const auto& b : run_b_p(make_polarization_bell(kPsiPlus), {"p1"}, {"p2"})) {
    EXPECT_TRUE(b.label == BpLabel::kHV || b.label == BpLabel::kVH) << to_string(b.label);
  }
  for (const auto& b : run_b_p(make_polarization_bell(kPsiMinus), {"p1"}, {"p2"})) {
    EXPECT_TRUE(b.label == BpLabel::kHH || b.label == BpLabel::kVV) << to_string(b.label);
  }
}

TEST(Bp, removing_plate_identifies_phi_states) {
  BpConfig no_plate{false};
  for (BellIndex i : kAllBell) {
    auto p = by_class(run_b_p(make_polarization_bell(i), {"p1"}, {"p2"}, no_plate));
    if (i.family == BellFamily::kPhi) {
      EXPECT_NEAR(p[bell_class(i)], 1.0, 1e-10) << to_string(i);
    } else {
      EXPECT_NEAR(p[BellClass::kFail], 1.0, 1e-10) << to_string(i);
    }
  }
}

TEST(Bp, circuit_matches_projector_oracle) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    PureState s = random_two_photon(rng);
    for (bool plate : {true, false}) {
      BpConfig cfg{plate};
      auto circuit = by_class(run_b_p(s, {"p1"}, {"p2"}, cfg));
      auto oracle = b_p_oracle(s, {"p1"}, {"p2"}, cfg);
      for (auto [cls, p] : oracle) EXPECT_NEAR(circuit[cls], p, 1e-10) << to_string(cls);
    }
  }
  for (BellIndex i : kAllBell) {
    auto circuit = by_class(run_b_p(make_polarization_bell(i), {"p1"}, {"p2"}));
    for (auto [cls, p] : b_p_oracle(make_polarization_bell(i), {"p1"}, {"p2"})) EXPECT_NEAR(circuit[cls], p, 1e-10);
  }
}

TEST(Bp, rejects_wrong_photon_number) {
  ModeLayout l = ModeLayout::polarization({"p1"}).concat(ModeLayout::polarization({"p2"}));
  const unsigned one[] = {1, 0, 0, 0};
  EXPECT_THROW(run_b_p(PureState::basis(l, one), {"p1"}, {"p2"}), std::invalid_argument);
}

TEST(Bp, labels_and_counts) {
  EXPECT_EQ(classify_bp_counts({1, 0, 0, 1}), BpLabel::kHV);
  EXPECT_EQ(classify_bp_counts({0, 1, 1, 0}), BpLabel::kVH);
  EXPECT_EQ(classify_bp_counts({2, 0, 0, 0}), BpLabel::kBunched);
  EXPECT_EQ(classify_bp_counts({1, 1, 0, 0}), BpLabel::kBunched);
  EXPECT_EQ(bp_classification(BpLabel::kBunched), BellClass::kFail);
}

TEST(Bp, sampling_is_deterministic) {
  PureState s = make_polarization_bell(kPsiPlus);
  EXPECT_EQ(sample_b_p(s, {"p1"}, {"p2"}, 5).label, sample_b_p(s, {"p1"}, {"p2"}, 5).label);
  EXPECT_EQ(sample_b_p(s, {"p1"}, {"p2"}, 5).classification, BellClass::kPsiPlus);
}

TEST(BAlpha, table_and_failure_law) {
  for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
    EncodingParams params{Encoding::kCoherent, alpha, {}};
    const double e2 = std::exp(-2 * alpha * alpha), fail_law = 2 * e2 / (1 + e2 * e2);
    for (BellIndex i : kAllBell) {
      double fail = 0.0, right = 0.0, wrong = 0.0;
      for (const auto& b : run_b_alpha(make_coherent_bell(i, params), "f1", "f2")) {
        if (b.classification == BellClass::kFail) {
          fail += b.probability;
          EXPECT_EQ(b.pattern, BAlphaPattern{});
        } else if (b.classification == bell_class(i)) {
          right += b.probability;
        } else {
          wrong += b.probability;
        }
        // Psi states leave the first output port dark on success.
        if (i.family == BellFamily::kPsi && b.classification != BellClass::kFail) {
          EXPECT_EQ(b.pattern.first, ParityClass::kZero);
        }
      }
      EXPECT_NEAR(wrong, 0.0, 1e-12) << alpha << " " << to_string(i);
      const double expected_fail = i.sign == BellSign::kPlus ? fail_law : 0.0;
      EXPECT_NEAR(fail, expected_fail, i.sign == BellSign::kPlus ? 1e-8 : 1e-12) << alpha << " " << to_string(i);
      EXPECT_NEAR(right + fail, 1.0, 1e-10);
    }
  }
  EncodingParams one{Encoding::kCoherent, 1.0, {}};
  double fail = 0.0;
  for (const auto& b : run_b_alpha(make_coherent_bell(kPhiPlus, one), "f1", "f2")) {
    if (b.classification == BellClass::kFail) fail += b.probability;
  }
  EXPECT_NEAR(fail, 0.26580222883407969, 1e-8);
}

TEST(BAlpha, classification_rules) {
  using P = ParityClass;
  EXPECT_EQ(b_alpha_classification({P::kEvenNonzero, P::kZero}), BellClass::kPhiPlus);
  EXPECT_EQ(b_alpha_classification({P::kOdd, P::kZero}), BellClass::kPhiMinus);
  EXPECT_EQ(b_alpha_classification({P::kZero, P::kEvenNonzero}), BellClass::kPsiPlus);
  EXPECT_EQ(b_alpha_classification({P::kZero, P::kOdd}), BellClass::kPsiMinus);
  EXPECT_EQ(b_alpha_classification({P::kZero, P::kZero}), BellClass::kFail);
  EXPECT_EQ(b_alpha_classification({P::kOdd, P::kOdd}), BellClass::kFail);
  EXPECT_EQ(to_string(BAlphaPattern{P::kEvenNonzero, P::kZero}), "(even,0)");
}

TEST(BAlpha, success_post_states_follow_the_four_term_expansion) {
  // Input a|a>+b|-a> with channel N(|a,a>+|-a,-a>): after the BS the four
  // success patterns leave Bob in a|a>+b|-a>, a|a>-b|-a>, a|-a>+b|a>, a|-a>-b|a>.
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (double alpha : {0.6, 1.0, 1.4, 2.0}) {
    EncodingParams params{Encoding::kCoherent, alpha, {}};
    for (int trial = 0; trial < 3; ++trial) {
      auto amps = LogicalAmplitudes::normalized({g(rng), g(rng)}, {g(rng), g(rng)});
      PureState state = tensor(make_coherent_qubit(amps, params, "in"), make_coherent_bell(kPhiPlus, params, "a", "b"));
      std::map<BellClass, PureState> predicted = {
          {BellClass::kPhiPlus, make_coherent_qubit({amps.a, amps.b}, params, "b")},
          {BellClass::kPhiMinus, make_coherent_qubit({amps.a, -amps.b}, params, "b")},
          {BellClass::kPsiPlus, make_coherent_qubit({amps.b, amps.a}, params, "b")},
          {BellClass::kPsiMinus, make_coherent_qubit({-amps.b, amps.a}, params, "b")},
      };
      for (const auto& br : run_b_alpha(state, "in", "a")) {
        if (br.classification == BellClass::kFail) continue;
        for (const auto& c : br.components) {
          EXPECT_GT(fidelity(c.post_state, predicted.at(br.classification)), 1 - 1e-9)
              << alpha << " " << to_string(br.pattern);
        }
      }
    }
  }
}

TEST(FeedForwardTable, rows_and_worked_examples) {
  using P = ParityClass;
  const BAlphaPattern even0{P::kEvenNonzero, P::kZero}, odd0{P::kOdd, P::kZero};
  const BAlphaPattern zero_even{P::kZero, P::kEvenNonzero}, zero_odd{P::kZero, P::kOdd}, vac{};
  EXPECT_EQ(feedforward_rule(even0, BpLabel::kBunched), (FeedForward{0, 0}));
  EXPECT_EQ(feedforward_rule(odd0, BpLabel::kBunched), (FeedForward{0, 1}));
  EXPECT_EQ(feedforward_rule(zero_even, BpLabel::kBunched), (FeedForward{1, 0}));
  EXPECT_EQ(feedforward_rule(zero_odd, BpLabel::kBunched), (FeedForward{1, 1}));
  EXPECT_EQ(feedforward_rule(odd0, BpLabel::kHV), (FeedForward{0, 0}));
  EXPECT_EQ(feedforward_rule(zero_even, BpLabel::kVV), (FeedForward{1, 1}));
  EXPECT_EQ(feedforward_rule(vac, BpLabel::kHV), (FeedForward{0, 1}));
  EXPECT_EQ(feedforward_rule(vac, BpLabel::kVH), (FeedForward{0, 1}));
  EXPECT_EQ(feedforward_rule(vac, BpLabel::kHH), (FeedForward{1, 1}));
  EXPECT_EQ(feedforward_rule(vac, BpLabel::kVV), (FeedForward{1, 1}));
  EXPECT_EQ(feedforward_rule(vac, BpLabel::kBunched), std::nullopt);
}

TEST(FeedForwardTable, total_and_deterministic) {
  const ParityClass classes[] = {ParityClass::kZero, ParityClass::kEvenNonzero, ParityClass::kOdd};
  const BpLabel labels[] = {BpLabel::kHH, BpLabel::kHV, BpLabel::kVH, BpLabel::kVV, BpLabel::kBunched};
  for (auto x : classes) {
    for (auto y : classes) {
      for (auto l : labels) {
        auto first = feedforward_rule({x, y}, l);
        EXPECT_EQ(first, feedforward_rule({x, y}, l));
        const bool b_alpha_ok = b_alpha_classification({x, y}) != BellClass::kFail;
        const bool rescued = x == ParityClass::kZero && y == ParityClass::kZero && separated(l);
        EXPECT_EQ(first.has_value(), b_alpha_ok || rescued);
      }
    }
  }
}

class HybridBsm : public ::testing::TestWithParam<double> {
 protected:
  PureState setup(const LogicalAmplitudes& amps) const {
    const double alpha = GetParam();
    EncodingParams p{Encoding::kHybrid, alpha, {}};
    return tensor(make_hybrid_qubit(amps, p, input_modes(alpha)),
                  make_hybrid_channel(p, alice_modes(alpha), bob_modes(alpha)));
  }
};

TEST_P(HybridBsm, partition_and_order_independence) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  const double alpha = GetParam();
  for (int trial = 0; trial < 3; ++trial) {
    auto amps = LogicalAmplitudes::normalized({g(rng), g(rng)}, {g(rng), g(rng)});
    PureState s = setup(amps);
    auto first = hybrid_bsm(s, input_modes(alpha), alice_modes(alpha));
    auto second = hybrid_bsm(s, input_modes(alpha), alice_modes(alpha), MeasurementOrder::kBpFirst);
    double total = 0.0;
    for (const auto& r : first) total += r.probability;
    EXPECT_NEAR(total, 1.0, 1e-10);
    ASSERT_EQ(first.size(), second.size());
    for (size_t i = 0; i < first.size(); ++i) {
      EXPECT_EQ(first[i].b_alpha, second[i].b_alpha);
      EXPECT_EQ(first[i].b_p, second[i].b_p);
      EXPECT_NEAR(first[i].probability, second[i].probability, 1e-10);
    }
  }
}

TEST_P(HybridBsm, odd_zero_never_gives_equal_labels) {
  const double alpha = GetParam();
  PureState s = setup(LogicalAmplitudes::normalized(0.6, 0.8));
  for (const auto& r : hybrid_bsm(s, input_modes(alpha), alice_modes(alpha))) {
    if (r.b_alpha == BAlphaPattern{ParityClass::kOdd, ParityClass::kZero}) {
      EXPECT_TRUE(r.b_p != BpLabel::kHH && r.b_p != BpLabel::kVV) << to_string(r.b_p);
    }
  }
}

TEST_P(HybridBsm, vacuum_branch_matches_bell_decomposition) {
  // On B_alpha = (0,0) the state is (a|+> + b|->)_in (|+>|0_L> + |->|1_L>)_{A,B};
  // projecting (in, A) on a Bell state leaves Bob in sum <bell|s1 s2> c_{s1} |L(s2)>.
  const double alpha = GetParam();
  EncodingParams p{Encoding::kHybrid, alpha, {}};
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  auto amps = LogicalAmplitudes::normalized({g(rng), g(rng)}, {g(rng), g(rng)});
  PureState s = setup(amps);
  // |s1 s2> amplitudes on (HH, HV, VH, VV) for s in {+, -}.
  auto pm = [](int s) { return std::array<double, 2>{r, s == 0 ? r : -r}; };
  auto bell_vec = [](BellIndex i) {
    if (i == kPsiPlus) return std::array<double, 4>{0, r, r, 0};
    if (i == kPsiMinus) return std::array<double, 4>{0, r, -r, 0};
    if (i == kPhiPlus) return std::array<double, 4>{r, 0, 0, r};
    return std::array<double, 4>{r, 0, 0, -r};
  };
  const Complex c[2] = {amps.a, amps.b};
  auto predicted = [&](BellIndex i) {
    auto bv = bell_vec(i);
    Complex coef[2] = {0, 0};  // on |0_L>, |1_L>
    for (int s1 = 0; s1 < 2; ++s1) {
      for (int s2 = 0; s2 < 2; ++s2) {
        double ov = 0.0;
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y) ov += bv[2 * x + y] * pm(s1)[x] * pm(s2)[y];
        coef[s2] += ov * c[s1];
      }
    }
    return make_hybrid_qubit(LogicalAmplitudes::normalized(coef[0], coef[1]), p, bob_modes(alpha));
  };

  double seen = 0.0;
  for (const auto& res : hybrid_bsm(s, input_modes(alpha), alice_modes(alpha))) {
    if (res.b_alpha != BAlphaPattern{} || !separated(res.b_p)) continue;
    seen += res.probability;
    BellIndex expect = (res.b_p == BpLabel::kHV || res.b_p == BpLabel::kVH) ? kPsiPlus : kPsiMinus;
    for (const auto& comp : res.components) {
      EXPECT_GT(fidelity(comp.post_state, predicted(expect)), 1 - 1e-9) << to_string(res.b_p);
    }
  }
  // Half of the vacuum weight e^{-2 alpha^2} is recovered by B_P.
  EXPECT_NEAR(seen, std::exp(-2 * alpha * alpha) / 2, 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Alphas, HybridBsm, ::testing::Values(0.6, 1.0, 1.4));
