#include "optele/measurement.h"

#include <cmath>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>

#include "gtest/gtest.h"
#include "optele/optics.h"
#include "test_util.h"

using namespace optele;

namespace {

DetectorReading pnr(unsigned n) { return {DetectorKind::kPnr, n}; }
DetectorReading pnpd(ParityClass c) { return {DetectorKind::kPnpd, static_cast<unsigned>(c)}; }

ModeLayout two_fields(unsigned c) { return ModeLayout({{"a", ModeKind::kField, c}, {"b", ModeKind::kField, c}}); }

}  // namespace

TEST(ParityClass, classes) {
  EXPECT_EQ(parity_class(0), ParityClass::kZero);
  EXPECT_EQ(parity_class(2), ParityClass::kEvenNonzero);
  EXPECT_EQ(parity_class(7), ParityClass::kOdd);
  EXPECT_EQ(to_string(ParityClass::kEvenNonzero), "even");
}

TEST(Enumerate, hong_ou_mandel_counts) {
  const unsigned one_one[] = {1, 1};
  PureState s = beam_splitter_5050(PureState::basis(two_fields(2), one_one), "a", "b");
  OutcomeDistribution d = enumerate_outcomes(s, {{{"a"}}, {{"b"}}});
  EXPECT_EQ(d.records.size(), 2u);
  EXPECT_NEAR(d.probability_of({pnr(2), pnr(0)}), 0.5, 1e-15);
  EXPECT_NEAR(d.probability_of({pnr(0), pnr(2)}), 0.5, 1e-15);
  EXPECT_EQ(d.probability_of({pnr(1), pnr(1)}), 0.0);
  EXPECT_EQ(d.find({pnr(1), pnr(1)}), nullptr);
}

TEST(Enumerate, coherent_click_and_parity_statistics) {
  const double alpha = 1.3, x = alpha * alpha;
  PureState s = coherent_state(alpha, CutoffPolicy{});
  OutcomeDistribution onoff = enumerate_outcomes(s, {{{"f"}, DetectorKind::kOnOff}});
  EXPECT_NEAR(onoff.probability_of({{DetectorKind::kOnOff, 1}}), 1 - std::exp(-x), 1e-12);

  OutcomeDistribution par = enumerate_outcomes(s, {{{"f"}, DetectorKind::kPnpd}});
  EXPECT_NEAR(par.probability_of({pnpd(ParityClass::kZero)}), std::exp(-x), 1e-12);
  EXPECT_NEAR(par.probability_of({pnpd(ParityClass::kEvenNonzero)}), std::exp(-x) * (std::cosh(x) - 1), 1e-12);
  EXPECT_NEAR(par.probability_of({pnpd(ParityClass::kOdd)}), std::exp(-x) * std::sinh(x), 1e-12);
}

TEST(Enumerate, post_states_and_mixtures) {
  ModeLayout l = two_fields(4);
  const unsigned a[] = {2, 0}, b[] = {4, 1};
  const double r = std::sqrt(0.5);
  PureState s(l, {{l.encode(a), r}, {l.encode(b), r}});
  OutcomeDistribution pnr_dist = enumerate_outcomes(s, {{{"a"}}});
  ASSERT_EQ(pnr_dist.records.size(), 2u);
  EXPECT_NEAR(std::abs(pnr_dist.records[1].post_state().amplitude(std::vector<unsigned>{1})), 1.0, 1e-15);

  OutcomeDistribution par = enumerate_outcomes(s, {{{"a"}, DetectorKind::kPnpd}});
  ASSERT_EQ(par.records.size(), 1u);
  EXPECT_EQ(par.records[0].components.size(), 2u);
  EXPECT_THROW(par.records[0].post_state(), MixedPostState);
}

TEST(Enumerate, errors) {
  PureState s = PureState::vacuum(two_fields(2));
  EXPECT_THROW(enumerate_outcomes(s, {}), std::invalid_argument);
  EXPECT_THROW(enumerate_outcomes(s, {{{"a"}}, {{"a", "b"}}}), std::invalid_argument);
  EXPECT_THROW(enumerate_outcomes(s, {{{"zz"}}}), LayoutError);
}

TEST(Enumerate, partition_completeness_on_random_states) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    PureState s = test::random_state(rng, {{"a", ModeKind::kField, 4}, {"b", ModeKind::kField, 3}, {"c", ModeKind::kField, 2}});
    for (DetectorKind kind : {DetectorKind::kPnr, DetectorKind::kOnOff, DetectorKind::kPnpd}) {
      OutcomeDistribution d = enumerate_outcomes(s, {{{"a", "c"}, kind}, {{"b"}, kind}});
      EXPECT_NEAR(d.total_probability(), 1.0, 1e-10);
      for (const auto& rec : d.records) {
        double sum = 0.0;
        for (const auto& c : rec.components) sum += c.probability;
        EXPECT_NEAR(sum, rec.probability, 1e-14);
      }
    }
  }
}

TEST(Seeds, splitmix_reference_and_uniform_range) {
  // splitmix64 first output from state 0.
  EXPECT_EQ(derive_seed(0, 0), 0xE220A8397B1DCDAFull);
  EXPECT_EQ(derive_seed(42, 7), derive_seed(42, 7));
  EXPECT_NE(derive_seed(42, 7), derive_seed(42, 8));
  for (uint64_t t = 0; t < 1000; ++t) {
    double u = uniform_from_seed(derive_seed(1, t));
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Sampling, chi_squared_agreement_with_exact_distribution) {
  const double alpha = 1.2;
  PureState s = coherent_state(alpha, CutoffPolicy{});
  OutcomeDistribution d = enumerate_outcomes(s, {{{"f"}}});
  const uint64_t trials = 100000;
  std::vector<double> observed(d.records.size(), 0.0);
  for (uint64_t t = 0; t < trials; ++t) observed[sample_index(d, derive_seed(2024, t))] += 1;

  // Pool bins with expected count < 5 into one.
  double chi2 = 0.0, pooled_obs = 0.0, pooled_exp = 0.0;
  int bins = 0;
  for (size_t i = 0; i < d.records.size(); ++i) {
    double e = d.records[i].probability * trials;
    if (e < 5) {
      pooled_obs += observed[i];
      pooled_exp += e;
      continue;
    }
    chi2 += (observed[i] - e) * (observed[i] - e) / e;
    ++bins;
  }
  if (pooled_exp > 0) {
    chi2 += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++bins;
  }
  boost::math::chi_squared dist(bins - 1);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 1e-3) << chi2;
}

TEST(Sampling, sample_outcome_is_deterministic) {
  PureState s = coherent_state(0.9, CutoffPolicy{});
  std::vector<Detector> det = {{{"f"}}};
  EXPECT_EQ(sample_outcome(s, det, 77).readings, sample_outcome(s, det, 77).readings);
  EXPECT_THROW(sample_index(OutcomeDistribution{}, 1), std::invalid_argument);
}
