#include "qtrack/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qtrack/quantile_targets.hpp"
#include "qtrack/random.hpp"

using namespace qtrack;

namespace {

QuantileTargets three_targets() { return QuantileTargets({0.25, 0.5, 0.75}); }

EstimatorConfig make_config(Variant v, double step, Transform t = Transform::Identity) {
  EstimatorConfig c;
  c.variant = v;
  c.step = step;
  c.transform = t;
  return c;
}

}  // namespace

TEST(QuantileTargetsTest, ValidatesInput) {
  EXPECT_THROW(QuantileTargets({}), std::invalid_argument);
  EXPECT_THROW(QuantileTargets({0.0, 0.5}), std::invalid_argument);
  EXPECT_THROW(QuantileTargets({0.5, 1.0}), std::invalid_argument);
  EXPECT_THROW(QuantileTargets({0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(QuantileTargets({0.5, 0.25}), std::invalid_argument);
  EXPECT_THROW(QuantileTargets({0.25, std::nan("")}), std::invalid_argument);

  const QuantileTargets t({0.1, 0.9});
  EXPECT_EQ(t.size(), 2u);
  EXPECT_DOUBLE_EQ(t.prob(0), 0.1);
  EXPECT_DOUBLE_EQ(t.prob(1), 0.9);
}

TEST(NearestRankIndex, HandCases) {
  EXPECT_EQ(nearest_rank_index(0.25, 100), 24u);
  EXPECT_EQ(nearest_rank_index(0.5, 100), 49u);
  EXPECT_EQ(nearest_rank_index(0.75, 100), 74u);
  EXPECT_EQ(nearest_rank_index(0.5, 4), 1u);
  EXPECT_EQ(nearest_rank_index(0.5, 5), 2u);
  EXPECT_EQ(nearest_rank_index(0.01, 3), 0u);
  EXPECT_EQ(nearest_rank_index(0.999, 5), 4u);
  EXPECT_EQ(nearest_rank_index(0.5, 1), 0u);
}

TEST(NearestRankIndex, AbsorbsFloatingPointExcess) {
  // 0.55 * 20 evaluates to 11.000000000000002; a naive ceil would skip a rank.
  EXPECT_EQ(nearest_rank_index(0.55, 20), 10u);
  EXPECT_EQ(nearest_rank_index(0.7, 10), 6u);
}

TEST(TransformTest, NamesRoundTrip) {
  EXPECT_STREQ(to_string(Variant::DumiqeMult), "dumiqe");
  EXPECT_STREQ(to_string(Variant::DumiqeAdd), "dumiqe-add");
  EXPECT_STREQ(to_string(Variant::Mdumiqe), "mdumiqe");
  EXPECT_EQ(variant_from_string("dumiqe"), Variant::DumiqeMult);
  EXPECT_EQ(variant_from_string("dumiqe-add"), Variant::DumiqeAdd);
  EXPECT_EQ(variant_from_string("mdumiqe"), Variant::Mdumiqe);
  EXPECT_THROW(variant_from_string("mdumique"), std::invalid_argument);

  EXPECT_STREQ(to_string(Transform::Identity), "identity");
  EXPECT_STREQ(to_string(Transform::Exp), "exp");
  EXPECT_EQ(transform_from_string("identity"), Transform::Identity);
  EXPECT_EQ(transform_from_string("exp"), Transform::Exp);
  EXPECT_THROW(transform_from_string("log"), std::invalid_argument);
}

TEST(TransformTest, ApplyAndInvert) {
  EXPECT_DOUBLE_EQ(apply_transform(-3.5, Transform::Identity), -3.5);
  EXPECT_DOUBLE_EQ(invert_transform(-3.5, Transform::Identity), -3.5);

  EXPECT_DOUBLE_EQ(apply_transform(2.0, Transform::Exp), std::exp(2.0));
  EXPECT_DOUBLE_EQ(invert_transform(std::exp(2.0), Transform::Exp), 2.0);
  for (double x : {-10.0, -0.5, 0.0, 1.0, 100.0}) {
    EXPECT_NEAR(invert_transform(apply_transform(x, Transform::Exp), Transform::Exp), x, 1e-12);
  }
  // The documented range limit is inclusive.
  EXPECT_TRUE(std::isfinite(apply_transform(kExpTransformRange, Transform::Exp)));
  EXPECT_THROW(apply_transform(700.5, Transform::Exp), std::domain_error);
  EXPECT_THROW(apply_transform(-701.0, Transform::Exp), std::domain_error);
  EXPECT_THROW(apply_transform(std::nan(""), Transform::Exp), std::domain_error);
  EXPECT_THROW(invert_transform(0.0, Transform::Exp), std::domain_error);
  EXPECT_THROW(invert_transform(-1.0, Transform::Exp), std::domain_error);
}

TEST(ConfigValidation, StepRanges) {
  const QuantileTargets targets = three_targets();

  auto cfg = make_config(Variant::Mdumiqe, 0.999);
  EXPECT_NO_THROW(cfg.validate(targets));
  cfg.step = 1.0;
  try {
    cfg.validate(targets);
    FAIL() << "step = 1 must be rejected for the coupled variant";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("[0, 1)"), std::string::npos);
  }
  cfg.step = -0.1;
  EXPECT_THROW(cfg.validate(targets), std::invalid_argument);
  cfg.step = std::nan("");
  EXPECT_THROW(cfg.validate(targets), std::invalid_argument);

  // The coupled variant needs a neighbor to bound against.
  auto single = make_config(Variant::Mdumiqe, 0.5);
  EXPECT_THROW(single.validate(QuantileTargets({0.5})), std::invalid_argument);

  // Independent multiplicative trackers only need the decrease factor of the
  // lowest target to stay positive.
  auto mult = make_config(Variant::DumiqeMult, 1.5);
  EXPECT_NO_THROW(mult.validate(QuantileTargets({0.4})));  // 1.5 * 0.6 = 0.9
  mult.step = 2.0;
  EXPECT_THROW(mult.validate(QuantileTargets({0.4})), std::invalid_argument);

  auto add = make_config(Variant::DumiqeAdd, 5.0);
  EXPECT_NO_THROW(add.validate(targets));
}

TEST(ConfigValidation, FloorAndGap) {
  const QuantileTargets targets = three_targets();
  auto cfg = make_config(Variant::Mdumiqe, 0.5);
  cfg.q_min = 0.0;
  EXPECT_THROW(cfg.validate(targets), std::invalid_argument);
  cfg.q_min = -1.0;
  EXPECT_THROW(cfg.validate(targets), std::invalid_argument);
  cfg.q_min = 1e-12;
  cfg.gap_min = -0.5;
  EXPECT_THROW(cfg.validate(targets), std::invalid_argument);
  cfg.gap_min = 0.01;
  EXPECT_NO_THROW(cfg.validate(targets));
}

TEST(StepBounds, WorkedPairValues) {
  EXPECT_DOUBLE_EQ(pair_step_bound(1.0, 2.0, 0.25, 0.5), 0.8);
  EXPECT_DOUBLE_EQ(pair_step_bound(2.0, 4.0, 0.5, 0.75), 1.0);
  EXPECT_DOUBLE_EQ(pair_step_bound(3.0, 3.0, 0.25, 0.5), 0.0);

  const std::vector<double> est = {1.0, 2.0, 4.0};
  const std::vector<double> probs = {0.25, 0.5, 0.75};
  EXPECT_DOUBLE_EQ(step_bound_edge(est, probs, 0), 0.8);
  EXPECT_DOUBLE_EQ(step_bound_interior(est, probs, 1), 0.8);
  EXPECT_DOUBLE_EQ(step_bound_edge(est, probs, 2), 1.0);
}

TEST(StepBounds, ScaleInvariant) {
  Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    const double lo = 0.1 + 10.0 * rng.uniform();
    const double up = lo + 0.01 + 5.0 * rng.uniform();
    const double ql = 0.05 + 0.4 * rng.uniform();
    const double qu = ql + 0.05 + 0.4 * rng.uniform();
    const double base = pair_step_bound(lo, up, ql, qu);
    for (double c : {1e-6, 1e-3, 1e3, 1e6}) {
      EXPECT_NEAR(pair_step_bound(c * lo, c * up, ql, qu), base, 1e-12 * base);
    }
  }
}

TEST(DumiqeMult, BranchArithmetic) {
  const QuantileTargets targets({0.5});
  const auto cfg = make_config(Variant::DumiqeMult, 0.1);

  QuantileBank up(targets, cfg, {1.0});
  up.observe(2.0);
  EXPECT_DOUBLE_EQ(up.estimates()[0], 1.05);

  QuantileBank down(targets, cfg, {1.0});
  down.observe(0.5);
  EXPECT_DOUBLE_EQ(down.estimates()[0], 0.95);

  // A sample equal to the estimate takes the decrease branch.
  QuantileBank tie(targets, cfg, {1.0});
  tie.observe(1.0);
  EXPECT_DOUBLE_EQ(tie.estimates()[0], 0.95);
}

TEST(DumiqeAdd, BranchArithmetic) {
  const QuantileTargets targets({0.25});
  const auto cfg = make_config(Variant::DumiqeAdd, 0.2);

  QuantileBank up(targets, cfg, {0.0});
  up.observe(1.0);
  EXPECT_DOUBLE_EQ(up.estimates()[0], 0.2 * 0.25);

  QuantileBank down(targets, cfg, {0.0});
  down.observe(-1.0);
  EXPECT_DOUBLE_EQ(down.estimates()[0], -(0.2 * 0.75));

  QuantileBank tie(targets, cfg, {0.0});
  tie.observe(0.0);
  EXPECT_DOUBLE_EQ(tie.estimates()[0], -(0.2 * 0.75));

  // Additive trackers accept negative samples and estimates directly.
  QuantileBank neg(targets, cfg, {-5.0});
  EXPECT_NO_THROW(neg.observe(-10.0));
  EXPECT_DOUBLE_EQ(neg.estimates()[0], -5.0 - 0.2 * 0.75);
}

TEST(Mdumiqe, WorkedExample) {
  QuantileBank bank(three_targets(), make_config(Variant::Mdumiqe, 0.5), {1.0, 2.0, 4.0});
  bank.observe(3.0);
  ASSERT_EQ(bank.estimates().size(), 3u);
  EXPECT_DOUBLE_EQ(bank.estimates()[0], 1.1);
  EXPECT_DOUBLE_EQ(bank.estimates()[1], 2.4);
  EXPECT_DOUBLE_EQ(bank.estimates()[2], 3.5);
}

TEST(Mdumiqe, WorkedExampleTie) {
  // x equal to the middle estimate sends it down the decrease branch.
  QuantileBank bank(three_targets(), make_config(Variant::Mdumiqe, 0.5), {1.0, 2.0, 4.0});
  bank.observe(2.0);
  EXPECT_DOUBLE_EQ(bank.estimates()[0], 1.1);
  EXPECT_DOUBLE_EQ(bank.estimates()[1], 1.6);
  EXPECT_DOUBLE_EQ(bank.estimates()[2], 3.5);
}

TEST(Mdumiqe, OrderPreservedUnderRandomStream) {
  const std::vector<double> probs = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  for (double beta : {0.1, 0.5, 0.9, 0.99}) {
    QuantileBank bank(QuantileTargets(probs), make_config(Variant::Mdumiqe, beta),
                      {0.5, 0.7, 0.9, 1.1, 1.3, 1.5, 1.7, 1.9, 2.1});
    Rng rng(static_cast<std::uint64_t>(beta * 1000));
    for (int i = 0; i < 10000; ++i) {
      bank.observe(std::exp(rng.normal()));
      const auto& est = bank.estimates();
      for (std::size_t k = 0; k + 1 < est.size(); ++k) {
        ASSERT_LE(est[k], est[k + 1]) << "beta=" << beta << " step=" << i;
      }
      ASSERT_GE(est.front(), bank.config().q_min);
    }
  }
}

TEST(Mdumiqe, GapContractionBound) {
  // Each adjacent gap shrinks by at most a factor of (1 - beta) per update.
  Rng rng(4242);
  for (int iter = 0; iter < 1000; ++iter) {
    const std::size_t K = 2 + static_cast<std::size_t>(rng.uniform() * 7.0);
    std::vector<double> probs(K);
    double p = 0.02 + 0.1 * rng.uniform();
    for (std::size_t k = 0; k < K; ++k) {
      probs[k] = p;
      p += 0.02 + rng.uniform() * (0.95 - p) / static_cast<double>(K);
    }
    std::vector<double> est(K);
    double e = 0.1 + 10.0 * rng.uniform();
    for (std::size_t k = 0; k < K; ++k) {
      est[k] = e;
      e += 0.01 + 20.0 * rng.uniform();
    }
    const double beta = 0.01 + 0.98 * rng.uniform();
    QuantileBank bank(QuantileTargets(probs), make_config(Variant::Mdumiqe, beta), est);
    const double x = est.front() * 0.5 + rng.uniform() * est.back() * 1.5;
    bank.observe(x);
    const auto& after = bank.estimates();
    for (std::size_t k = 0; k + 1 < K; ++k) {
      const double gap_before = est[k + 1] - est[k];
      const double gap_after = after[k + 1] - after[k];
      const double slack = 1e-12 * (after[k] + after[k + 1] + gap_before);
      ASSERT_GE(gap_after, (1.0 - beta) * gap_before - slack)
          << "iter=" << iter << " k=" << k << " beta=" << beta;
    }
  }
}

TEST(Mdumiqe, FloorClampKeepsEstimatesPositive) {
  // With a wide q split the decrease factor for the lowest tracker can go
  // negative; the floor has to catch it.
  EstimatorConfig cfg = make_config(Variant::Mdumiqe, 0.9);
  cfg.q_min = 0.5;
  QuantileBank bank(QuantileTargets({0.1, 0.9}), cfg, {1.0, 2.0});
  bank.observe(0.6);
  EXPECT_DOUBLE_EQ(bank.estimates()[0], 0.5);
  EXPECT_GT(bank.estimates()[1], bank.estimates()[0]);
}

TEST(Mdumiqe, GapMinReseparatesFloorTies) {
  // Drive both trackers onto the floor: the lower one is pinned at q_min and
  // the upper one decays onto it until rounding produces an exact tie.
  EstimatorConfig cfg = make_config(Variant::Mdumiqe, 0.9);
  cfg.q_min = 1.0;

  QuantileBank plain(QuantileTargets({0.1, 0.2}), cfg, {1.0, std::nextafter(1.0, 2.0)});
  for (int i = 0; i < 2000; ++i) plain.observe(0.5);
  EXPECT_DOUBLE_EQ(plain.estimates()[0], 1.0);
  EXPECT_DOUBLE_EQ(plain.estimates()[1], 1.0);

  cfg.gap_min = 0.01;
  QuantileBank kept(QuantileTargets({0.1, 0.2}), cfg, {1.0, std::nextafter(1.0, 2.0)});
  for (int i = 0; i < 2000; ++i) {
    kept.observe(0.5);
    ASSERT_GT(kept.estimates()[1], kept.estimates()[0]);
  }
}

TEST(QuantileBank, ZeroStepLeavesEstimatesBitIdentical) {
  const std::vector<double> init = {0.3, 1.7, 42.0};
  for (Variant v : {Variant::DumiqeMult, Variant::DumiqeAdd, Variant::Mdumiqe}) {
    QuantileBank bank(three_targets(), make_config(v, 0.0), init);
    Rng rng(7);
    for (int i = 0; i < 100; ++i) bank.observe(0.1 + 100.0 * rng.uniform());
    for (std::size_t k = 0; k < init.size(); ++k) {
      EXPECT_EQ(bank.estimates()[k], init[k]) << to_string(v) << " k=" << k;
    }
  }
}

TEST(QuantileBank, UpdateDependsOnlyOnComparisonPattern) {
  // Two samples on the same side of every estimate produce bit-identical
  // updates; the magnitude of the sample never enters the arithmetic.
  for (Variant v : {Variant::DumiqeMult, Variant::DumiqeAdd, Variant::Mdumiqe}) {
    const double step = v == Variant::Mdumiqe ? 0.5 : 0.1;
    QuantileBank a(three_targets(), make_config(v, step), {1.0, 2.0, 4.0});
    QuantileBank b(three_targets(), make_config(v, step), {1.0, 2.0, 4.0});
    a.observe(3.0);
    b.observe(3.9);  // same pattern: above the first two, below the third
    EXPECT_EQ(a.estimates(), b.estimates()) << to_string(v);

    a.observe(5.0);
    b.observe(5.0e6);  // above everything in both cases
    EXPECT_EQ(a.estimates(), b.estimates()) << to_string(v);
  }
}

TEST(QuantileBank, MultiplicativeVariantsScaleEquivariant) {
  // The coupled bound feeds estimate ratios back into the update, so rounding
  // noise grows exponentially in beta * steps; 0.05 over 1000 steps keeps the
  // drift orders of magnitude below the asserted tolerance.
  for (Variant v : {Variant::DumiqeMult, Variant::Mdumiqe}) {
    const double step = 0.05;
    for (double c : {1e-3, 1e3}) {
      QuantileBank base(three_targets(), make_config(v, step), {1.0, 2.0, 4.0});
      QuantileBank scaled(three_targets(), make_config(v, step), {c, 2.0 * c, 4.0 * c});
      Rng rng(55);
      for (int i = 0; i < 1000; ++i) {
        const double x = std::exp(rng.normal());
        base.observe(x);
        scaled.observe(c * x);
      }
      for (std::size_t k = 0; k < 3; ++k) {
        const double want = c * base.estimates()[k];
        EXPECT_NEAR(scaled.estimates()[k], want, 1e-9 * std::abs(want))
            << to_string(v) << " c=" << c << " k=" << k;
      }
    }
  }
}

TEST(QuantileBank, AdditiveVariantTranslationEquivariant) {
  const double c = 100.0;
  QuantileBank base(three_targets(), make_config(Variant::DumiqeAdd, 0.2), {-1.0, 0.0, 1.0});
  QuantileBank shifted(three_targets(), make_config(Variant::DumiqeAdd, 0.2),
                       {-1.0 + c, 0.0 + c, 1.0 + c});
  Rng rng(56);
  for (int i = 0; i < 1000; ++i) {
    const double x = 3.0 * rng.normal();
    base.observe(x);
    shifted.observe(x + c);
  }
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_NEAR(shifted.estimates()[k], base.estimates()[k] + c, 1e-9);
  }
}

TEST(QuantileBank, FromSamplesUsesNearestRank) {
  std::vector<double> buf(100);
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = static_cast<double>(i + 1);
  Rng rng(9);
  for (std::size_t i = buf.size() - 1; i > 0; --i) {
    std::swap(buf[i], buf[static_cast<std::size_t>(rng.uniform() * static_cast<double>(i + 1))]);
  }
  const auto bank =
      QuantileBank::from_samples(three_targets(), make_config(Variant::Mdumiqe, 0.5), buf);
  EXPECT_DOUBLE_EQ(bank.estimates()[0], 25.0);
  EXPECT_DOUBLE_EQ(bank.estimates()[1], 50.0);
  EXPECT_DOUBLE_EQ(bank.estimates()[2], 75.0);
  EXPECT_EQ(bank.observed_count(), 0u);
}

TEST(QuantileBank, FromSamplesSeparatesTiedRanks) {
  const std::vector<double> buf(10, 5.0);
  const auto bank =
      QuantileBank::from_samples(three_targets(), make_config(Variant::Mdumiqe, 0.5), buf);
  const auto& est = bank.estimates();
  EXPECT_DOUBLE_EQ(est[0], 5.0);
  EXPECT_LT(est[0], est[1]);
  EXPECT_LT(est[1], est[2]);
  EXPECT_NEAR(est[2], 5.0, 1e-7);
}

TEST(QuantileBank, FromSamplesAppliesTransform) {
  const std::vector<double> buf(10, 0.0);
  const auto bank = QuantileBank::from_samples(
      three_targets(), make_config(Variant::Mdumiqe, 0.5, Transform::Exp), buf);
  // exp(0) = 1 in transformed space; quantiles map back near 0.
  const auto q = bank.quantiles();
  EXPECT_DOUBLE_EQ(q[0], 0.0);
  EXPECT_LT(q[0], q[1]);
  EXPECT_LT(q[1], q[2]);
  EXPECT_NEAR(q[2], 0.0, 1e-7);
}

TEST(QuantileBank, FromSamplesRejectsBadInput) {
  const auto cfg = make_config(Variant::Mdumiqe, 0.5);
  EXPECT_THROW(QuantileBank::from_samples(three_targets(), cfg, {}), std::invalid_argument);
  const std::vector<double> with_neg = {1.0, -2.0, 3.0};
  EXPECT_THROW(QuantileBank::from_samples(three_targets(), cfg, with_neg), std::domain_error);
  // The additive variant takes the same buffer unchanged.
  EXPECT_NO_THROW(
      QuantileBank::from_samples(three_targets(), make_config(Variant::DumiqeAdd, 0.2), with_neg));
}

TEST(QuantileBank, ObserveRejectsSamplesOutsideDomain) {
  QuantileBank mult(three_targets(), make_config(Variant::DumiqeMult, 0.1), {1.0, 2.0, 3.0});
  EXPECT_THROW(mult.observe(0.0), std::domain_error);
  EXPECT_THROW(mult.observe(-1.0), std::domain_error);
  EXPECT_THROW(mult.observe(std::nan("")), std::domain_error);
  EXPECT_THROW(mult.observe(std::numeric_limits<double>::infinity()), std::domain_error);
  EXPECT_EQ(mult.observed_count(), 0u);

  QuantileBank exp_bank(three_targets(), make_config(Variant::Mdumiqe, 0.5, Transform::Exp),
                        {1.0, 2.0, 3.0});
  EXPECT_NO_THROW(exp_bank.observe(-5.0));
  EXPECT_THROW(exp_bank.observe(701.0), std::domain_error);

  QuantileBank add(three_targets(), make_config(Variant::DumiqeAdd, 0.2), {1.0, 2.0, 3.0});
  EXPECT_NO_THROW(add.observe(-5.0));
  EXPECT_THROW(add.observe(std::nan("")), std::domain_error);
}

TEST(QuantileBank, InitialEstimateValidation) {
  const auto mcfg = make_config(Variant::Mdumiqe, 0.5);
  EXPECT_THROW(QuantileBank(three_targets(), mcfg, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(QuantileBank(three_targets(), mcfg, {1.0, 2.0, std::nan("")}),
               std::invalid_argument);
  EXPECT_THROW(QuantileBank(three_targets(), mcfg, {1.0, 2.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(QuantileBank(three_targets(), mcfg, {3.0, 2.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(QuantileBank(three_targets(), mcfg, {-1.0, 2.0, 3.0}), std::invalid_argument);

  EstimatorConfig below_floor = mcfg;
  below_floor.q_min = 2.0;
  EXPECT_THROW(QuantileBank(three_targets(), below_floor, {1.0, 3.0, 4.0}),
               std::invalid_argument);

  // Independent trackers have no ordering requirement.
  EXPECT_NO_THROW(
      QuantileBank(three_targets(), make_config(Variant::DumiqeMult, 0.1), {3.0, 2.0, 1.0}));
  EXPECT_NO_THROW(
      QuantileBank(three_targets(), make_config(Variant::DumiqeAdd, 0.2), {-3.0, 5.0, -1.0}));
}

TEST(QuantileBank, QuantilesInvertTheTransform) {
  QuantileBank bank(three_targets(), make_config(Variant::Mdumiqe, 0.5, Transform::Exp),
                    {0.5, 1.0, 2.0});
  Rng rng(17);
  for (int i = 0; i < 50; ++i) bank.observe(rng.normal());
  const auto q = bank.quantiles();
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_DOUBLE_EQ(q[k], std::log(bank.estimates()[k]));
    EXPECT_DOUBLE_EQ(bank.quantile(k), q[k]);
  }
}

TEST(QuantileBank, CountsObservations) {
  QuantileBank bank(three_targets(), make_config(Variant::Mdumiqe, 0.5), {1.0, 2.0, 3.0});
  for (int i = 0; i < 137; ++i) bank.observe(1.5);
  EXPECT_EQ(bank.observed_count(), 137u);
}
