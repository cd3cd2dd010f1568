#include <gtest/gtest.h>

#include "pluri/hyperconvex.hpp"

using namespace pluri;

namespace {

const double kLog2 = std::log(2.0);

TEST(PoleClass, BallIsStrictWithZeroConstants) {
  RunConfig cfg;
  auto fit = classify_pole(make_unit_ball(2), Point(0.0, 0.0), cfg);
  EXPECT_EQ(fit.classification, PoleClass::Strict);
  EXPECT_NEAR(fit.c1, 0.0, 0.02);
  EXPECT_NEAR(fit.c2, 0.0, 0.02);
  ASSERT_EQ(fit.radii.size(), static_cast<std::size_t>(cfg.budget.annuli));
  for (std::size_t k = 1; k < fit.radii.size(); ++k)
    EXPECT_LT(fit.radii[k], fit.radii[k - 1]);
}

TEST(PoleClass, PolydiskOffCentreIsStrict) {
  RunConfig cfg;
  auto fit = classify_pole(make_unit_polydisk(2), Point(0.2, cplx(0, 0.1)), cfg);
  EXPECT_EQ(fit.classification, PoleClass::Strict);
  EXPECT_LE(fit.c1, fit.c2);
}

TEST(PoleClass, SyntheticOracles) {
  Point w(0.0, 0.0);
  std::vector<double> radii;
  for (int k = 0; k < 6; ++k)
    radii.push_back(0.1 * std::pow(10.0, -k / 2.0));
  auto with = [&](auto lo, auto hi) {
    return classify_pole(
        w, radii,
        [&](const Point &z) {
          BoundInterval b;
          double t = z.norm();
          b.lo = lo(t);
          b.hi = hi(t);
          return b;
        },
        8, 0.5);
  };
  auto logt = [](double t) { return std::log(t); };
  // Upper side logarithmic, lower side 2 log t diverges after subtracting log t.
  EXPECT_EQ(with([](double t) { return 2 * std::log(t); }, logt).classification,
            PoleClass::LogarithmicOnly);
  EXPECT_EQ(with(logt, logt).classification, PoleClass::Strict);
  // Bounded near w: hi - log t grows without bound.
  EXPECT_EQ(with([](double) { return -kInf; }, [](double) { return -1.0; }).classification,
            PoleClass::NoPole);
}

TEST(PoleClass, OutsidePoleRejected) {
  RunConfig cfg;
  EXPECT_THROW(classify_pole(make_unit_ball(2), Point(1.2, 0.0), cfg), InputError);
}

TEST(Glue, BallCompetitorIsContinuousNegativeWithPole) {
  RunConfig cfg;
  auto gc = glue_competitor(make_unit_ball(2), Point(0.0, 0.0), cfg);
  EXPECT_LE(gc.seam_jump, 1e-9);
  EXPECT_TRUE(gc.negative_on_sample);
  EXPECT_LE(gc.pole_spread, 0.5);
  EXPECT_TRUE(gc.field.psh_by_construction());
  EXPECT_GT(gc.d * std::log(gc.s / gc.r), gc.a / 4);
}

TEST(Glue, SublevelCompetitorIsAccepted) {
  RunConfig cfg;
  auto S = make_sublevel_dcg();
  Point w(0.1, 0.2);
  auto gc = glue_competitor(S, w, cfg);
  EXPECT_LE(gc.seam_jump, 1e-9);
  EXPECT_TRUE(gc.negative_on_sample);
  EXPECT_LE(gc.pole_spread, 0.5);
  EXPECT_TRUE(check_competitor(S, gc.field, w, 7).accepted);
  // Adding it never lowers the certified lower bound.
  for (const auto &z : sample_points(*S, 20, 31)) {
    if (z == w)
      continue;
    double base = psh_lower_bound(S, z, w).lo;
    double glued = psh_lower_bound(S, z, w, {gc.field}).lo;
    EXPECT_GE(glued, base);
  }
}

TEST(Glue, OutsidePoleRejected) {
  RunConfig cfg;
  EXPECT_THROW(glue_competitor(make_unit_ball(2), Point(0.0, 1.5), cfg), InputError);
}

TEST(Ratio, BallDeviationsShrinkWithDelta) {
  RunConfig cfg;
  auto r = ratio_test(make_unit_ball(2), Point(0.0, 0.0), 0.3, cfg);
  ASSERT_EQ(r.deltas.size(), r.deviations.size());
  ASSERT_GE(r.deltas.size(), 4u);
  for (std::size_t k = 1; k < r.deviations.size(); ++k) {
    EXPECT_LT(r.deltas[k], r.deltas[k - 1]);
    EXPECT_LE(r.deviations[k], r.deviations[k - 1] + 1e-12);
  }
  // Deviation is roughly linear in delta: halving delta halves it.
  EXPECT_NEAR(r.deviations[4] / r.deviations[3], 0.5, 0.05);
  EXPECT_GE(r.delta_found, 0.01);
}

TEST(Ratio, DiskDeviationVanishesWithDelta) {
  RunConfig cfg;
  auto r = ratio_test(make_unit_disk(), Point(0.2), 0.3, cfg);
  EXPECT_LT(r.deviations.back(), 1e-2);
  EXPECT_GT(r.delta_found, 0.0);
}

TEST(Exhaustion, LevelSetMarginsMatchClosedForms) {
  RunConfig cfg;
  // {g < a} about 0 in the unit ball is the ball of radius e^a.
  auto eb = exhaustion_check(make_unit_ball(2), Point(0.0, 0.0), {-1.0}, cfg);
  ASSERT_EQ(eb.levels.size(), 1u);
  EXPECT_NEAR(eb.levels[0].min_margin, 1 - std::exp(-1.0), 1e-9);
  EXPECT_GE(eb.worst_gap, 0.0);
  auto ep = exhaustion_check(make_unit_polydisk(2), Point(0.0, 0.0), {-0.5}, cfg);
  EXPECT_NEAR(ep.levels[0].min_margin, 1 - std::exp(-0.5), 1e-9);
}

TEST(Exhaustion, SublevelLevelSetsStayInside) {
  RunConfig cfg;
  auto es = exhaustion_check(make_sublevel_dcg(), Point(0.0, 0.0), {-3.0, -1.0}, cfg);
  ASSERT_EQ(es.levels.size(), 2u);
  for (const auto &l : es.levels)
    EXPECT_GT(l.min_margin, 0.0);
  EXPECT_GT(es.comparisons, 0);
  EXPECT_GE(es.worst_gap, 0.0);
  EXPECT_GT(es.b, 0.0);
}

TEST(Continuity, BallPathConverges) {
  RunConfig cfg;
  auto B = make_unit_ball(2);
  std::vector<std::pair<Point, Point>> path;
  for (int j = 1; j <= 8; ++j)
    path.emplace_back(Point(0.5, std::ldexp(0.5, -j)), Point(0.0, 0.0));
  auto rep = continuity_scan(B, path, Point(0.5, 0.0), Point(0.0, 0.0), cfg);
  EXPECT_EQ(rep.verdict, ContinuityVerdict::Converges);
  EXPECT_NEAR(rep.limit.hi, std::log(0.5), 1e-12);
}

TEST(Continuity, ConstantPathConverges) {
  RunConfig cfg;
  auto P = make_unit_polydisk(2);
  Point z(0.3, 0.1), w(0.0, 0.2);
  std::vector<std::pair<Point, Point>> path(4, {z, w});
  EXPECT_EQ(continuity_scan(P, path, z, w, cfg).verdict, ContinuityVerdict::Converges);
  EXPECT_THROW(continuity_scan(P, {}, z, w, cfg), InputError);
}

TEST(Continuity, SublevelPathIsAWitness) {
  RunConfig cfg;
  auto S = make_sublevel_dcg();
  auto rep = continuity_scan(S, sublevel_discontinuity_path(S), Point(0.5, 0.0), Point(0.0, 0.0), cfg);
  EXPECT_EQ(rep.verdict, ContinuityVerdict::DiscontinuityWitness);
  EXPECT_GE(rep.limit.lo, -1.5 * kLog2 - 1e-9);
  EXPECT_LE(rep.limsup_hi, -2 * kLog2 + 0.1);
  EXPECT_GT(rep.gap, 0.0);
  EXPECT_THROW(sublevel_discontinuity_path(make_unit_ball(2)), InputError);
}

} // namespace
