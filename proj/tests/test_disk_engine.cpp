#include <gtest/gtest.h>

#include "pluri/bound_engine.hpp"

using namespace pluri;

namespace {

const double kLog2 = std::log(2.0);

AnalyticDisk polynomial_disk(std::vector<Poly> coords, std::vector<cplx> hits, Point target) {
  AnalyticDisk f;
  f.coords = std::move(coords);
  f.hits = std::move(hits);
  f.target = target;
  return f;
}

TEST(EvaluateDisk, ConstantLinearAndParabola) {
  Point z(0.2, cplx(0.1, -0.3));
  auto c = constant_disk(z);
  EXPECT_EQ(evaluate_disk(c, cplx(0.4, 0.5)), z);

  auto lin = polynomial_disk({Poly{0.0, 1.0}, Poly{0.0}}, {}, Point(0.0, 0.0));
  EXPECT_EQ(evaluate_disk(lin, 0.3), Point(0.3, 0.0));

  auto S = make_sublevel_dcg();
  auto par = polynomial_disk({Poly{0.0, 1.0}, Poly{0.0, 0.0, 1.0}}, {}, Point(0.0, 0.0));
  for (double cj : S->as<SublevelDcg>()->slopes) {
    Point p = evaluate_disk(par, cj);
    EXPECT_NEAR(std::abs(p[0] - cj), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(p[1] - cj * cj), 0.0, 1e-15);
  }
  EXPECT_THROW(evaluate_disk(par, 1.5), InputError);
}

TEST(InterpolatingDisk, ConstraintsExact) {
  Point z(0.3, cplx(0.1, 0.2)), w(-0.1, 0.4);
  std::vector<cplx> hits{cplx(0.5, 0.1), cplx(-0.3, 0.6)};
  auto f = interpolating_disk(z, w, hits, {Poly{0.2, -0.1}, Poly{cplx(0, 0.3)}});
  EXPECT_LT(distance(f(0.0), z), 1e-12);
  for (cplx h : hits)
    EXPECT_LT(distance(f(h), w), 1e-12);
}

TEST(Poletsky, SingleHitIsLogModulus) {
  auto f = polynomial_disk({Poly{0.0, 1.0}}, {0.5}, Point(0.5));
  auto v = poletsky_functional(f, Point(0.5));
  EXPECT_DOUBLE_EQ(v.value, std::log(0.5));
  EXPECT_EQ(v.undeclared, 0);
}

TEST(Poletsky, TwoHitsSum) {
  auto f = polynomial_disk({Poly{0.0, 0.0, 1.0}}, {0.5, -0.5}, Point(0.25));
  auto v = poletsky_functional(f, Point(0.25));
  EXPECT_NEAR(v.value, 2 * std::log(0.5), 1e-12);
}

TEST(Poletsky, UndeclaredPreimageIsCounted) {
  auto f = polynomial_disk({Poly{0.0, 0.0, 1.0}}, {0.5}, Point(0.25));
  auto v = poletsky_functional(f, Point(0.25));
  EXPECT_EQ(v.undeclared, 1);
  EXPECT_NEAR(v.value, 2 * std::log(0.5), 1e-9);
}

TEST(Poletsky, CentreAtPoleRejected) {
  auto f = polynomial_disk({Poly{0.0, 1.0}}, {}, Point(0.0));
  EXPECT_THROW(poletsky_functional(f, Point(0.0)), InputError);
}

TEST(Containment, RejectsDiskLeavingTheBall) {
  auto B = make_unit_ball(2);
  SearchBudget b;
  auto inside = polynomial_disk({Poly{0.0, 0.9}, Poly{0.0}}, {}, Point(0.0, 0.0));
  auto outside = polynomial_disk({Poly{0.0, 1.1}, Poly{0.0}}, {}, Point(0.0, 0.0));
  EXPECT_TRUE(certify_containment(*B, inside, b).valid());
  EXPECT_FALSE(certify_containment(*B, outside, b).valid());
  EXPECT_EQ(certify_containment(*B, inside, b).method, "boundary-only");
}

TEST(Containment, PlanarComplementUsesFullGrid) {
  auto C = make_default_planar_complement();
  SearchBudget b;
  // A small disk around 1 stays away from the holes on the real segment.
  auto f = polynomial_disk({Poly{1.0, 0.3}}, {}, Point(1.0));
  auto cert = certify_containment(*C, f, b);
  EXPECT_EQ(cert.method, "full-disk grid");
  EXPECT_TRUE(cert.valid());
  // Through a hole: rejected.
  auto g = polynomial_disk({Poly{0.0, 0.3}}, {}, Point(0.0));
  EXPECT_FALSE(certify_containment(*C, g, b).valid());
}

TEST(UpperBound, BallConvergesTowardsClosedForm) {
  RunConfig cfg;
  auto B = make_unit_ball(2);
  auto u = upper_bound_green(B, Point(0.5, 0.0), Point(0.0, 0.0), cfg);
  EXPECT_GE(u.hi, std::log(0.5) - 1e-9);
  EXPECT_LE(u.hi, std::log(0.5) + 0.05);
  EXPECT_EQ(u.hi_provenance, Provenance::CertifiedHi);
}

TEST(UpperBound, PolydiskNearLargerMobiusLog) {
  RunConfig cfg;
  auto P = make_unit_polydisk(2);
  auto u = upper_bound_green(P, Point(0.5, 0.25), Point(0.0, 0.0), cfg);
  EXPECT_GE(u.hi, std::log(0.5) - 1e-9);
  EXPECT_LE(u.hi, std::log(0.5) + 0.05);
}

TEST(UpperBound, ValidAgainstBallClosedFormOffCentre) {
  RunConfig cfg;
  auto B = make_unit_ball(2);
  Point z(0.3, cplx(0, 0.2)), w(-0.2, 0.1);
  auto u = upper_bound_green(B, z, w, cfg);
  ASSERT_TRUE(std::isfinite(u.hi));
  EXPECT_GE(u.hi, *closed_form_green(*B, z, w) - 1e-9);
}

TEST(UpperBound, PoleSentinel) {
  RunConfig cfg;
  auto B = make_unit_ball(2);
  auto u = upper_bound_green(B, Point(0.2, 0.1), Point(0.2, 0.1), cfg);
  EXPECT_EQ(u.hi, -kInf);
}

TEST(UpperBound, BudgetMonotone) {
  RunConfig small, large;
  small.budget.restarts = 4;
  large.budget.restarts = 8;
  auto H = make_hartogs_pgvlu();
  Point z(0.3, 0.2), w(0.1, 0.0);
  EXPECT_LE(upper_bound_green(H, z, w, large).hi, upper_bound_green(H, z, w, small).hi);
}

TEST(Slice, SublevelPathPointBelowMinusTwoLog2) {
  // The line z2 = c_j z1 lies in {u = -inf}, so the slice is the disk of radius 8.
  auto S = make_sublevel_dcg();
  double c = S->as<SublevelDcg>()->slopes.back();
  Point z(0.5, 0.5 * c), w(0.0, 0.0);
  auto sl = best_line_slice(S, z, w, SearchBudget{});
  EXPECT_LE(sl.value, -2 * kLog2 + 0.1);
  EXPECT_NEAR(sl.value, std::log(z.norm() / 8.0), 1e-6);
}

TEST(Kobayashi, DiskBallAndPole) {
  RunConfig cfg;
  auto D = make_unit_disk();
  EXPECT_NEAR(kobayashi_bound(D, Point(0.5), Point(0.0), cfg).hi, std::log(0.5), 1e-12);
  auto B = make_unit_ball(2);
  EXPECT_NEAR(kobayashi_bound(B, Point(0.5, 0.0), Point(0.0, 0.0), cfg).hi, std::log(0.5), 1e-12);
  EXPECT_EQ(kobayashi_bound(B, Point(0.1, 0.1), Point(0.1, 0.1), cfg).hi, -kInf);
}

TEST(Royden, ClosedFormCases) {
  RunConfig cfg;
  EXPECT_NEAR(royden_bound(make_unit_disk(), Direction(Point(0.0), Point(1.0)), cfg).hi, 0.0, 1e-12);
  Point v = Point(1.0, cplx(0, 1.0)) / std::sqrt(2.0);
  EXPECT_NEAR(royden_bound(make_unit_ball(2), Direction(Point(0.0, 0.0), v), cfg).hi, 0.0, 1e-12);
  EXPECT_NEAR(royden_bound(make_ball(Point::zeros(2), 2.0), Direction(Point(0.0, 0.0), v), cfg).hi,
              -kLog2, 1e-12);
}

TEST(Royden, SearchedJetIsFiniteOnSublevel) {
  RunConfig cfg;
  auto S = make_sublevel_dcg();
  auto r = royden_bound(S, Direction(Point(0.1, 0.2), Point(1.0, 0.5)), cfg);
  EXPECT_TRUE(std::isfinite(r.hi));
  EXPECT_EQ(r.hi_provenance, Provenance::CertifiedHi);
}

TEST(ExactGeodesic, MatchesClosedFormOnPolydisk) {
  auto P = make_unit_polydisk(2);
  Point z(0.5, 0.25), w(0.0, 0.0);
  auto g = exact_geodesic(*P, z, w);
  ASSERT_TRUE(g.has_value());
  EXPECT_NEAR(g->value, std::log(0.5), 1e-12);
}

} // namespace
