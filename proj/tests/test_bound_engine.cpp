#include <gtest/gtest.h>

#include "pluri/bound_engine.hpp"

using namespace pluri;

namespace {

const double kLog2 = std::log(2.0);

TEST(ClosedForm, BallDiskPolydisk) {
  auto B = make_unit_ball(2);
  EXPECT_DOUBLE_EQ(*closed_form_green(*B, Point(0.5, 0.0), Point(0.0, 0.0)), std::log(0.5));
  auto D = make_unit_disk();
  EXPECT_EQ(*closed_form_green(*D, Point(0.5), Point(0.5)), -kInf);
  // Mobius form written out independently.
  cplx z(0.3, -0.4), w(-0.2, 0.1);
  EXPECT_NEAR(*closed_form_green(*D, Point(z), Point(w)),
              std::log(std::abs((z - w) / (1.0 - std::conj(w) * z))), 1e-15);
  auto P = make_unit_polydisk(2);
  EXPECT_DOUBLE_EQ(*closed_form_green(*P, Point(0.5, 0.25), Point(0.0, 0.0)), std::log(0.5));
  EXPECT_FALSE(closed_form_green(*make_sublevel_dcg(), Point(0.5, 0.0), Point(0.0, 0.0)));
}

TEST(ClosedForm, InvariantUnderBallAutomorphism) {
  auto B = make_unit_ball(2);
  auto phi = ball_automorphism(B, Point(0.3, cplx(0.1, -0.4)));
  auto pts = sample_points(*B, 60, 21);
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
    double g0 = *closed_form_green(*B, pts[i], pts[i + 1]);
    double g1 = *closed_form_green(*B, evaluate(phi, pts[i]), evaluate(phi, pts[i + 1]));
    EXPECT_NEAR(g0, g1, 1e-9);
  }
}

TEST(ClosedForm, MonotoneInTheDomain) {
  auto small = make_ball(Point::zeros(2), 0.5);
  auto big = make_unit_ball(2);
  auto pts = sample_points(*small, 200, 4);
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2)
    EXPECT_GE(*closed_form_green(*small, pts[i], pts[i + 1]),
              *closed_form_green(*big, pts[i], pts[i + 1]));
}

TEST(Caratheodory, DiskPolydiskBall) {
  RunConfig cfg;
  auto c1 = caratheodory_bound(make_unit_disk(), Point(0.5), Point(0.0), cfg);
  EXPECT_NEAR(c1.lo, std::log(0.5), 1e-9);
  auto c2 = caratheodory_bound(make_unit_polydisk(2), Point(0.5, 0.25), Point(0.0, 0.0), cfg);
  EXPECT_NEAR(c2.lo, std::log(0.5), 1e-9);
  auto c3 = caratheodory_bound(make_unit_ball(2), Point(0.5, 0.0), Point(0.0, 0.0), cfg);
  EXPECT_NEAR(c3.lo, std::log(0.5), 1e-9);
  EXPECT_EQ(c3.lo_provenance, Provenance::CertifiedLo);
}

TEST(Caratheodory, PlanarComplementHasNoCandidates) {
  RunConfig cfg;
  auto c = caratheodory_bound(make_default_planar_complement(), Point(1.0), Point(cplx(0, 1.0)), cfg);
  EXPECT_EQ(c.lo, -kInf);
  EXPECT_EQ(c.lo_witness, "no candidates");
}

TEST(Caratheodory, NeverAboveClosedForm) {
  RunConfig cfg;
  auto B = make_unit_ball(2);
  auto pts = sample_points(*B, 20, 77);
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2)
    EXPECT_LE(caratheodory_bound(B, pts[i], pts[i + 1], cfg).lo,
              *closed_form_green(*B, pts[i], pts[i + 1]) + 1e-9);
}

TEST(PshLower, SublevelHalfAxis) {
  auto S = make_sublevel_dcg();
  auto b = psh_lower_bound(S, Point(0.5, 0.0), Point(0.0, 0.0));
  EXPECT_GE(b.lo, -1.5 * kLog2 - 1e-12);
  EXPECT_EQ(b.lo_witness, "u");
}

TEST(PshLower, BallCompetitorIsClosedForm) {
  auto B = make_ball(Point::zeros(2), 2.0);
  Point z(0.5, cplx(0.3, 0.2));
  auto b = psh_lower_bound(B, z, Point(0.0, 0.0));
  EXPECT_NEAR(b.lo, std::log(z.norm() / 2.0), 1e-12);
  EXPECT_EQ(b.lo_provenance, Provenance::ClosedForm);
}

TEST(PshLower, HartogsAxisCompetitor) {
  auto H = make_hartogs_pgvlu();
  const auto &h = *H->as<HartogsPgvlu>();
  cplx w2(0.2, 0.1);
  Point w(0.0, w2);
  for (const Point &z : {Point(0.01, cplx(0.21, 0.1)), Point(cplx(0, 0.02), cplx(0.19, 0.12))}) {
    double a = std::log(std::abs(z[1] - w2)) + h.v(z[0]) - std::log(2 * std::exp(1.0));
    double expect = std::max(a, std::log(std::abs(z[0])));
    EXPECT_GE(psh_lower_bound(H, z, w).lo, expect - 1e-12);
  }
}

TEST(Competitors, RejectedUnlessPshByConstruction) {
  auto B = make_unit_ball(2);
  Point w(0.0, 0.0);
  auto smooth = ScalarField::leaf("smooth", FieldKind::Smooth,
                                  [](const Point &z) { return std::log(z.norm()); }, w);
  EXPECT_FALSE(check_competitor(B, smooth, w, 1).accepted);
  auto positive = ScalarField::leaf("shifted", FieldKind::LogModulus,
                                    [](const Point &z) { return std::log(z.norm()) + 1.0; }, w);
  EXPECT_FALSE(check_competitor(B, positive, w, 1).accepted);
  auto no_pole = ScalarField::leaf("nopole", FieldKind::LogModulus,
                                   [](const Point &z) { return std::log(z.norm()); });
  EXPECT_FALSE(check_competitor(B, no_pole, w, 1).accepted);
  auto good = ScalarField::leaf("good", FieldKind::LogModulus,
                                [](const Point &z) { return std::log(z.norm()); }, w);
  EXPECT_TRUE(check_competitor(B, good, w, 1).accepted);
}

TEST(Pushforward, SublevelSliceOfRadiusEight) {
  auto S = make_sublevel_dcg();
  double c = S->as<SublevelDcg>()->slopes.back();
  Point dir = Point(1.0, c) / std::sqrt(1 + c * c);
  auto slice = affine_slice(S, Point(0.0, 0.0), dir, 8.0, false);
  Point z(0.5, 0.5 * c);
  auto b = pushforward_upper_bound(slice, z, Point(0.0, 0.0), SearchBudget{});
  EXPECT_LE(b.hi, -2 * kLog2 + 0.05);
  EXPECT_NEAR(b.hi, std::log(z.norm() / 8.0), 1e-12);
}

TEST(Pushforward, BallLinearSliceAndDiskIdentity) {
  auto B = make_unit_ball(2);
  Point z(0.5, 0.0), w(0.0, 0.0);
  auto sl = line_slice_map(B, z, w, SearchBudget{});
  ASSERT_TRUE(sl.has_value());
  auto b = pushforward_upper_bound(*sl, z, w, SearchBudget{});
  EXPECT_GE(b.hi, std::log(0.5) - 1e-9);
  // The certified slice radius stops just short of the sphere.
  EXPECT_LE(b.hi, std::log(0.5) + 2e-3);

  // Identity on D(0, rho): pseudo-hyperbolic distance rho |s - t| / |rho^2 - conj(t) s|.
  auto D = make_unit_disk();
  const double rho = 0.999;
  const cplx s(0.3), t(0, -0.4);
  auto id = affine_slice(D, Point(0.0), Point(1.0), rho, false);
  auto e = pushforward_upper_bound(id, Point(s), Point(t), SearchBudget{});
  EXPECT_NEAR(e.hi, std::log(rho * std::abs(s - t) / std::abs(rho * rho - std::conj(t) * s)), 1e-12);
  EXPECT_GE(e.hi, *closed_form_green(*D, Point(s), Point(t)));

  // A slice filling the whole disk touches the boundary and earns no certificate.
  auto full = affine_slice(D, Point(0.0), Point(1.0), 1.0, false);
  EXPECT_EQ(pushforward_upper_bound(full, Point(s), Point(t), SearchBudget{}).hi, kInf);
}

TEST(Pushforward, PointsOffTheSliceRejected) {
  auto B = make_unit_ball(2);
  auto sl = affine_slice(B, Point(0.0, 0.0), Point(1.0, 0.0), 1.0, false);
  EXPECT_THROW(pushforward_upper_bound(sl, Point(0.2, 0.3), Point(0.0, 0.0), SearchBudget{}),
               InputError);
}

TEST(GreenInterval, BallPolydiskAndPole) {
  RunConfig cfg;
  auto b = green_interval(make_unit_ball(2), Point(0.5, 0.0), Point(0.0, 0.0), cfg);
  EXPECT_TRUE(b.contains(std::log(0.5), 1e-12));
  EXPECT_LE(b.width(), 0.05);
  auto p = green_interval(make_unit_polydisk(2), Point(0.5, 0.25), Point(0.0, 0.0), cfg);
  EXPECT_TRUE(p.contains(std::log(0.5), 1e-12));
  EXPECT_LE(p.width(), 0.05);
  auto pole = green_interval(make_unit_ball(2), Point(0.1, 0.2), Point(0.1, 0.2), cfg);
  EXPECT_EQ(pole.lo, -kInf);
  EXPECT_EQ(pole.hi, -kInf);
  EXPECT_EQ(pole.width(), 0.0);
}

TEST(GreenInterval, BallAwayFromCentreBrackets) {
  RunConfig cfg;
  auto B = make_unit_ball(2);
  Point z(0.2, cplx(0.1, 0.5)), w(-0.3, 0.2);
  auto b = green_interval(B, z, w, cfg);
  EXPECT_TRUE(b.contains(*closed_form_green(*B, z, w), 1e-9));
}

TEST(GreenInterval, SublevelAndHartogsAreOrdered) {
  RunConfig cfg;
  auto s = green_interval(make_sublevel_dcg(), Point(0.5, 0.0), Point(0.0, 0.0), cfg);
  EXPECT_LE(s.lo, s.hi);
  EXPECT_GE(s.lo, -1.5 * kLog2 - 1e-12);
  auto h = green_interval(make_hartogs_pgvlu(), Point(0.3, 0.2), Point(0.1, 0.0), cfg);
  EXPECT_LE(h.lo, h.hi);
  EXPECT_TRUE(std::isfinite(h.lo));
  EXPECT_TRUE(std::isfinite(h.hi));
}

TEST(GreenInterval, OutsidePointRejected) {
  RunConfig cfg;
  EXPECT_THROW(green_interval(make_unit_ball(2), Point(1.0, 0.5), Point(0.0, 0.0), cfg),
               InputError);
}

TEST(Chain, HoldsOnBallAndBidisk) {
  RunConfig cfg;
  for (const auto &d : {make_unit_ball(2), make_unit_polydisk(2)}) {
    auto pts = sample_points(*d, 20, 31);
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
      auto c = caratheodory_bound(d, pts[i], pts[i + 1], cfg);
      auto g = green_interval(d, pts[i], pts[i + 1], cfg);
      auto k = kobayashi_bound(d, pts[i], pts[i + 1], cfg);
      EXPECT_LE(c.lo, g.lo + 1e-9);
      EXPECT_LE(g.lo, g.hi + 1e-9);
      EXPECT_LE(g.hi, k.hi + 1e-9);
    }
  }
}

TEST(Maximality, CompetitorBelowOnSphereStaysBelowInside) {
  // v = log||z|| + 2|z1|^2 - c is PSH; g(., 0) = log||z|| is maximal away from 0,
  // so v <= g on the sphere of G forces v <= g on G.
  Point c0(0.1, 0.5);
  const double rho = 0.15;
  double cmax = 0;
  std::vector<Point> sphere, inside;
  std::mt19937_64 rng(5);
  for (int k = 0; k < 400; ++k) {
    Point e = detail::random_unit_sphere(2, rng);
    sphere.push_back(c0 + e * rho);
    inside.push_back(c0 + e * (rho * std::sqrt(static_cast<double>(k % 20) / 20.0)));
    cmax = std::max(cmax, 2 * std::norm(sphere.back()[0]));
  }
  auto v = [&](const Point &z) { return std::log(z.norm()) + 2 * std::norm(z[0]) - cmax; };
  auto B = make_unit_ball(2);
  for (const auto &z : sphere)
    ASSERT_LE(v(z), *closed_form_green(*B, z, Point(0.0, 0.0)) + 1e-12);
  for (const auto &z : inside)
    EXPECT_LE(v(z), *closed_form_green(*B, z, Point(0.0, 0.0)) + 1e-12);
}

TEST(LelongJensen, HarmonicHasNoInteriorTerm) {
  auto D = make_unit_disk();
  auto t = lelong_jensen(D, real_part_field(), Point(0.3));
  EXPECT_LT(t.residual, 1e-6);
  EXPECT_NEAR(t.interior, 0.0, 1e-12);
}

TEST(LelongJensen, AbsSquaredAgainstClassicalJensen) {
  // int_D log|phi_a| dA = -pi (1 - |a|^2) / 2 and Delta|z|^2 = 4, so the interior
  // term is -(1 - |a|^2); the boundary term is 1 since |z|^2 = 1 on the circle.
  auto D = make_unit_disk();
  for (double a : {0.0, 0.5}) {
    auto t = lelong_jensen(D, norm_sq_field(), Point(a));
    EXPECT_NEAR(t.boundary, 1.0, 1e-9);
    EXPECT_NEAR(t.interior, -(1 - a * a), 1e-3);
    EXPECT_LT(t.residual, 1e-3);
  }
}

TEST(LelongJensen, FourthPowerAndBall) {
  auto D = make_unit_disk();
  EXPECT_LT(lelong_jensen_residual(D, norm_pow4_field(), Point(0.5)), 1e-3);
  auto B = make_unit_ball(2);
  EXPECT_LT(lelong_jensen_residual(B, norm_sq_field(), Point(0.0, 0.0)), 1e-3);
  EXPECT_THROW(lelong_jensen(B, norm_sq_field(), Point(0.2, 0.0)), InputError);
}

} // namespace
