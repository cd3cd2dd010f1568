#include <gtest/gtest.h>

#include "pluri/compactify.hpp"

using namespace pluri;

namespace {

// Grid L^1 norm of g(., w), recovered from the Martin normalization at 0.
double grid_norm(const DomainPtr &dp, const Point &w, const std::shared_ptr<const VolumeForm> &V) {
  auto f = phi_V(dp, w, V, Normalization::Martin);
  double g0 = -kInf;
  for (int i = 0; i < w.dim(); ++i)
    g0 = std::max(g0, std::log(std::abs(w[i])));
  return f.norm() * std::abs(g0);
}

TEST(VolumeForm, MassesArePiAndPiSquared) {
  auto V = norming_form(make_unit_disk(), 64);
  EXPECT_NEAR(V->mass, kPi, 1e-10);
  EXPECT_EQ(V->nodes.size(), V->weights.size());
  auto W = norming_form(make_unit_polydisk(2), 32);
  EXPECT_NEAR(W->mass, kPi * kPi, 1e-9);
  EXPECT_THROW(norming_form(make_unit_ball(2), 32), InputError);
}

TEST(CV, DiskClosedForm) {
  // Integral of -log|z| over the disk is 2 pi / 4; Mobius invariance of
  // Lebesgue measure weighted by the Jacobian gives (pi / 2)(1 - |w|^2).
  auto D = make_unit_disk();
  EXPECT_NEAR(c_V(D, Point(0.0)), kPi / 2, 1e-9);
  EXPECT_NEAR(c_V(D, Point(0.5)), kPi / 2 * 0.75, 1e-9);
  EXPECT_NEAR(c_V(D, Point(cplx(0, 0.5))), c_V(D, Point(0.5)), 1e-12);
}

TEST(CV, BidiskAtOrigin) {
  // 4 pi^2 times the integral of r^3 (-log r) over [0, 1].
  EXPECT_NEAR(c_V(make_unit_polydisk(2), Point(0.0, 0.0)), kPi * kPi / 4, 1e-8);
}

TEST(CV, GridNormConvergesWithResolution) {
  auto D = make_unit_disk();
  Point w(0.4);
  double exact = c_V(D, w);
  double coarse = std::abs(grid_norm(D, w, norming_form(D, 32)) - exact);
  double fine = std::abs(grid_norm(D, w, norming_form(D, 128)) - exact);
  EXPECT_LT(fine, coarse);
  EXPECT_LT(fine / exact, 0.01);

  auto P = make_unit_polydisk(2);
  Point v(0.3, cplx(0, 0.2));
  double pe = c_V(P, v);
  double pc = std::abs(grid_norm(P, v, norming_form(P, 32)) - pe);
  double pf = std::abs(grid_norm(P, v, norming_form(P, 64)) - pe);
  EXPECT_LT(pf, pc);
}

TEST(PhiV, UnitNormAndInjective) {
  auto D = make_unit_disk();
  auto V = norming_form(D, 64);
  auto a = phi_V(D, Point(0.0), V), b = phi_V(D, Point(0.5), V);
  EXPECT_NEAR(a.norm(), 1.0, 1e-12);
  EXPECT_NEAR(b.norm(), 1.0, 1e-12);
  EXPECT_GT(l1_distance(a, b), 0.1);
  EXPECT_THROW(phi_V(D, Point(1.0), V), InputError);
  EXPECT_THROW(phi_V(make_unit_polydisk(2), Point(0.0, 0.0), V), InputError);
}

TEST(PhiV, RotationEquivariance) {
  auto D = make_unit_disk();
  auto V = norming_form(D, 64);
  const cplx rot = std::polar(1.0, 2 * kPi / V->angular);
  cplx w1(0.3, 0.2), w2(-0.5, 0.1);
  double before = l1_distance(phi_V(D, Point(w1), V), phi_V(D, Point(w2), V));
  double after = l1_distance(phi_V(D, Point(w1 * rot), V), phi_V(D, Point(w2 * rot), V));
  EXPECT_NEAR(before, after, 1e-12);
}

TEST(Trace, RadialSequencesConvergeToPoisson) {
  auto D = make_unit_disk();
  auto V = norming_form(D, 128);
  for (double alpha : {0.0, kPi / 2, kPi}) {
    auto t = boundary_trace(D, radial_sequence(alpha, 1, 10), V);
    EXPECT_TRUE(t.cauchy);
    EXPECT_LE(t.successive.back(), 0.05);
    ASSERT_TRUE(t.profile_distance.has_value());
    EXPECT_LE(*t.profile_distance, 0.05);
    EXPECT_NEAR(*t.limit_angle, alpha, 1e-12);
  }
  auto p = poisson_profile(V, 0.7);
  EXPECT_NEAR(p.norm(), 1.0, 1e-12);
  EXPECT_THROW(boundary_trace(D, {}, V), InputError);
}

TEST(Trace, DistinctBoundaryPointsSeparate) {
  auto D = make_unit_disk();
  auto V = norming_form(D, 128);
  auto a = phi_V(D, radial_sequence(0.0, 10, 10)[0], V);
  auto b = phi_V(D, radial_sequence(kPi, 10, 10)[0], V);
  EXPECT_GE(l1_distance(a, b), 0.5);
}

TEST(Clustering, SingleLinkageAndEditDistance) {
  // Two tight pairs far apart.
  std::vector<std::vector<double>> d{{0, 0.01, 1, 1}, {0.01, 0, 1, 1}, {1, 1, 0, 0.02}, {1, 1, 0.02, 0}};
  EXPECT_EQ(single_linkage(d, 0.1), (std::vector<int>{0, 0, 1, 1}));
  EXPECT_EQ(single_linkage(d, 2.0), (std::vector<int>{0, 0, 0, 0}));
  EXPECT_EQ(single_linkage(d, 0.005), (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(partition_edit_distance({0, 0, 1, 1}, {1, 1, 0, 0}), 0);
  EXPECT_EQ(partition_edit_distance({0, 0, 1, 1}, {0, 1, 1, 1}), 1);
  // A constant sequence is one cluster at every scale.
  auto D = make_unit_disk();
  auto V = norming_form(D, 32);
  std::vector<GridFunction> same(5, phi_V(D, Point(0.3), V));
  auto dm = distance_matrix(same);
  for (const auto &row : dm)
    for (double x : row)
      EXPECT_EQ(x, 0.0);
  for (double eps : cluster_scales())
    EXPECT_EQ(single_linkage(dm, eps), (std::vector<int>(5, 0)));
}

TEST(Clustering, TailsClusterByBoundaryPoint) {
  auto D = make_unit_disk();
  auto V = norming_form(D, 128);
  std::vector<Point> s;
  std::vector<int> truth;
  int label = 0;
  for (double alpha : {0.0, kPi / 2, kPi}) {
    for (const auto &p : radial_sequence(alpha, 6, 10)) {
      s.push_back(p);
      truth.push_back(label);
    }
    ++label;
  }
  std::vector<GridFunction> fs;
  for (const auto &p : s)
    fs.push_back(phi_V(D, p, V));
  auto dm = distance_matrix(fs);
  for (double eps : cluster_scales())
    EXPECT_EQ(partition_edit_distance(single_linkage(dm, eps), truth), 0) << eps;
}

TEST(Invariance, IdentityMobiusAndSwap) {
  auto D = make_unit_disk();
  auto V = norming_form(D, 64);
  std::vector<Point> s;
  for (double alpha : {0.0, kPi})
    for (const auto &p : radial_sequence(alpha, 6, 9))
      s.push_back(p);
  auto id = invariance_test(D, identity_map(D), s, V, V);
  EXPECT_EQ(id.max_edit_distance, 0);
  EXPECT_NEAR(id.max_distortion, 0.0, 1e-15);
  auto mob = invariance_test(D, coordinate_mobius(D, 0, 0.5), s, V, V);
  EXPECT_EQ(mob.max_edit_distance, 0);
  EXPECT_EQ(mob.scales, cluster_scales());

  auto P = make_unit_polydisk(2);
  auto W = norming_form(P, 32);
  std::vector<Point> ps{Point(0.9, 0.1), Point(0.95, 0.1), Point(0.1, -0.9), Point(0.1, -0.95)};
  auto sw = invariance_test(P, swap_map(P), ps, W, W);
  EXPECT_EQ(sw.max_edit_distance, 0);
}

} // namespace
