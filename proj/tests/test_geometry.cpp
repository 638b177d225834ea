#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "superint/geometry.hpp"
#include "superint/sampling.hpp"

using namespace superint;

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("jacobi matrix is orthogonal for n up to 12") {
  for (int n = 2; n <= 12; ++n) {
    JacobiMatrix m = jacobi_matrix(n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        double dot = 0.0;
        for (int k = 0; k < n; ++k) dot += m.at(r, k) * m.at(c, k);
        CHECK(std::abs(dot - (r == c ? 1.0 : 0.0)) < 1e-13);
      }
  }
}

TEST_CASE("jacobi matrix n=2 rows") {
  JacobiMatrix m = jacobi_matrix(2);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(m.at(0, 0) == doctest::Approx(s));
  CHECK(m.at(0, 1) == doctest::Approx(-s));
  CHECK(m.at(1, 0) == doctest::Approx(s));
  CHECK(m.at(1, 1) == doctest::Approx(s));
}

TEST_CASE("translation direction maps to the last axis") {
  const int n = 5;
  JacobiMatrix m = jacobi_matrix(n);
  std::vector<double> x(n, 1.7), p(n, 0.0), z(n), pz(n);
  to_jacobi(m, x, p, z, pz);
  for (int j = 0; j < n - 1; ++j) CHECK(std::abs(z[j]) < 1e-14);
  CHECK(z[n - 1] == doctest::Approx(1.7 * std::sqrt(5.0)));
}

TEST_CASE("jacobi transform preserves norms") {
  const int n = 5;
  JacobiMatrix m = jacobi_matrix(n);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> x(n), p(n), z(n), pz(n);
  for (int trial = 0; trial < 50; ++trial) {
    double nx = 0.0, nz = 0.0;
    for (int i = 0; i < n; ++i) x[i] = u(rng), p[i] = u(rng);
    to_jacobi(m, x, p, z, pz);
    for (int i = 0; i < n; ++i) nx += x[i] * x[i], nz += z[i] * z[i];
    CHECK(std::abs(nx - nz) < 1e-13);
  }
}

TEST_CASE("difference coordinates") {
  {
    double x[] = {3, 1, 0};
    DiffCoords d = diff_coords(x);
    CHECK(d.x[0] == 2.0);
    CHECK(d.x[1] == 1.0);
    CHECK(d.cyclic == -3.0);
    CHECK_FALSE(d.collision);
  }
  {
    double x[] = {2.5, 2.5, 2.5};
    DiffCoords d = diff_coords(x);
    CHECK(d.x[0] == 0.0);
    CHECK(d.x[1] == 0.0);
    CHECK(d.collision);
  }
  {
    double x[] = {1, 0, -1};
    DiffCoords d = diff_coords(x);
    CHECK(d.x[0] == 1.0);
    CHECK(d.x[1] == 1.0);
    CHECK(d.cyclic == -2.0);
  }
}

TEST_CASE("cylindrical chart basic point") {
  double z[] = {1, 0, 5}, pz[] = {0, 1, 0};
  PhasePoint pt = cylindrical3(z, pz);
  CHECK(pt.q[0] == doctest::Approx(1.0));
  CHECK(pt.q[1] == doctest::Approx(0.0));
  CHECK(pt.q[2] == doctest::Approx(5.0));
  CHECK(pt.p[0] == doctest::Approx(0.0));
  CHECK(pt.p[1] == doctest::Approx(1.0));
  CHECK(pt.p[2] == doctest::Approx(0.0));
}

TEST_CASE("cylindrical chart rejects on-axis input") {
  ChartPtr chart = make_cylindrical3_chart(false);
  double z[] = {0, 0, 3}, pz[] = {1, 0, 0}, q[3], pq[3];
  CHECK_THROWS_AS(chart->forward(std::span<const double>(z, 3),
                                 std::span<const double>(pz, 3),
                                 std::span<double>(q, 3), std::span<double>(pq, 3)),
                  ChartDomainError);
}

TEST_CASE("hyperspherical n=3 matches cylindrical") {
  // For n = 3 the spherical block is a plane, so both charts coincide up to
  // angle convention; compare kinetic energies and radii.
  ChartPtr cyl = make_cylindrical3_chart(false);
  ChartPtr hyp = make_hyperspherical_chart(3, false);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 30; ++trial) {
    double z[3], pz[3], q1[3], pq1[3], q2[3], pq2[3];
    for (int i = 0; i < 3; ++i) z[i] = u(rng), pz[i] = u(rng);
    if (std::hypot(z[0], z[1]) < 0.2) continue;
    cyl->forward(std::span<const double>(z, 3), std::span<const double>(pz, 3),
                 std::span<double>(q1, 3), std::span<double>(pq1, 3));
    hyp->forward(std::span<const double>(z, 3), std::span<const double>(pz, 3),
                 std::span<double>(q2, 3), std::span<double>(pq2, 3));
    CHECK(q1[0] == doctest::Approx(q2[0]).epsilon(1e-12));
    CHECK(q1[2] == doctest::Approx(q2[2]).epsilon(1e-12));
    CHECK(cyl->kinetic(std::span<const double>(q1, 3),
                       std::span<const double>(pq1, 3)) ==
          doctest::Approx(hyp->kinetic(std::span<const double>(q2, 3),
                                       std::span<const double>(pq2, 3)))
              .epsilon(1e-12));
  }
}

TEST_CASE("hyperspherical n=4 basic point") {
  ChartPtr chart = make_hyperspherical_chart(4, false);
  // unit radius in the spherical block, off the polar-angle poles
  double z[] = {0.6, 0.8, 0.0, 7}, pz[] = {0, 0, 0, 0}, q[4], pq[4];
  chart->forward(std::span<const double>(z, 4), std::span<const double>(pz, 4),
                 std::span<double>(q, 4), std::span<double>(pq, 4));
  CHECK(q[0] == doctest::Approx(1.0));
  CHECK(q[3] == doctest::Approx(7.0));

  // an exact pole of the first angle is rejected by the domain guard
  double zp[] = {1, 0, 0, 7};
  CHECK_THROWS_AS(chart->forward(std::span<const double>(zp, 4),
                                 std::span<const double>(pz, 4),
                                 std::span<double>(q, 4), std::span<double>(pq, 4)),
                  ChartDomainError);
}

TEST_CASE("plane reduction frame") {
  double x[] = {1, 0, 1, 0, -2, 0}, p[] = {0, 0, 0, 0, 0, 0};
  PhasePoint pt = plane_reduction(x, p);
  // X1 = 6, X2 = 0 in this configuration, so psi = 0 and r = 6/sqrt(6)
  CHECK(pt.q[1] == doctest::Approx(0.0));
  CHECK(pt.q[0] == doctest::Approx(6.0 / std::sqrt(6.0)));
}

TEST_CASE("plane reduction preserves norms") {
  ChartPtr chart = make_plane_reduction_chart();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    double x[6], p[6], q[6], pq[6];
    for (int i = 0; i < 6; ++i) x[i] = u(rng), p[i] = u(rng);
    double x1 = x[0] + x[2] - 2 * x[4], x2 = x[1] + x[3] - 2 * x[5];
    if (std::hypot(x1, x2) < 0.3) continue;
    chart->forward(std::span<const double>(x, 6), std::span<const double>(p, 6),
                   std::span<double>(q, 6), std::span<double>(pq, 6));
    double nx = 0.0, nq = 0.0;
    for (int i = 0; i < 6; ++i) nx += x[i] * x[i];
    // q = (r, psi, u1..u4): the frame coordinates are (r, u1..u4)
    nq = q[0] * q[0];
    for (int i = 2; i < 6; ++i) nq += q[i] * q[i];
    CHECK(std::abs(nx - nq) < 1e-12 * std::max(1.0, nx));
  }
}

TEST_CASE("round trips and kinetic invariance for every chart") {
  std::vector<ChartPtr> charts = {
      make_cartesian_chart(3),       make_jacobi_chart(3),
      make_cylindrical3_chart(true), make_cylindrical3_chart(false),
      make_hyperspherical_chart(4, true), make_plane_reduction_chart(),
      make_spherical4_chart(),       make_polar_chart()};
  for (const auto& chart : charts) {
    CAPTURE(chart->name());
    auto pts = sample_chart_points(chart, 100, 99);
    const int d = chart->dim();
    const int cd = chart->cart_dim();
    std::vector<double> x(cd), p(cd), q2(d), pq2(d);
    for (const auto& pt : pts) {
      chart->drop(pt, x, p);
      chart->forward(x, p, q2, pq2);
      for (int i = 0; i < d; ++i) {
        CHECK(std::abs(q2[i] - pt.q[i]) < 1e-10 * std::max(1.0, std::abs(pt.q[i])));
        CHECK(std::abs(pq2[i] - pt.p[i]) < 1e-10 * std::max(1.0, std::abs(pt.p[i])));
      }
      // cotangent lift preserves kinetic energy
      double cart_t = 0.0;
      for (int i = 0; i < cd; ++i) cart_t += 0.5 * p[i] * p[i];
      CHECK(std::abs(chart->kinetic(pt.q, pt.p) - cart_t) < 1e-12 * std::max(1.0, cart_t));
    }
  }
}

TEST_CASE("canonical bracket relations hold in every chart") {
  // {q_a, pq_b} = delta_ab etc., computed with the ambient Cartesian
  // canonical structure through dual passes of the forward map.
  std::vector<ChartPtr> charts = {
      make_jacobi_chart(3),          make_cylindrical3_chart(true),
      make_hyperspherical_chart(4, true), make_plane_reduction_chart(),
      make_spherical4_chart(),       make_polar_chart()};
  for (const auto& chart : charts) {
    CAPTURE(chart->name());
    auto pts = sample_chart_points(chart, 100, 5);
    const int d = chart->dim();
    const int cd = chart->cart_dim();
    std::vector<double> x(cd), p(cd);
    std::vector<Dual> xd(cd), pd(cd), qd(d), pqd(d);
    // jac[k][a], k over 2*cd cartesian directions, a over 2*d chart outputs
    std::vector<std::vector<double>> jac(2 * cd, std::vector<double>(2 * d));
    double worst = 0.0;
    for (const auto& pt : pts) {
      chart->drop(pt, x, p);
      for (int k = 0; k < 2 * cd; ++k) {
        for (int i = 0; i < cd; ++i) {
          xd[i] = Dual(x[i], k == i ? 1.0 : 0.0);
          pd[i] = Dual(p[i], k == cd + i ? 1.0 : 0.0);
        }
        chart->forward(std::span<const Dual>(xd), std::span<const Dual>(pd),
                       std::span<Dual>(qd), std::span<Dual>(pqd));
        for (int a = 0; a < d; ++a) {
          jac[k][a] = qd[a].d;
          jac[k][d + a] = pqd[a].d;
        }
      }
      for (int a = 0; a < 2 * d; ++a)
        for (int b = 0; b < 2 * d; ++b) {
          double br = 0.0;
          for (int i = 0; i < cd; ++i)
            br += jac[i][a] * jac[cd + i][b] - jac[cd + i][a] * jac[i][b];
          double expect = (b == d + a) ? 1.0 : (a == d + b) ? -1.0 : 0.0;
          worst = std::max(worst, std::abs(br - expect));
        }
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("frame identity: cos and sin of 3psi from the differences") {
  // In this frame cos(3 psi) = sqrt(2) X1 X2 X3 / r^3 and
  // sin(3 psi) = -(2 / (3 sqrt(6))) Y1 Y2 Y3 / r^3 with Y_i = X_i - X_{i+1}.
  ChartPtr chart = make_cylindrical3_chart(true);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    double x[3], p[3] = {0, 0, 0}, q[3], pq[3];
    for (double& v : x) v = u(rng);
    DiffCoords d = diff_coords(x, 1e-2);
    if (d.collision) continue;
    double x1 = d.x[0], x2 = d.x[1], x3 = d.cyclic;
    if (std::min({std::abs(x1 - x2), std::abs(x2 - x3), std::abs(x3 - x1)}) < 1e-2)
      continue;
    chart->forward(std::span<const double>(x, 3), std::span<const double>(p, 3),
                   std::span<double>(q, 3), std::span<double>(pq, 3));
    double r = q[0], psi = q[1];
    CHECK(std::cos(3 * psi) ==
          doctest::Approx(std::sqrt(2.0) * x1 * x2 * x3 / (r * r * r)).epsilon(1e-10));
    double y1 = x1 - x2, y2 = x2 - x3, y3 = x3 - x1;
    CHECK(std::sin(3 * psi) ==
          doctest::Approx(-2.0 / (3.0 * std::sqrt(6.0)) * y1 * y2 * y3 / (r * r * r))
              .epsilon(1e-10));
  }
}

TEST_CASE("chart_by_name round trip") {
  for (const auto& chart :
       {make_cylindrical3_chart(true), make_plane_reduction_chart(),
        make_spherical4_chart(), make_polar_chart(), make_cartesian_chart(3)}) {
    ChartPtr again = chart_by_name(chart->name());
    CHECK(again->name() == chart->name());
    CHECK(again->dim() == chart->dim());
  }
  CHECK_THROWS(chart_by_name("no_such_chart"));
}
