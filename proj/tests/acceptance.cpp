// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <vector>

#include "superint/dynamics.hpp"
#include "superint/lab.hpp"
#include "superint/observables.hpp"
#include "superint/sampling.hpp"

using namespace superint;
using superint::lab::json;

namespace {

int failures = 0;

void report(int number, const char* title, bool pass, const std::string& detail) {
  std::printf("criterion %2d [%s] %s (%s)\n", number, pass ? "PASS" : "FAIL",
              title, detail.c_str());
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

void criterion_1_jacobi_orthogonality() {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int n = 2; n <= 12; ++n) {
    JacobiMatrix m = jacobi_matrix(n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        double dot = 0.0;
        for (int k = 0; k < n; ++k) dot += m.at(r, k) * m.at(c, k);
        worst = std::max(worst, std::abs(dot - (r == c ? 1.0 : 0.0)));
      }
  }
  double secs = seconds_since(t0);
  report(1, "jacobi orthogonality n=2..12", worst < 1e-13 && secs < 1.0,
         fmt("max deviation %.2e, %.2f s", worst, secs));
}

void criterion_2_chart_fidelity() {
  std::vector<ChartPtr> charts = {
      make_jacobi_chart(3),          make_cylindrical3_chart(true),
      make_hyperspherical_chart(4, true), make_plane_reduction_chart(),
      make_spherical4_chart(),       make_polar_chart()};
  double worst_rt = 0.0, worst_br = 0.0;
  for (const auto& chart : charts) {
    const int d = chart->dim(), cd = chart->cart_dim();
    std::vector<double> x(cd), p(cd), q2(d), pq2(d);
    for (const auto& pt : sample_chart_points(chart, 1000, 2024)) {
      chart->drop(pt, x, p);
      chart->forward(x, p, q2, pq2);
      for (int i = 0; i < d; ++i) {
        worst_rt = std::max(worst_rt, std::abs(q2[i] - pt.q[i]) /
                                          std::max(1.0, std::abs(pt.q[i])));
        worst_rt = std::max(worst_rt, std::abs(pq2[i] - pt.p[i]) /
                                          std::max(1.0, std::abs(pt.p[i])));
      }
    }
    // canonical bracket relations via the ambient Cartesian structure
    std::vector<Dual> xd(cd), pd(cd), qd(d), pqd(d);
    std::vector<std::vector<double>> jac(2 * cd, std::vector<double>(2 * d));
    for (const auto& pt : sample_chart_points(chart, 100, 2025)) {
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
          worst_br = std::max(worst_br, std::abs(br - expect));
        }
    }
  }
  report(2, "chart round trips and canonical brackets",
         worst_rt < 1e-10 && worst_br < 1e-10,
         fmt("round trip %.2e, bracket %.2e", worst_rt, worst_br));
}

void criterion_3_integral_sets_commute() {
  auto t0 = std::chrono::steady_clock::now();
  struct Case {
    const char* name;
    PotentialSpec spec;
  };
  std::vector<Case> cases = {
      {"ttw(1,1)", ttw(1, 1.0)},
      {"angular3 cosine", angular3(make_cosine_profile(2.0, 0.5, 3))},
      {"evans V1", evans(EvansVariant::V1, 0.0, make_cosine_profile(2.0, 0.5, 2))},
      {"evans V2", evans(EvansVariant::V2, 1.5, make_cosine_profile(2.0, 0.5, 2))},
      {"evans V3", evans(EvansVariant::V3, 1.5, make_cosine_profile(2.0, 0.5, 2))},
      {"evans V4", evans(EvansVariant::V4, 1.0, nullptr, 1.0, 1.0, 1.0)},
      {"plane23", plane23_angular(make_inv_cos2_profile(1.0, 1))}};
  double worst = 0.0;
  const char* worst_case = "";
  for (const auto& c : cases) {
    IntegralSet set = c.spec.family == Family::Evans
                          ? integral_set_evans4(c.spec)
                      : c.spec.family == Family::Plane23
                          ? integral_set_plane23(c.spec)
                          : integral_set_3body(c.spec);
    auto pts = sample_system_points(c.spec, 200, 31415);
    BracketReport br = bracket_residual(set, pts);
    for (size_t i = 0; i < set.members.size(); ++i)
      if (br.max_residual[i] > worst) {
        worst = br.max_residual[i];
        worst_case = c.name;
      }
  }
  double secs = seconds_since(t0);
  report(3, "shipped integral sets commute", worst < 1e-10 && secs < 30.0,
         fmt("max residual %.2e, %.1f s", worst, secs) + " (worst: " +
             worst_case + ")");
}

void criterion_4_independence_ranks() {
  // 3-body
  PotentialSpec t = ttw(1, 1.0);
  IntegralSet s3 = integral_set_3body(t);
  auto pts3 = sample_system_points(t, 20, 101);
  std::vector<Observable> obs3 = {s3.hamiltonian};
  obs3.insert(obs3.end(), s3.members.begin(), s3.members.end());
  int r3 = independence_rank(obs3, pts3);

  // evans with candidate screening
  PotentialSpec e = evans(EvansVariant::V2, 1.5, make_cosine_profile(2.0, 0.5, 2));
  IntegralSet se = integral_set_evans4(e);
  auto ptse = sample_system_points(e, 40, 102);
  BracketReport bre = bracket_residual(se, ptse);
  std::vector<Observable> obse = {se.hamiltonian};
  obse.insert(obse.end(), se.members.begin(), se.members.end());
  int certified = 0;
  for (size_t i = 0; i < se.candidates.size(); ++i)
    if (bre.max_residual[se.members.size() + i] < 1e-10) {
      obse.push_back(se.candidates[i]);
      ++certified;
    }
  std::vector<PhasePoint> rank_e(ptse.begin(), ptse.begin() + 20);
  int re = independence_rank(obse, rank_e);

  // plane23 nine-set
  PotentialSpec p = plane23_angular(make_inv_cos2_profile(1.0, 1));
  IntegralSet sp = integral_set_plane23(p);
  auto ptsp = sample_system_points(p, 20, 103);
  int rp = independence_rank(sp.members, ptsp);

  bool pass = r3 == 4 && re >= 4 && (certified < 3 || re == 6) && rp == 9;
  char buf[120];
  std::snprintf(buf, sizeof(buf),
                "3-body %d, evans %d (%d candidates certified), plane23 %d", r3,
                re, certified, rp);
  report(4, "independence ranks 4 / >=4 (6) / 9", pass, buf);
}

void criterion_5_fifth_integral() {
  auto t0 = std::chrono::steady_clock::now();
  Observable h1 = reduced_hamiltonian(1, 1.0);
  Observable f1 = fifth_integral(1, 1.0);
  auto ok1 = [](const PhasePoint& p) {
    return std::abs(std::sin(3.0 * p.q[1])) > 0.2;
  };
  auto pts1 = sample_chart_points(make_polar_chart(), 100, 104, {}, ok1);
  double worst = 0.0;
  for (const auto& pt : pts1)
    worst = std::max(worst, std::abs(poisson_bracket(h1, f1, pt)));
  int degree = detect_momentum_degree(f1, pts1.front());

  // n=2 harness runs and the report records the residual statistics
  json cfg = {{"experiment", "verify"},
              {"system", {{"family", "ttw"}, {"n", 2}, {"k", 1.0}}},
              {"sampling", {{"seed", 105}, {"count", 40}}}};
  auto run = lab::run_experiment(
      cfg, (std::filesystem::temp_directory_path() / "superint_acc5").string());
  const json& fi = run.report["info"]["fifth_integral"];
  bool n2_recorded = fi.contains("vanishes") &&
                     (fi["vanishes"].get<bool>() || fi.contains("sign_scan"));
  double secs = seconds_since(t0);
  bool pass = worst < 1e-10 && degree == 3 && n2_recorded && secs < 10.0;
  report(5, "fifth integral: n=1 conjecture, n=2 recorded", pass,
         fmt("n=1 residual %.2e, degree %.0f", worst, degree) +
             (fi["vanishes"].get<bool>() ? ", n=2 vanishes" : ", n=2 scanned") +
             fmt(", %.1f s", secs));
}

void criterion_6_closed_form_constants() {
  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  ChartPtr chart = make_cylindrical3_chart(true);
  const double g = 1.7, h = 0.9;
  PotentialSpec cal = calogero(g, g, g), wol = wolfes(h, h, h);
  double worst_c = 0.0, worst_w = 0.0;
  int done = 0;
  while (done < 1000) {
    double x[3] = {u(rng), u(rng), u(rng)}, p[3] = {0, 0, 0}, q[3], pq[3];
    double d1 = x[0] - x[1], d2 = x[1] - x[2], d3 = x[2] - x[0];
    if (std::min({std::abs(d1), std::abs(d2), std::abs(d3)}) < 0.05) continue;
    if (std::min({std::abs(d1 - d2), std::abs(d2 - d3), std::abs(d3 - d1)}) < 0.05)
      continue;
    chart->forward(std::span<const double>(x, 3), std::span<const double>(p, 3),
                   std::span<double>(q, 3), std::span<double>(pq, 3));
    double vc = eval_difference_form(cal, std::span<const double>(x, 3));
    double cc = q[0] * std::cos(3.0 * q[1]);
    worst_c = std::max(
        worst_c,
        std::abs(vc - kCalogeroAngularConstant * g / (cc * cc)) / std::abs(vc));
    double vw = eval_difference_form(wol, std::span<const double>(x, 3));
    double sw = q[0] * std::sin(3.0 * q[1]);
    worst_w = std::max(
        worst_w,
        std::abs(vw - kWolfesAngularConstant * h / (sw * sw)) / std::abs(vw));
    ++done;
  }
  report(6, "closed-form constants 9/2 and 3/2", worst_c < 1e-10 && worst_w < 1e-10,
         fmt("calogero %.2e, wolfes %.2e", worst_c, worst_w));
}

void criterion_7_phase_shift_equivalence() {
  json cfg = {{"experiment", "equivalence"},
              {"system", {{"family", "equivalence"}, {"g", 1.0}, {"h", 3.0}}},
              {"sampling", {{"seed", 107}}}};
  auto run = lab::run_experiment(
      cfg, (std::filesystem::temp_directory_path() / "superint_acc7").string());
  double dev = run.report["checks"][0]["value"].get<double>();
  int used = run.report["info"]["grid_points_used"].get<int>();
  report(7, "phase-shift equivalence on 1e4 guarded grid points",
         run.passed && used >= 10000, fmt("deviation %.2e over %.0f points", dev, used));
}

void criterion_8_dynamics() {
  auto t0 = std::chrono::steady_clock::now();
  PotentialSpec s = ttw(1, 1.0);
  auto pt = sample_system_points(s, 1, 108).front();
  ChartPtr chart = natural_chart(s);
  std::vector<double> x0(3), p0(3);
  chart->drop(pt, x0, p0);

  IntegratorConfig cfg;
  cfg.steps = 100000;
  Trajectory traj = integrate(s, x0, p0, cfg);
  bool completed = traj.status == TrajectoryStatus::Completed;
  double worst = 0.0, h2 = 0.0;
  if (completed) {
    DriftReport drift = drift_report(traj, integral_set_3body(s));
    for (const auto& e : drift.entries) worst = std::max(worst, e.max_drift);
    h2 = drift.entries[2].max_drift;
  }

  // time reversal over 1e3 steps
  cfg.steps = 1000;
  Trajectory fwd = integrate(s, x0, p0, cfg);
  std::vector<double> xr(fwd.x(1000).begin(), fwd.x(1000).end());
  std::vector<double> pr(fwd.p(1000).begin(), fwd.p(1000).end());
  for (double& v : pr) v = -v;
  Trajectory back = integrate(s, xr, pr, cfg);
  double ret = 0.0;
  for (int i = 0; i < 3; ++i)
    ret = std::max(ret, std::abs(back.x(1000)[i] - x0[i]));

  double secs = seconds_since(t0);
  bool pass =
      completed && worst < 1e-5 && h2 < 1e-12 && ret < 1e-8 && secs < 10.0;
  report(8, "dynamics drifts and time reversal", pass,
         fmt("max drift %.2e, H2 drift %.2e", worst, h2) +
             fmt(", return %.2e, %.1f s", ret, secs));
}

void criterion_9_negative_controls() {
  // sign-corrupted H3
  PotentialSpec s = ttw(1, 1.0);
  IntegralSet set = integral_set_3body(s);
  Observable bad = set.members[2];
  auto inner = bad.eval;
  bad.eval = [inner](std::span<const Dual> q, std::span<const Dual> p) {
    Dual wedge = q[0] * p[2] - q[2] * p[0];
    return inner(q, p) - wedge * wedge;
  };
  auto pts = sample_system_points(s, 100, 109);
  double residual = 0.0;
  for (const auto& pt : pts)
    residual =
        std::max(residual, std::abs(poisson_bracket(set.hamiltonian, bad, pt)));

  json cfg = {{"experiment", "equivalence"},
              {"system", {{"family", "equivalence"}, {"g", 1.0}, {"h", 2.0}}},
              {"sampling", {{"seed", 110}}}};
  auto run = lab::run_experiment(
      cfg, (std::filesystem::temp_directory_path() / "superint_acc9").string());
  double dev = run.report["checks"][0]["value"].get<double>();

  bool pass = residual > 1e-2 && !run.passed && dev > 1e-2;
  report(9, "negative controls fail loudly", pass,
         fmt("corrupted H3 residual %.2e, mismatched deviation %.2e", residual, dev));
}

void criterion_10_determinism() {
  json cfg = {{"experiment", "verify"},
              {"system", {{"family", "ttw"}, {"n", 1}, {"k", 1.0}}},
              {"sampling", {{"seed", 111}, {"count", 60}}}};
  std::string out =
      (std::filesystem::temp_directory_path() / "superint_acc10").string();
  auto a = lab::run_experiment(cfg, out);
  auto b = lab::run_experiment(cfg, out);
  bool pass = lab::report_hash(a.report) == lab::report_hash(b.report);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "hash %016llx",
                static_cast<unsigned long long>(lab::report_hash(a.report)));
  report(10, "deterministic reports for identical config and seed", pass, buf);
}

}  // namespace

int main() {
  criterion_1_jacobi_orthogonality();
  criterion_2_chart_fidelity();
  criterion_3_integral_sets_commute();
  criterion_4_independence_ranks();
  criterion_5_fifth_integral();
  criterion_6_closed_form_constants();
  criterion_7_phase_shift_equivalence();
  criterion_8_dynamics();
  criterion_9_negative_controls();
  criterion_10_determinism();
  std::printf("%s: %d/10 criteria passed\n", failures == 0 ? "PASS" : "FAIL",
              10 - failures);
  return failures;
}
