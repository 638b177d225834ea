#include "superint/observables.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace superint {

namespace {

constexpr int kMaxDim = 16;

using Buf = std::array<Dual, kMaxDim>;

void load(const PhasePoint& pt, Buf& q, Buf& p) {
  for (size_t i = 0; i < pt.q.size(); ++i) q[i] = Dual(pt.q[i]);
  for (size_t i = 0; i < pt.p.size(); ++i) p[i] = Dual(pt.p[i]);
}

}  // namespace

double Observable::value(const PhasePoint& pt) const {
  Buf q, p;
  load(pt, q, p);
  const size_t d = pt.q.size();
  return eval(std::span<const Dual>(q.data(), d), std::span<const Dual>(p.data(), d)).v;
}

void Observable::gradient(const PhasePoint& pt, std::span<double> dq,
                          std::span<double> dp) const {
  Buf q, p;
  load(pt, q, p);
  const size_t d = pt.q.size();
  auto qs = std::span<const Dual>(q.data(), d);
  auto ps = std::span<const Dual>(p.data(), d);
  for (size_t a = 0; a < d; ++a) {
    q[a].d = 1.0;
    dq[a] = eval(qs, ps).d;
    q[a].d = 0.0;
  }
  for (size_t a = 0; a < d; ++a) {
    p[a].d = 1.0;
    dp[a] = eval(qs, ps).d;
    p[a].d = 0.0;
  }
}

Rational make_rational(long long num, long long den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

Rational rat_mul(Rational a, Rational b) {
  // cross-reduce before multiplying to keep intermediates small
  Rational x = make_rational(a.num, b.den);
  Rational y = make_rational(b.num, a.den);
  return make_rational(x.num * y.num, x.den * y.den);
}

namespace {

long long binomial(int a, int b) {
  if (b < 0 || b > a) return 0;
  long long result = 1;
  for (int j = 1; j <= b; ++j) {
    result = result * (a - b + j) / j;
  }
  return result;
}

long long ipow(long long base, int e) {
  long long r = 1;
  while (e-- > 0) r *= base;
  return r;
}

}  // namespace

const CoefficientEntry& CoefficientTable::at(int sigma, int i) const {
  for (const auto& e : entries)
    if (e.sigma == sigma && e.i == i) return e;
  throw std::out_of_range("coefficient table index");
}

CoefficientTable coefficient_table(int n) {
  if (n < 1) throw std::domain_error("coefficient_table: n must be >= 1");
  CoefficientTable t;
  t.n = n;
  const int m = 2 * n + 1;
  for (int sigma = 0; sigma <= n; ++sigma) {
    for (int i = 0; i <= 2 * sigma + 1; ++i) {
      CoefficientEntry e;
      e.sigma = sigma;
      e.i = i;
      e.l = 2 * sigma + 1 - i;
      long long sign = (sigma % 2 == 0) ? 1 : -1;  // (-1)^(2n - sigma)
      Rational a = make_rational(sign, ipow(m, e.l));
      a = rat_mul(a, make_rational(binomial(m, i), 1));
      a = rat_mul(a, make_rational(binomial((m - i) / 2, (2 * sigma + 1 - i) / 2), 1));
      e.a = a;
      t.entries.push_back(e);
    }
  }
  return t;
}

Observable hamiltonian(const PotentialSpec& spec, const ChartPtr& chart) {
  Observable h;
  h.name = "H";
  h.chart = chart->name();
  h.momentum_degree = 2;
  const bool cartesian = chart->name().rfind("cartesian", 0) == 0 ||
                         chart->name().rfind("jacobi", 0) == 0;
  if (cartesian && chart->dim() != cart_dim(spec))
    throw std::invalid_argument("hamiltonian: chart dimension does not match family");
  if (!cartesian && chart->name() != natural_chart(spec)->name())
    throw std::invalid_argument("hamiltonian: chart incompatible with family");
  PotentialSpec s = spec;
  ChartPtr c = chart;
  if (cartesian) {
    h.eval = [s, c](std::span<const Dual> q, std::span<const Dual> p) {
      return c->kinetic(q, p) + eval_difference_form(s, q);
    };
  } else {
    h.eval = [s, c](std::span<const Dual> q, std::span<const Dual> p) {
      return c->kinetic(q, p) + eval_angular_form(s, q);
    };
  }
  return h;
}

IntegralSet integral_set_3body(const PotentialSpec& spec) {
  ProfilePtr f = angular_profile(spec);
  if (!f) throw std::invalid_argument("integral_set_3body: no single-angle profile");
  ChartPtr chart = make_cylindrical3_chart(true);
  const std::string tag = chart->name();

  IntegralSet set;
  set.system = "3body";
  set.claimed_independent = 4;
  set.rank_includes_hamiltonian = true;
  set.hamiltonian = hamiltonian(spec, chart);

  auto h1_expr = [f](std::span<const Dual> q, std::span<const Dual> p) {
    return Dual(0.5) * p[1] * p[1] + f->f(q[1]);
  };

  Observable h1{"H1", tag, 2, h1_expr};
  Observable h2{"H2", tag, 2,
                [](std::span<const Dual>, std::span<const Dual> p) {
                  return Dual(0.5) * p[2] * p[2];
                }};
  Observable h3{"H3", tag, 2,
                [h1_expr](std::span<const Dual> q, std::span<const Dual> p) {
                  Dual wedge = q[0] * p[2] - q[2] * p[0];
                  return Dual(0.5) * wedge * wedge +
                         (q[2] * q[2]) / (q[0] * q[0]) * h1_expr(q, p);
                }};
  set.members = {h1, h2, h3};
  return set;
}

namespace {

Observable fifth_integral_impl(int n, double k, std::vector<double> scale,
                               bool lifted) {
  if (n < 1) throw std::domain_error("fifth_integral: n must be >= 1");
  if (!(k > 0)) throw std::domain_error("fifth_integral: k must be > 0");
  CoefficientTable table = coefficient_table(n);
  if (scale.empty()) scale.assign(table.entries.size(), 1.0);
  if (scale.size() != table.entries.size())
    throw std::invalid_argument("fifth_integral: entry scale size mismatch");

  const int m = 2 * n + 1;
  struct Term {
    double a;
    int i, l, pow_base, pow_r;
  };
  std::vector<Term> terms;
  terms.reserve(table.entries.size());
  for (size_t j = 0; j < table.entries.size(); ++j) {
    const auto& e = table.entries[j];
    terms.push_back({e.a.to_double() * scale[j], e.i, e.l, n - e.sigma, m - e.i});
  }

  Observable obs;
  obs.name = "I" + std::to_string(m);
  obs.chart = lifted ? "cylindrical3_particles" : "polar";
  obs.momentum_degree = m;
  obs.eval = [terms, m, k](std::span<const Dual> q, std::span<const Dual> p) {
    Dual r = q[0], psi = q[1], pr = p[0], pp = p[1];
    Dual arg = Dual(static_cast<double>(m)) * psi;
    Dual s = sin(arg), c = cos(arg);
    if (std::abs(s.v) < kCollisionGuard)
      throw SingularityError("sin((2n+1)psi)", std::abs(s.v));
    Dual base = Dual(2.0 * k) / (s * s);
    Dual inv_r = Dual(1.0) / r;
    Dual acc(0.0);
    for (const auto& t : terms) {
      // l-th derivative of cos(m psi): m^l times the cos/sin cycle
      Dual dcos;
      switch (t.l % 4) {
        case 0: dcos = c; break;
        case 1: dcos = -s; break;
        case 2: dcos = -c; break;
        default: dcos = s; break;
      }
      dcos = Dual(std::pow(static_cast<double>(m), t.l)) * dcos;
      acc += Dual(t.a) * pow_int(inv_r, t.pow_r) * pow_int(base, t.pow_base) *
             dcos * pow_int(pr, t.i) * pow_int(pp, t.l);
    }
    return acc;
  };
  return obs;
}

}  // namespace

Observable fifth_integral(int n, double k) {
  return fifth_integral_impl(n, k, {}, false);
}

Observable fifth_integral_scaled(int n, double k,
                                 const std::vector<double>& entry_scale) {
  return fifth_integral_impl(n, k, entry_scale, false);
}

Observable fifth_integral_lifted(int n, double k) {
  return fifth_integral_impl(n, k, {}, true);
}

Observable reduced_hamiltonian(int n, double k) {
  const int m = 2 * n + 1;
  Observable h;
  h.name = "H_reduced";
  h.chart = "polar";
  h.momentum_degree = 2;
  h.eval = [m, k](std::span<const Dual> q, std::span<const Dual> p) {
    Dual d = q[0] * sin(Dual(static_cast<double>(m)) * q[1]);
    if (std::abs(d.v) < kCollisionGuard)
      throw SingularityError("r*sin((2n+1)psi)", std::abs(d.v));
    return Dual(0.5) * (p[0] * p[0] + p[1] * p[1] / (q[0] * q[0])) +
           Dual(k) / (d * d);
  };
  return h;
}

IntegralSet integral_set_evans4(const PotentialSpec& spec) {
  if (spec.family != Family::Evans)
    throw std::invalid_argument("integral_set_evans4: not an Evans spec");
  ChartPtr chart = make_spherical4_chart();
  const std::string tag = chart->name();
  PotentialSpec s = spec;

  IntegralSet set;
  set.system = "evans4";
  set.claimed_independent = 6;
  set.rank_includes_hamiltonian = true;
  set.hamiltonian = hamiltonian(spec, chart);
  set.hamiltonian.name = "Hhat";

  auto h1_expr = [s](std::span<const Dual> q, std::span<const Dual> p) {
    Dual s2 = sin(q[2]);
    return Dual(0.5) * (p[2] * p[2] + p[1] * p[1] / (s2 * s2)) +
           q[0] * q[0] * eval_angular_form(s, q);
  };

  Observable h1{"H1", tag, 2, h1_expr};
  Observable h5{"H5", tag, 2,
                [](std::span<const Dual>, std::span<const Dual> p) {
                  return p[3] * p[3];
                }};
  Observable h6{"H6", tag, 2,
                [h1_expr](std::span<const Dual> q, std::span<const Dual> p) {
                  Dual wedge = q[3] * p[0] - q[0] * p[3];
                  return Dual(0.5) * wedge * wedge +
                         (q[3] * q[3]) / (q[0] * q[0]) * h1_expr(q, p);
                }};
  set.members = {h1, h5, h6};

  // Screened candidates for the unprinted "old" integrals: the psi1
  // separation constant and the (z, u) sector pair that exists when the
  // potential splits off a k/z^2 piece (z = rho cos psi2).
  ProfilePtr g1;
  double cz = 0.0;
  switch (spec.variant) {
    case EvansVariant::V1:
      g1 = spec.profile;
      break;
    case EvansVariant::V2:
      g1 = spec.profile;
      cz = spec.k;
      break;
    case EvansVariant::V3:
      g1 = spec.profile;
      break;
    case EvansVariant::V4:
      g1 = make_inv_trig_pair_profile(spec.k * spec.c2, spec.k * spec.c3);
      cz = spec.k * spec.c1;
      break;
  }
  if (g1) {
    set.candidates.push_back(
        Observable{"L_psi1", tag, 2,
                   [g1](std::span<const Dual> q, std::span<const Dual> p) {
                     return Dual(0.5) * p[1] * p[1] + g1->f(q[1]);
                   }});
  }
  auto pz_expr = [](std::span<const Dual> q, std::span<const Dual> p) {
    return cos(q[2]) * p[0] - sin(q[2]) * p[2] / q[0];
  };
  set.candidates.push_back(Observable{
      "Z_sector", tag, 2,
      [pz_expr, cz](std::span<const Dual> q, std::span<const Dual> p) {
        Dual z = q[0] * cos(q[2]);
        if (std::abs(z.v) < kCollisionGuard)
          throw SingularityError("rho*cos(psi2)", std::abs(z.v));
        Dual pz = pz_expr(q, p);
        return Dual(0.5) * pz * pz + Dual(cz) / (z * z);
      }});
  set.candidates.push_back(Observable{
      "ZU_momentum", tag, 2,
      [pz_expr, cz](std::span<const Dual> q, std::span<const Dual> p) {
        Dual z = q[0] * cos(q[2]);
        if (std::abs(z.v) < kCollisionGuard)
          throw SingularityError("rho*cos(psi2)", std::abs(z.v));
        Dual pz = pz_expr(q, p);
        Dual wedge = z * p[3] - q[3] * pz;
        return Dual(0.5) * wedge * wedge +
               Dual(cz) * (q[3] * q[3]) / (z * z);
      }});
  return set;
}

IntegralSet integral_set_plane23(const PotentialSpec& spec) {
  if (spec.family != Family::Plane23)
    throw std::invalid_argument("integral_set_plane23: not a plane23 spec");
  ProfilePtr f = angular_profile(spec);
  ChartPtr chart = make_plane_reduction_chart();
  const std::string tag = chart->name();

  IntegralSet set;
  set.system = "plane23";
  set.claimed_independent = 9;
  set.rank_includes_hamiltonian = false;
  set.hamiltonian = hamiltonian(spec, chart);

  auto h1_expr = [f](std::span<const Dual> q, std::span<const Dual> p) {
    return Dual(0.5) * p[1] * p[1] + f->f(q[1]);
  };
  set.members.push_back(Observable{"H1", tag, 2, h1_expr});
  for (int i = 0; i < 4; ++i) {
    set.members.push_back(
        Observable{"H" + std::to_string(i + 2), tag, 2,
                   [i](std::span<const Dual>, std::span<const Dual> p) {
                     return p[2 + i] * p[2 + i];
                   }});
  }
  for (int i = 0; i < 4; ++i) {
    set.members.push_back(Observable{
        "H'" + std::to_string(i + 1), tag, 2,
        [i, h1_expr](std::span<const Dual> q, std::span<const Dual> p) {
          Dual wedge = q[0] * p[2 + i] - q[2 + i] * p[0];
          return Dual(0.5) * wedge * wedge +
                 (q[2 + i] * q[2 + i]) / (q[0] * q[0]) * h1_expr(q, p);
        }});
  }
  return set;
}

double poisson_bracket(const Observable& f, const Observable& g,
                       const PhasePoint& pt) {
  if (f.chart != g.chart || f.chart != pt.chart)
    throw std::invalid_argument("poisson_bracket: chart mismatch (" + f.chart +
                                " vs " + g.chart + " at point in " + pt.chart + ")");
  const size_t d = pt.q.size();
  std::array<double, kMaxDim> fq, fp, gq, gp;
  f.gradient(pt, std::span<double>(fq.data(), d), std::span<double>(fp.data(), d));
  g.gradient(pt, std::span<double>(gq.data(), d), std::span<double>(gp.data(), d));
  double acc = 0.0;
  for (size_t a = 0; a < d; ++a) acc += fq[a] * gp[a] - fp[a] * gq[a];
  return acc;
}

BracketReport bracket_residual(const IntegralSet& set,
                               const std::vector<PhasePoint>& points) {
  if (points.empty()) throw std::invalid_argument("bracket_residual: no points");
  BracketReport report;
  std::vector<const Observable*> all;
  for (const auto& m : set.members) {
    report.names.push_back(m.name);
    report.is_candidate.push_back(false);
    all.push_back(&m);
  }
  for (const auto& c : set.candidates) {
    report.names.push_back(c.name);
    report.is_candidate.push_back(true);
    all.push_back(&c);
  }
  report.max_residual.assign(all.size(), 0.0);
  report.pairwise.assign(all.size(), std::vector<double>(all.size(), 0.0));
  for (const auto& pt : points) {
    for (size_t i = 0; i < all.size(); ++i) {
      report.max_residual[i] =
          std::max(report.max_residual[i],
                   std::abs(poisson_bracket(set.hamiltonian, *all[i], pt)));
      for (size_t j = i + 1; j < all.size(); ++j) {
        double b = std::abs(poisson_bracket(*all[i], *all[j], pt));
        report.pairwise[i][j] = std::max(report.pairwise[i][j], b);
        report.pairwise[j][i] = report.pairwise[i][j];
      }
    }
  }
  return report;
}

namespace {

Eigen::MatrixXd gradient_matrix(const std::vector<Observable>& obs,
                                const PhasePoint& pt) {
  const int d = static_cast<int>(pt.q.size());
  Eigen::MatrixXd g(static_cast<int>(obs.size()), 2 * d);
  std::array<double, kMaxDim> dq, dp;
  for (size_t i = 0; i < obs.size(); ++i) {
    obs[i].gradient(pt, std::span<double>(dq.data(), d),
                    std::span<double>(dp.data(), d));
    for (int a = 0; a < d; ++a) {
      g(static_cast<int>(i), a) = dq[a];
      g(static_cast<int>(i), d + a) = dp[a];
    }
  }
  return g;
}

}  // namespace

int independence_rank(const std::vector<Observable>& obs,
                      const std::vector<PhasePoint>& points, double rel_tol) {
  if (obs.empty() || points.empty())
    throw std::invalid_argument("independence_rank: empty input");
  int best = 0;
  for (const auto& pt : points) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gradient_matrix(obs, pt));
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int j = 0; j < sv.size(); ++j)
      if (sv(j) > rel_tol * sv(0)) ++rank;
    best = std::max(best, rank);
  }
  return best;
}

std::vector<std::vector<double>> singular_value_spectra(
    const std::vector<Observable>& obs, const std::vector<PhasePoint>& points) {
  std::vector<std::vector<double>> spectra;
  for (const auto& pt : points) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gradient_matrix(obs, pt));
    const auto& sv = svd.singularValues();
    spectra.emplace_back(sv.data(), sv.data() + sv.size());
  }
  return spectra;
}

int detect_momentum_degree(const Observable& obs, const PhasePoint& pt,
                           int max_degree) {
  // g(lambda) = obs(q, lambda p) sampled at integers; forward differences of
  // order k vanish identically for a polynomial of degree < k.
  std::vector<double> g(max_degree + 2);
  PhasePoint scaled = pt;
  double scale = 0.0;
  for (int j = 0; j < static_cast<int>(g.size()); ++j) {
    for (size_t a = 0; a < pt.p.size(); ++a)
      scaled.p[a] = pt.p[a] * static_cast<double>(j);
    g[j] = obs.value(scaled);
    scale = std::max(scale, std::abs(g[j]));
  }
  const double tol = 1e-7 * std::max(1.0, scale);
  int degree = 0;
  std::vector<double> diff = g;
  for (int k = 1; k < static_cast<int>(g.size()); ++k) {
    for (size_t j = 0; j + k < g.size(); ++j) diff[j] = diff[j + 1] - diff[j];
    double m = 0.0;
    for (size_t j = 0; j + k < g.size(); ++j) m = std::max(m, std::abs(diff[j]));
    if (m > tol) degree = k;
  }
  return degree;
}

}  // namespace superint
