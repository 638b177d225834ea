#include "superint/potentials.hpp"

#include <cmath>

namespace superint {

namespace {

template <class T>
void guard_denominator(const char* name, const T& value) {
  if (std::abs(value_of(value)) < kCollisionGuard)
    throw SingularityError(name, std::abs(value_of(value)));
}

template <class T>
T eval_profile(const AngularProfile& f, const T& x) {
  if constexpr (std::is_same_v<T, Dual>) {
    return f.f(x);
  } else {
    return f.f(Dual(x)).v;
  }
}

const AngularProfile& require_profile(const PotentialSpec& spec) {
  if (!spec.profile) throw std::invalid_argument("potential family needs a profile");
  return *spec.profile;
}

// Shared cylindrical chart from particle coordinates for the 3-body families.
const Chart& body3_chart() {
  static const ChartPtr chart = make_cylindrical3_chart(true);
  return *chart;
}
const Chart& plane_chart() {
  static const ChartPtr chart = make_plane_reduction_chart();
  return *chart;
}
const Chart& evans_chart() {
  static const ChartPtr chart = make_spherical4_chart();
  return *chart;
}

template <class T>
T evans_v(const PotentialSpec& spec, const T& rho, const T& psi1, const T& psi2) {
  T s2 = sin(psi2), c2 = cos(psi2);
  guard_denominator("rho", rho);
  switch (spec.variant) {
    case EvansVariant::V1: {
      T d = rho * s2;
      guard_denominator("rho*sin(psi2)", d);
      return eval_profile(require_profile(spec), psi1) / (d * d);
    }
    case EvansVariant::V2: {
      T ds = rho * s2, dc = rho * c2;
      guard_denominator("rho*sin(psi2)", ds);
      guard_denominator("rho*cos(psi2)", dc);
      return T(spec.k) / (dc * dc) +
             eval_profile(require_profile(spec), psi1) / (ds * ds);
    }
    case EvansVariant::V3: {
      T d = rho * s2;
      guard_denominator("rho*sin(psi2)", d);
      return (T(spec.k) * c2 + eval_profile(require_profile(spec), psi1)) / (d * d);
    }
    case EvansVariant::V4: {
      T s1 = sin(psi1), c1 = cos(psi1);
      guard_denominator("cos(psi2)", c2);
      guard_denominator("sin(psi2)", s2);
      guard_denominator("cos(psi1)", c1);
      guard_denominator("sin(psi1)", s1);
      T inner = T(spec.k) + T(spec.c1) / (c2 * c2) +
                (T(spec.c2) / (c1 * c1) + T(spec.c3) / (s1 * s1)) / (s2 * s2);
      return T(spec.k) / (rho * rho) * inner;
    }
  }
  throw std::logic_error("unknown Evans variant");
}

// F(psi)/r^2 and relatives, from chart coordinates.
template <class T>
T angular_value(const PotentialSpec& spec, std::span<const T> q) {
  switch (spec.family) {
    case Family::Ttw: {
      const int m = 2 * spec.ttw_n + 1;
      T d = q[0] * sin(T(static_cast<double>(m)) * q[1]);
      guard_denominator("r*sin((2n+1)psi)", d);
      return T(spec.k) / (d * d);
    }
    case Family::Evans:
      return evans_v(spec, q[0], q[1], q[2]);
    case Family::Calogero:
    case Family::Wolfes:
    case Family::Angular3:
    case Family::Plane23: {
      ProfilePtr f = angular_profile(spec);
      guard_denominator("r", q[0]);
      return eval_profile(*f, q[1]) / (q[0] * q[0]);
    }
  }
  throw std::logic_error("unknown family");
}

template <class T>
T difference_value(const PotentialSpec& spec, std::span<const T> x) {
  switch (spec.family) {
    case Family::Calogero: {
      T d1 = x[0] - x[1], d2 = x[1] - x[2], d3 = x[2] - x[0];
      guard_denominator("X1", d1);
      guard_denominator("X2", d2);
      guard_denominator("X3", d3);
      return T(spec.c1) / (d1 * d1) + T(spec.c2) / (d2 * d2) +
             T(spec.c3) / (d3 * d3);
    }
    case Family::Wolfes: {
      T x1 = x[0] - x[1], x2 = x[1] - x[2], x3 = x[2] - x[0];
      T y1 = x1 - x2, y2 = x2 - x3, y3 = x3 - x1;
      guard_denominator("X1-X2", y1);
      guard_denominator("X2-X3", y2);
      guard_denominator("X3-X1", y3);
      return T(spec.c1) / (y1 * y1) + T(spec.c2) / (y2 * y2) +
             T(spec.c3) / (y3 * y3);
    }
    case Family::Plane23: {
      if (spec.profile2) {
        T x1 = x[0] + x[2] - T(2.0) * x[4];
        T x2 = x[1] + x[3] - T(2.0) * x[5];
        guard_denominator("X1", x1);
        guard_denominator("X2", x2);
        return eval_profile(require_profile(spec), x2 / x1) / (x1 * x1) +
               eval_profile(*spec.profile2, x1 / x2) / (x2 * x2);
      }
      // single angular F: through the plane chart
      T q[6], pq[6], p[6];
      for (int i = 0; i < 6; ++i) p[i] = T(0.0);
      plane_chart().forward(std::span<const T>(x), std::span<const T>(p, 6),
                            std::span<T>(q, 6), std::span<T>(pq, 6));
      return angular_value(spec, std::span<const T>(q, 6));
    }
    case Family::Ttw:
    case Family::Angular3: {
      T q[3], pq[3], p[3] = {T(0.0), T(0.0), T(0.0)};
      body3_chart().forward(std::span<const T>(x), std::span<const T>(p, 3),
                            std::span<T>(q, 3), std::span<T>(pq, 3));
      return angular_value(spec, std::span<const T>(q, 3));
    }
    case Family::Evans: {
      T q[4], pq[4], p[4] = {T(0.0), T(0.0), T(0.0), T(0.0)};
      evans_chart().forward(std::span<const T>(x), std::span<const T>(p, 4),
                            std::span<T>(q, 4), std::span<T>(pq, 4));
      return angular_value(spec, std::span<const T>(q, 4));
    }
  }
  throw std::logic_error("unknown family");
}

ProfilePtr make_profile(std::string name, std::function<Dual(Dual)> f,
                        std::function<double(double)> margin) {
  auto p = std::make_shared<AngularProfile>();
  p->name = std::move(name);
  p->f = std::move(f);
  p->domain_margin = std::move(margin);
  return p;
}

}  // namespace

ProfilePtr make_const_profile(double c) {
  return make_profile("const", [c](Dual) { return Dual(c); },
                      [](double) { return 1.0; });
}

ProfilePtr make_cosine_profile(double a, double b, int m) {
  return make_profile(
      "cosine",
      [a, b, m](Dual x) { return Dual(a) + Dual(b) * cos(Dual(static_cast<double>(m)) * x); },
      [](double) { return 1.0; });
}

ProfilePtr make_inv_sin2_profile(double k, int m) {
  return make_profile(
      "inv_sin2",
      [k, m](Dual x) {
        Dual s = sin(Dual(static_cast<double>(m)) * x);
        guard_denominator("sin(m*psi)", s);
        return Dual(k) / (s * s);
      },
      [m](double x) { return std::abs(std::sin(m * x)); });
}

ProfilePtr make_inv_cos2_profile(double k, int m) {
  return make_profile(
      "inv_cos2",
      [k, m](Dual x) {
        Dual c = cos(Dual(static_cast<double>(m)) * x);
        guard_denominator("cos(m*psi)", c);
        return Dual(k) / (c * c);
      },
      [m](double x) { return std::abs(std::cos(m * x)); });
}

ProfilePtr make_inv_trig_pair_profile(double k2, double k3) {
  return make_profile(
      "inv_trig_pair",
      [k2, k3](Dual x) {
        Dual c = cos(x), s = sin(x);
        guard_denominator("cos(psi)", c);
        guard_denominator("sin(psi)", s);
        return Dual(k2) / (c * c) + Dual(k3) / (s * s);
      },
      [](double x) {
        return std::min(std::abs(std::cos(x)), std::abs(std::sin(x)));
      });
}

ProfilePtr make_inv_one_plus_sq_profile(double c) {
  return make_profile(
      "inv_one_plus_sq",
      [c](Dual t) { return Dual(c) / (Dual(1.0) + t * t); },
      [](double) { return 1.0; });
}

ProfilePtr finite_difference_profile(ProfilePtr base) {
  auto p = std::make_shared<AngularProfile>();
  p->name = base->name + "_fd";
  p->domain_margin = base->domain_margin;
  p->finite_difference = true;
  p->f = [base](Dual x) {
    const double h = 1e-6;
    double v = base->f(Dual(x.v)).v;
    double d = (base->f(Dual(x.v + h)).v - base->f(Dual(x.v - h)).v) / (2.0 * h);
    return Dual(v, d * x.d);
  };
  return p;
}

ProfilePtr shift_profile(ProfilePtr base, double alpha) {
  auto p = std::make_shared<AngularProfile>();
  p->name = base->name + "_shifted";
  p->finite_difference = base->finite_difference;
  p->f = [base, alpha](Dual x) { return base->f(x + Dual(alpha)); };
  p->domain_margin = [base, alpha](double x) {
    return base->domain_margin ? base->domain_margin(x + alpha) : 1.0;
  };
  return p;
}

PotentialSpec calogero(double k1, double k2, double k3) {
  PotentialSpec s;
  s.family = Family::Calogero;
  s.c1 = k1;
  s.c2 = k2;
  s.c3 = k3;
  return s;
}

PotentialSpec wolfes(double h1, double h2, double h3) {
  PotentialSpec s;
  s.family = Family::Wolfes;
  s.c1 = h1;
  s.c2 = h2;
  s.c3 = h3;
  return s;
}

PotentialSpec angular3(ProfilePtr f) {
  PotentialSpec s;
  s.family = Family::Angular3;
  s.profile = std::move(f);
  return s;
}

PotentialSpec ttw(int n, double k) {
  if (n < 1) throw std::domain_error("ttw: n must be >= 1");
  if (!(k > 0)) throw std::domain_error("ttw: k must be > 0");
  PotentialSpec s;
  s.family = Family::Ttw;
  s.ttw_n = n;
  s.k = k;
  return s;
}

PotentialSpec evans(EvansVariant variant, double k, ProfilePtr f, double k1,
                    double k2, double k3) {
  PotentialSpec s;
  s.family = Family::Evans;
  s.variant = variant;
  s.k = k;
  s.profile = std::move(f);
  s.c1 = k1;
  s.c2 = k2;
  s.c3 = k3;
  return s;
}

PotentialSpec plane23(ProfilePtr f1, ProfilePtr f2) {
  PotentialSpec s;
  s.family = Family::Plane23;
  s.profile = std::move(f1);
  s.profile2 = std::move(f2);
  return s;
}

PotentialSpec plane23_angular(ProfilePtr f) {
  PotentialSpec s;
  s.family = Family::Plane23;
  s.profile = std::move(f);
  return s;
}

int cart_dim(const PotentialSpec& spec) {
  switch (spec.family) {
    case Family::Evans:
      return 4;
    case Family::Plane23:
      return 6;
    default:
      return 3;
  }
}

ChartPtr natural_chart(const PotentialSpec& spec) {
  switch (spec.family) {
    case Family::Evans:
      return make_spherical4_chart();
    case Family::Plane23:
      return make_plane_reduction_chart();
    default:
      return make_cylindrical3_chart(true);
  }
}

double eval_difference_form(const PotentialSpec& spec, std::span<const double> x) {
  return difference_value(spec, x);
}
Dual eval_difference_form(const PotentialSpec& spec, std::span<const Dual> x) {
  return difference_value(spec, x);
}

double eval_angular_form(const PotentialSpec& spec, const PhasePoint& pt) {
  return angular_value(spec, std::span<const double>(pt.q));
}
Dual eval_angular_form(const PotentialSpec& spec, std::span<const Dual> q) {
  return angular_value(spec, q);
}

ProfilePtr angular_profile(const PotentialSpec& spec) {
  switch (spec.family) {
    case Family::Calogero:
      if (spec.c1 == spec.c2 && spec.c2 == spec.c3) {
        return make_inv_cos2_profile(kCalogeroAngularConstant * spec.c1, 3);
      }
      break;
    case Family::Wolfes:
      if (spec.c1 == spec.c2 && spec.c2 == spec.c3) {
        return make_inv_sin2_profile(kWolfesAngularConstant * spec.c1, 3);
      }
      break;
    case Family::Ttw:
      return make_inv_sin2_profile(spec.k, 2 * spec.ttw_n + 1);
    case Family::Angular3:
      return spec.profile;
    case Family::Plane23: {
      if (!spec.profile2) return spec.profile;
      ProfilePtr f1 = spec.profile, f2 = spec.profile2;
      return make_profile(
          "plane23_composed",
          [f1, f2](Dual psi) {
            Dual c = cos(psi), s = sin(psi);
            guard_denominator("cos(psi)", c);
            guard_denominator("sin(psi)", s);
            // X1 = sqrt(6) r cos(psi), X2 = sqrt(6) r sin(psi)
            return (f1->f(s / c) / (c * c) + f2->f(c / s) / (s * s)) / Dual(6.0);
          },
          [](double x) {
            return std::min(std::abs(std::cos(x)), std::abs(std::sin(x)));
          });
    }
    case Family::Evans:
      return nullptr;  // two-angle family, no single-angle profile
  }
  // Unequal couplings have no single-angle closed form; back the profile by
  // the difference form through the inverse chart at r = 1, u = 0.
  PotentialSpec copy = spec;
  return make_profile(
      spec.family == Family::Calogero ? "calogero_diff" : "wolfes_diff",
      [copy](Dual psi) {
        Dual q[3] = {Dual(1.0), psi, Dual(0.0)};
        Dual pq[3] = {Dual(0.0), Dual(0.0), Dual(0.0)};
        Dual x[3], p[3];
        body3_chart().inverse(std::span<const Dual>(q, 3),
                              std::span<const Dual>(pq, 3), std::span<Dual>(x, 3),
                              std::span<Dual>(p, 3));
        return difference_value(copy, std::span<const Dual>(x, 3));
      },
      [copy](double psi) {
        // smallest denominator at r = 1; lets the sampler stay off the poles
        double q[3] = {1.0, psi, 0.0}, pq[3] = {0.0, 0.0, 0.0}, x[3], p[3];
        body3_chart().inverse(std::span<const double>(q, 3),
                              std::span<const double>(pq, 3),
                              std::span<double>(x, 3), std::span<double>(p, 3));
        double d1 = x[0] - x[1], d2 = x[1] - x[2], d3 = x[2] - x[0];
        if (copy.family == Family::Wolfes) {
          double y1 = d1 - d2, y2 = d2 - d3, y3 = d3 - d1;
          return std::min({std::abs(y1), std::abs(y2), std::abs(y3)});
        }
        return std::min({std::abs(d1), std::abs(d2), std::abs(d3)});
      });
}

double check_homogeneity(const PotentialSpec& spec, std::span<const double> x,
                         double lambda) {
  if (!(lambda > 0)) throw std::domain_error("check_homogeneity: lambda > 0");
  std::vector<double> xs(x.begin(), x.end());
  for (double& v : xs) v *= lambda;
  double scaled = eval_difference_form(spec, xs);
  double expected = eval_difference_form(spec, x) / (lambda * lambda);
  return std::abs(scaled - expected) / std::abs(expected);
}

double check_translation_invariance(const PotentialSpec& spec,
                                    std::span<const double> x, double c) {
  std::vector<std::vector<double>> directions;
  if (spec.family == Family::Plane23) {
    directions = {{1, 0, 1, 0, 1, 0},
                  {0, 1, 0, 1, 0, 1},
                  {1, 0, -1, 0, 0, 0},
                  {0, 1, 0, -1, 0, 0}};
  } else if (spec.family != Family::Evans) {
    directions = {std::vector<double>(x.size(), 1.0)};
  }
  double v0 = eval_difference_form(spec, x);
  double worst = 0.0;
  std::vector<double> xs(x.size());
  for (const auto& w : directions) {
    for (size_t i = 0; i < xs.size(); ++i) xs[i] = x[i] + c * w[i];
    worst = std::max(worst, std::abs(eval_difference_form(spec, xs) - v0));
  }
  return worst;
}

}  // namespace superint
