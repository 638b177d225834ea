#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "superint/dual.hpp"
#include "superint/errors.hpp"
#include "superint/geometry.hpp"

namespace superint {

// Collision guard applied to every potential denominator.
inline constexpr double kCollisionGuard = 1e-10;

// A one-argument profile with exact derivative, evaluated through duals.
// Used both for angular profiles F(psi) and for the ratio functions
// F1, F2 of the planar family.
struct AngularProfile {
  std::string name;
  std::function<Dual(Dual)> f;
  // > 0 where the profile is regular; used by samplers to stay clear of poles
  std::function<double(double)> domain_margin;
  bool finite_difference = false;  // derivative is a numerical fallback

  Dual operator()(Dual x) const { return f(x); }
  double value(double x) const { return f(Dual(x)).v; }
  double derivative(double x) const { return f(Dual(x, 1.0)).d; }
};

using ProfilePtr = std::shared_ptr<const AngularProfile>;

// Registered closed forms (exact derivatives via duals).
ProfilePtr make_const_profile(double c);
ProfilePtr make_cosine_profile(double a, double b, int m);       // a + b cos(m x)
ProfilePtr make_inv_sin2_profile(double k, int m);               // k / sin^2(m x)
ProfilePtr make_inv_cos2_profile(double k, int m);               // k / cos^2(m x)
ProfilePtr make_inv_trig_pair_profile(double k2, double k3);     // k2/cos^2 x + k3/sin^2 x
ProfilePtr make_inv_one_plus_sq_profile(double c);               // c / (1 + t^2)
// Demotes an exact profile to central finite differences (step 1e-6);
// downstream bracket tolerances drop to 1e-5 when this is active.
ProfilePtr finite_difference_profile(ProfilePtr base);

// (shift F)(x) = F(x + alpha)
ProfilePtr shift_profile(ProfilePtr base, double alpha);

enum class Family { Calogero, Wolfes, Angular3, Ttw, Evans, Plane23 };
enum class EvansVariant { V1, V2, V3, V4 };

struct PotentialSpec {
  Family family = Family::Ttw;
  // calogero k1..k3 / wolfes h1..h3 reuse c1..c3; evans uses k, c1..c3
  double k = 1.0;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
  int ttw_n = 1;
  EvansVariant variant = EvansVariant::V1;
  ProfilePtr profile;   // angular F where the family takes one
  ProfilePtr profile2;  // second ratio function for plane23
};

PotentialSpec calogero(double k1, double k2, double k3);
PotentialSpec wolfes(double h1, double h2, double h3);
PotentialSpec angular3(ProfilePtr f);
PotentialSpec ttw(int n, double k);
PotentialSpec evans(EvansVariant variant, double k, ProfilePtr f,
                    double k1 = 0.0, double k2 = 0.0, double k3 = 0.0);
PotentialSpec plane23(ProfilePtr f1, ProfilePtr f2);
PotentialSpec plane23_angular(ProfilePtr f);

// Ambient Cartesian dimension of the family (3, 4 or 6).
int cart_dim(const PotentialSpec& spec);
// Chart the family's angular form and integral sets live in.
ChartPtr natural_chart(const PotentialSpec& spec);

// V in particle coordinates. Exact-dual evaluable; throws SingularityError
// when a denominator falls below the collision guard.
double eval_difference_form(const PotentialSpec& spec, std::span<const double> x);
Dual eval_difference_form(const PotentialSpec& spec, std::span<const Dual> x);

// V in the family's chart coordinates (F(psi)/r^2 and relatives).
double eval_angular_form(const PotentialSpec& spec, const PhasePoint& pt);
Dual eval_angular_form(const PotentialSpec& spec, std::span<const Dual> q);

// Single-angle profile of the family, where one exists. Equal-coupling
// Calogero/Wolfes get their closed forms; unequal couplings fall back to a
// chart-composed difference-form profile.
ProfilePtr angular_profile(const PotentialSpec& spec);

// Closed-form constants relating difference and angular forms in the Jacobi
// frame (confirmed against the difference-form oracle in the test suite).
inline constexpr double kCalogeroAngularConstant = 4.5;  // V_C = (9/2) g / (r cos 3psi)^2
inline constexpr double kWolfesAngularConstant = 1.5;    // V_W = (3/2) h / (r sin 3psi)^2

// |V(lambda x) - lambda^-2 V(x)| / |lambda^-2 V(x)|
double check_homogeneity(const PotentialSpec& spec, std::span<const double> x,
                         double lambda);
// max over the family's invariance directions of |V(x + c w) - V(x)|
double check_translation_invariance(const PotentialSpec& spec,
                                    std::span<const double> x, double c);

}  // namespace superint
