#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "superint/dual.hpp"
#include "superint/geometry.hpp"
#include "superint/potentials.hpp"

namespace superint {

// A phase-space function with exact first derivatives. Evaluation runs on
// duals; seeding one coordinate at a time yields the exact gradient.
struct Observable {
  std::string name;
  std::string chart;  // chart tag of the coordinates it expects
  int momentum_degree = -1;
  std::function<Dual(std::span<const Dual> q, std::span<const Dual> p)> eval;

  double value(const PhasePoint& pt) const;
  // dq, dp must have length pt.q.size()
  void gradient(const PhasePoint& pt, std::span<double> dq,
                std::span<double> dp) const;
};

// Exact rational arithmetic for the higher-integral coefficient table.
struct Rational {
  long long num = 0;
  long long den = 1;

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

Rational make_rational(long long num, long long den);
Rational rat_mul(Rational a, Rational b);

struct CoefficientEntry {
  int sigma = 0;
  int i = 0;
  int l = 0;  // 2*sigma + 1 - i
  Rational a;
};

struct CoefficientTable {
  int n = 0;
  std::vector<CoefficientEntry> entries;  // (n+1)(n+2) of them

  const CoefficientEntry& at(int sigma, int i) const;
};

CoefficientTable coefficient_table(int n);

struct IntegralSet {
  std::string system;
  Observable hamiltonian;
  std::vector<Observable> members;
  // Screened candidates without a closed-form warranty: certified only if
  // their bracket residual passes.
  std::vector<Observable> candidates;
  int claimed_independent = 0;
  // Whether the Hamiltonian itself counts toward the claimed number.
  bool rank_includes_hamiltonian = true;
};

// H = chart kinetic form + V. Cartesian charts pair with the difference
// form, curvilinear charts with the angular form.
Observable hamiltonian(const PotentialSpec& spec, const ChartPtr& chart);

// {H, H1, H2, H3} on the cylindrical chart; needs a single-angle profile.
IntegralSet integral_set_3body(const PotentialSpec& spec);

// Higher-order integral of the k / (r sin((2n+1) psi))^2 family on the
// reduced (r, psi) plane (momentum degree 2n+1). entry_scale, when given,
// multiplies table entries one-to-one (used by the sign scan).
Observable fifth_integral(int n, double k);
Observable fifth_integral_scaled(int n, double k,
                                 const std::vector<double>& entry_scale);
// Lift onto the 3-body cylindrical chart (the formula has no u dependence).
Observable fifth_integral_lifted(int n, double k);
// Reduced Hamiltonian the integral is checked against.
Observable reduced_hamiltonian(int n, double k);

IntegralSet integral_set_evans4(const PotentialSpec& spec);
IntegralSet integral_set_plane23(const PotentialSpec& spec);

double poisson_bracket(const Observable& f, const Observable& g,
                       const PhasePoint& pt);

struct BracketReport {
  std::vector<std::string> names;
  std::vector<double> max_residual;        // max |{H, member}| over the sample
  std::vector<bool> is_candidate;
  std::vector<std::vector<double>> pairwise;  // informational member brackets
};

BracketReport bracket_residual(const IntegralSet& set,
                               const std::vector<PhasePoint>& points);

// Count of singular values above rel_tol * sigma_max of the stacked gradient
// matrix; maximum over the points.
int independence_rank(const std::vector<Observable>& obs,
                      const std::vector<PhasePoint>& points,
                      double rel_tol = 1e-8);
std::vector<std::vector<double>> singular_value_spectra(
    const std::vector<Observable>& obs, const std::vector<PhasePoint>& points);

// Polynomial degree in the momenta, detected by divided differences along a
// momentum ray through pt.
int detect_momentum_degree(const Observable& obs, const PhasePoint& pt,
                           int max_degree = 8);

}  // namespace superint
