#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "superint/dual.hpp"
#include "superint/errors.hpp"

namespace superint {

// Orthogonal center-of-mass transform for n unit masses on a line.
// Row j (0-based, j < n-1) holds the coefficients of the j-th relative
// coordinate; the last row is the center-of-mass direction.
struct JacobiMatrix {
  int n = 0;
  std::vector<double> u;  // row-major n x n

  double at(int row, int col) const { return u[static_cast<size_t>(row) * n + col]; }
};

JacobiMatrix jacobi_matrix(int n);

// z = U x, pz = U p. Orthogonality makes the momentum map identical to the
// position map and preserves norms.
void to_jacobi(const JacobiMatrix& m, std::span<const double> x,
               std::span<const double> p, std::span<double> z,
               std::span<double> pz);

// Consecutive particle differences X_i = x^i - x^{i+1}. For n = 3 the cyclic
// closure X_3 = x^3 - x^1 is also exposed.
struct DiffCoords {
  std::vector<double> x;       // length n-1
  double cyclic = 0.0;         // x^n - x^1, meaningful for n = 3
  bool collision = false;      // some |X_i| below guard
};

DiffCoords diff_coords(std::span<const double> x, double guard = 1e-10);

struct PhasePoint {
  std::string chart;
  std::vector<double> q;
  std::vector<double> p;
};

// An invertible coordinate map with its canonical momentum lift. forward()
// is evaluable on duals so downstream code can differentiate through it;
// kinetic() is the chart's closed-form kinetic energy.
class Chart {
 public:
  virtual ~Chart() = default;

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }            // chart configuration dimension
  int cart_dim() const { return cart_dim_; }  // ambient Cartesian dimension

  virtual bool in_cart_domain(std::span<const double> x) const = 0;
  virtual bool in_chart_domain(std::span<const double> q) const = 0;

  virtual void forward(std::span<const double> x, std::span<const double> p,
                       std::span<double> q, std::span<double> pq) const = 0;
  virtual void forward(std::span<const Dual> x, std::span<const Dual> p,
                       std::span<Dual> q, std::span<Dual> pq) const = 0;
  virtual void inverse(std::span<const double> q, std::span<const double> pq,
                       std::span<double> x, std::span<double> p) const = 0;
  virtual void inverse(std::span<const Dual> q, std::span<const Dual> pq,
                       std::span<Dual> x, std::span<Dual> p) const = 0;

  virtual double kinetic(std::span<const double> q,
                         std::span<const double> p) const = 0;
  virtual Dual kinetic(std::span<const Dual> q,
                       std::span<const Dual> p) const = 0;

  PhasePoint lift(std::span<const double> x, std::span<const double> p) const;
  void drop(const PhasePoint& pt, std::span<double> x, std::span<double> p) const;

 protected:
  Chart(std::string name, int dim, int cart_dim)
      : name_(std::move(name)), dim_(dim), cart_dim_(cart_dim) {}

 private:
  std::string name_;
  int dim_;
  int cart_dim_;
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr make_cartesian_chart(int n);
ChartPtr make_jacobi_chart(int n);
// from_particles composes the Jacobi rotation in front of the curvilinear
// part, so the chart maps particle coordinates directly.
ChartPtr make_cylindrical3_chart(bool from_particles);
ChartPtr make_hyperspherical_chart(int n, bool from_particles);
ChartPtr make_plane_reduction_chart();
ChartPtr make_spherical4_chart();
ChartPtr make_polar_chart();  // reduced (r, psi) plane
// Resolve a chart tag as produced by Chart::name().
ChartPtr chart_by_name(const std::string& tag);

// Convenience wrappers matching the operation-level interface.
PhasePoint cylindrical3(std::span<const double> z, std::span<const double> pz);
PhasePoint hyperspherical_cylindrical(std::span<const double> z,
                                      std::span<const double> pz, int n);
PhasePoint plane_reduction(std::span<const double> x, std::span<const double> p);

}  // namespace superint
