#include "superint/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace superint {

namespace {

constexpr double kRadiusGuard = 1e-12;  // |r| below this is off-chart
constexpr double kPoleGuard = 1e-9;     // polar angles this close to {0, pi}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

}  // namespace

JacobiMatrix jacobi_matrix(int n) {
  if (n < 2) throw std::domain_error("jacobi_matrix: n must be >= 2");
  JacobiMatrix m;
  m.n = n;
  m.u.assign(static_cast<size_t>(n) * n, 0.0);
  for (int j = 1; j < n; ++j) {
    double norm = 1.0 / std::sqrt(static_cast<double>(j) * (j + 1));
    for (int col = 0; col < j; ++col) m.u[static_cast<size_t>(j - 1) * n + col] = norm;
    m.u[static_cast<size_t>(j - 1) * n + j] = -j * norm;
  }
  double com = 1.0 / std::sqrt(static_cast<double>(n));
  for (int col = 0; col < n; ++col) m.u[static_cast<size_t>(n - 1) * n + col] = com;
  return m;
}

void to_jacobi(const JacobiMatrix& m, std::span<const double> x,
               std::span<const double> p, std::span<double> z,
               std::span<double> pz) {
  if (static_cast<int>(x.size()) != m.n || static_cast<int>(p.size()) != m.n)
    throw std::invalid_argument("to_jacobi: length mismatch");
  for (int row = 0; row < m.n; ++row) {
    double zr = 0.0, pr = 0.0;
    for (int col = 0; col < m.n; ++col) {
      zr += m.at(row, col) * x[col];
      pr += m.at(row, col) * p[col];
    }
    z[row] = zr;
    pz[row] = pr;
  }
}

DiffCoords diff_coords(std::span<const double> x, double guard) {
  const int n = static_cast<int>(x.size());
  if (n < 2) throw std::domain_error("diff_coords: need at least two particles");
  DiffCoords d;
  d.x.resize(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    d.x[i] = x[i] - x[i + 1];
    if (std::abs(d.x[i]) < guard) d.collision = true;
  }
  d.cyclic = x[n - 1] - x[0];
  return d;
}

PhasePoint Chart::lift(std::span<const double> x, std::span<const double> p) const {
  PhasePoint pt;
  pt.chart = name();
  pt.q.resize(dim());
  pt.p.resize(dim());
  forward(x, p, pt.q, pt.p);
  return pt;
}

void Chart::drop(const PhasePoint& pt, std::span<double> x,
                 std::span<double> p) const {
  inverse(pt.q, pt.p, x, p);
}

namespace {

// Generates the double and Dual virtual overloads from one templated body.
template <class Derived>
class ChartImpl : public Chart {
 public:
  using Chart::Chart;

  void forward(std::span<const double> x, std::span<const double> p,
               std::span<double> q, std::span<double> pq) const override {
    self().template fwd<double>(x, p, q, pq);
  }
  void forward(std::span<const Dual> x, std::span<const Dual> p,
               std::span<Dual> q, std::span<Dual> pq) const override {
    self().template fwd<Dual>(x, p, q, pq);
  }
  void inverse(std::span<const double> q, std::span<const double> pq,
               std::span<double> x, std::span<double> p) const override {
    self().template inv<double>(q, pq, x, p);
  }
  void inverse(std::span<const Dual> q, std::span<const Dual> pq,
               std::span<Dual> x, std::span<Dual> p) const override {
    self().template inv<Dual>(q, pq, x, p);
  }
  double kinetic(std::span<const double> q,
                 std::span<const double> p) const override {
    return self().template kin<double>(q, p);
  }
  Dual kinetic(std::span<const Dual> q, std::span<const Dual> p) const override {
    return self().template kin<Dual>(q, p);
  }

 private:
  const Derived& self() const { return *static_cast<const Derived*>(this); }
};

class CartesianChart final : public ChartImpl<CartesianChart> {
 public:
  explicit CartesianChart(int n)
      : ChartImpl("cartesian" + std::to_string(n), n, n) {}

  bool in_cart_domain(std::span<const double> x) const override {
    return all_finite(x);
  }
  bool in_chart_domain(std::span<const double> q) const override {
    return all_finite(q);
  }

  template <class T>
  void fwd(std::span<const T> x, std::span<const T> p, std::span<T> q,
           std::span<T> pq) const {
    std::copy(x.begin(), x.end(), q.begin());
    std::copy(p.begin(), p.end(), pq.begin());
  }
  template <class T>
  void inv(std::span<const T> q, std::span<const T> pq, std::span<T> x,
           std::span<T> p) const {
    std::copy(q.begin(), q.end(), x.begin());
    std::copy(pq.begin(), pq.end(), p.begin());
  }
  template <class T>
  T kin(std::span<const T> /*q*/, std::span<const T> p) const {
    T t(0.0);
    for (const T& pi : p) t += T(0.5) * pi * pi;
    return t;
  }
};

class JacobiChart final : public ChartImpl<JacobiChart> {
 public:
  explicit JacobiChart(int n)
      : ChartImpl("jacobi" + std::to_string(n), n, n), m_(jacobi_matrix(n)) {}

  bool in_cart_domain(std::span<const double> x) const override {
    return all_finite(x);
  }
  bool in_chart_domain(std::span<const double> q) const override {
    return all_finite(q);
  }

  template <class T>
  void fwd(std::span<const T> x, std::span<const T> p, std::span<T> q,
           std::span<T> pq) const {
    apply(m_, false, x, q);
    apply(m_, false, p, pq);
  }
  template <class T>
  void inv(std::span<const T> q, std::span<const T> pq, std::span<T> x,
           std::span<T> p) const {
    apply(m_, true, q, x);
    apply(m_, true, pq, p);
  }
  template <class T>
  T kin(std::span<const T> /*q*/, std::span<const T> p) const {
    T t(0.0);
    for (const T& pi : p) t += T(0.5) * pi * pi;
    return t;
  }

  template <class T>
  static void apply(const JacobiMatrix& m, bool transpose, std::span<const T> in,
                    std::span<T> out) {
    for (int row = 0; row < m.n; ++row) {
      T acc(0.0);
      for (int col = 0; col < m.n; ++col)
        acc += T(transpose ? m.at(col, row) : m.at(row, col)) * in[col];
      out[row] = acc;
    }
  }

 private:
  JacobiMatrix m_;
};

// (z1, z2, z3) -> (r, psi, u) with the cylinder axis along z3. With
// from_particles the input is three particle positions and the Jacobi
// rotation is applied first, so the axis is the translation direction.
class Cylindrical3Chart final : public ChartImpl<Cylindrical3Chart> {
 public:
  explicit Cylindrical3Chart(bool from_particles)
      : ChartImpl(from_particles ? "cylindrical3_particles" : "cylindrical3", 3, 3),
        from_particles_(from_particles),
        m_(jacobi_matrix(3)) {}

  bool in_cart_domain(std::span<const double> x) const override {
    if (!all_finite(x)) return false;
    double z[3], dummy[3] = {0, 0, 0}, pz[3];
    std::span<const double> xs(x);
    if (from_particles_) {
      to_jacobi(m_, x, dummy, z, pz);
    } else {
      std::copy(x.begin(), x.end(), z);
    }
    return std::hypot(z[0], z[1]) > kRadiusGuard;
  }
  bool in_chart_domain(std::span<const double> q) const override {
    return all_finite(q) && q[0] > kRadiusGuard;
  }

  template <class T>
  void fwd(std::span<const T> x, std::span<const T> p, std::span<T> q,
           std::span<T> pq) const {
    T z[3], pz[3];
    pre(x, p, z, pz);
    T r = sqrt(z[0] * z[0] + z[1] * z[1]);
    if (value_of(r) <= kRadiusGuard)
      throw ChartDomainError("cylindrical3: point on the axis (r = 0)");
    q[0] = r;
    q[1] = atan2(z[1], z[0]);
    q[2] = z[2];
    pq[0] = (z[0] * pz[0] + z[1] * pz[1]) / r;
    pq[1] = z[0] * pz[1] - z[1] * pz[0];
    pq[2] = pz[2];
  }
  template <class T>
  void inv(std::span<const T> q, std::span<const T> pq, std::span<T> x,
           std::span<T> p) const {
    if (value_of(q[0]) <= kRadiusGuard)
      throw ChartDomainError("cylindrical3: r = 0 is singular");
    T c = cos(q[1]), s = sin(q[1]);
    T z[3] = {q[0] * c, q[0] * s, q[2]};
    T pz[3] = {c * pq[0] - s * pq[1] / q[0], s * pq[0] + c * pq[1] / q[0], pq[2]};
    post(z, pz, x, p);
  }
  template <class T>
  T kin(std::span<const T> q, std::span<const T> p) const {
    return T(0.5) * (p[0] * p[0] + p[1] * p[1] / (q[0] * q[0]) + p[2] * p[2]);
  }

 private:
  template <class T>
  void pre(std::span<const T> x, std::span<const T> p, T* z, T* pz) const {
    if (!from_particles_) {
      for (int i = 0; i < 3; ++i) { z[i] = x[i]; pz[i] = p[i]; }
      return;
    }
    for (int row = 0; row < 3; ++row) {
      T a(0.0), b(0.0);
      for (int col = 0; col < 3; ++col) {
        a += T(m_.at(row, col)) * x[col];
        b += T(m_.at(row, col)) * p[col];
      }
      z[row] = a;
      pz[row] = b;
    }
  }
  template <class T>
  void post(const T* z, const T* pz, std::span<T> x, std::span<T> p) const {
    if (!from_particles_) {
      for (int i = 0; i < 3; ++i) { x[i] = z[i]; p[i] = pz[i]; }
      return;
    }
    for (int row = 0; row < 3; ++row) {
      T a(0.0), b(0.0);
      for (int col = 0; col < 3; ++col) {
        a += T(m_.at(col, row)) * z[col];
        b += T(m_.at(col, row)) * pz[col];
      }
      x[row] = a;
      p[row] = b;
    }
  }

  bool from_particles_;
  JacobiMatrix m_;
};

// Standard hyperspherical angles on the first n-1 coordinates, last
// coordinate kept Cartesian: q = (R, theta_1 .. theta_{n-2}, u). The first
// n-3 angles live in (0, pi), the final one in (-pi, pi].
class HypersphericalChart final : public ChartImpl<HypersphericalChart> {
 public:
  HypersphericalChart(int n, bool from_particles)
      : ChartImpl((from_particles ? "hyperspherical_particles" : "hyperspherical") +
                      std::to_string(n),
                  n, n),
        n_(n),
        m_(n - 1),
        from_particles_(from_particles),
        jac_(jacobi_matrix(n)) {
    if (n < 3) throw std::domain_error("hyperspherical chart needs n >= 3");
  }

  bool in_cart_domain(std::span<const double> x) const override {
    if (!all_finite(x)) return false;
    std::vector<double> q(n_), pq(n_), p(n_, 0.0);
    try {
      fwd<double>(x, p, q, pq);
    } catch (const ChartDomainError&) {
      return false;
    }
    return in_chart_domain(q);
  }
  bool in_chart_domain(std::span<const double> q) const override {
    if (!all_finite(q) || q[0] <= kRadiusGuard) return false;
    for (int a = 0; a + 1 < m_ - 1; ++a) {
      double th = q[1 + a];
      if (th < kPoleGuard || th > M_PI - kPoleGuard) return false;
    }
    return true;
  }

  template <class T>
  void fwd(std::span<const T> xin, std::span<const T> pin, std::span<T> q,
           std::span<T> pq) const {
    std::vector<T> z(n_), pz(n_);
    pre(xin, pin, z, pz);
    // radius over the spherical block
    T r2(0.0);
    for (int j = 0; j < m_; ++j) r2 += z[j] * z[j];
    T r = sqrt(r2);
    if (value_of(r) <= kRadiusGuard)
      throw ChartDomainError("hyperspherical: zero radius");
    q[0] = r;
    // tail norms: tail_k = |(z_k .. z_{m-1})|
    std::vector<T> tail(m_ + 1, T(0.0));
    for (int k = m_ - 1; k >= 0; --k) tail[k] = tail[k + 1] + z[k] * z[k];
    for (int a = 0; a < m_ - 2; ++a) {
      q[1 + a] = atan2(sqrt(tail[a + 1]), z[a]);
      if (value_of(sqrt(tail[a + 1])) <= kPoleGuard * value_of(r))
        throw ChartDomainError("hyperspherical: polar angle at a pole");
    }
    q[m_ - 1] = atan2(z[m_ - 1], z[m_ - 2]);
    q[n_ - 1] = z[n_ - 1];
    // canonical lift p_a = sum_j (dz_j / dq_a) p_j
    pq[0] = T(0.0);
    for (int j = 0; j < m_; ++j) pq[0] += z[j] * pz[j];
    pq[0] = pq[0] / r;
    std::vector<T> dz(m_);
    for (int a = 0; a < m_ - 1; ++a) {
      angle_partial(std::span<const T>(q), a, dz);
      T acc(0.0);
      for (int j = 0; j < m_; ++j) acc += dz[j] * pz[j];
      pq[1 + a] = acc;
    }
    pq[n_ - 1] = pz[n_ - 1];
  }

  template <class T>
  void inv(std::span<const T> q, std::span<const T> pq, std::span<T> xout,
           std::span<T> pout) const {
    if (value_of(q[0]) <= kRadiusGuard)
      throw ChartDomainError("hyperspherical: zero radius");
    std::vector<T> z(n_), pz(n_, T(0.0)), dz(m_);
    to_block(q, z);
    z[n_ - 1] = q[n_ - 1];
    // p_z = p_R * z/R + sum_a p_a / h_a^2 * dz/dtheta_a   (orthogonal chart)
    for (int j = 0; j < m_; ++j) pz[j] = pq[0] * z[j] / q[0];
    T h2 = q[0] * q[0];
    for (int a = 0; a < m_ - 1; ++a) {
      angle_partial(q, a, dz);
      for (int j = 0; j < m_; ++j) pz[j] += pq[1 + a] * dz[j] / h2;
      T s = sin(q[1 + a]);
      h2 = h2 * s * s;
    }
    pz[n_ - 1] = pq[n_ - 1];
    post(z, pz, xout, pout);
  }

  template <class T>
  T kin(std::span<const T> q, std::span<const T> p) const {
    T t = T(0.5) * (p[0] * p[0] + p[n_ - 1] * p[n_ - 1]);
    T h2 = q[0] * q[0];
    for (int a = 0; a < m_ - 1; ++a) {
      t += T(0.5) * p[1 + a] * p[1 + a] / h2;
      T s = sin(q[1 + a]);
      h2 = h2 * s * s;
    }
    return t;
  }

 private:
  // z_j as products of R and sines/cosines of the angles.
  template <class T>
  void to_block(std::span<const T> q, std::vector<T>& z) const {
    T prefix = q[0];
    for (int j = 0; j < m_ - 1; ++j) {
      z[j] = prefix * cos(q[1 + j]);
      prefix = prefix * sin(q[1 + j]);
    }
    z[m_ - 1] = prefix;
  }
  // dz/dtheta_a: the factor sin(theta_a) (or cos for j == a) differentiates,
  // everything else is carried through as-is.
  template <class T>
  void angle_partial(std::span<const T> q, int a, std::vector<T>& dz) const {
    for (int j = 0; j < m_; ++j) {
      if (j < a) {
        dz[j] = T(0.0);
        continue;
      }
      T prod = q[0];
      for (int b = 0; b < j; ++b)
        prod = prod * (b == a ? cos(q[1 + b]) : sin(q[1 + b]));
      if (j < m_ - 1)
        prod = prod * (j == a ? -sin(q[1 + j]) : cos(q[1 + j]));
      dz[j] = prod;
    }
  }

  template <class T>
  void pre(std::span<const T> x, std::span<const T> p, std::vector<T>& z,
           std::vector<T>& pz) const {
    if (!from_particles_) {
      for (int i = 0; i < n_; ++i) { z[i] = x[i]; pz[i] = p[i]; }
      return;
    }
    for (int row = 0; row < n_; ++row) {
      T a(0.0), b(0.0);
      for (int col = 0; col < n_; ++col) {
        a += T(jac_.at(row, col)) * x[col];
        b += T(jac_.at(row, col)) * p[col];
      }
      z[row] = a;
      pz[row] = b;
    }
  }
  template <class T>
  void post(const std::vector<T>& z, const std::vector<T>& pz, std::span<T> x,
            std::span<T> p) const {
    if (!from_particles_) {
      for (int i = 0; i < n_; ++i) { x[i] = z[i]; p[i] = pz[i]; }
      return;
    }
    for (int row = 0; row < n_; ++row) {
      T a(0.0), b(0.0);
      for (int col = 0; col < n_; ++col) {
        a += T(jac_.at(col, row)) * z[col];
        b += T(jac_.at(col, row)) * pz[col];
      }
      x[row] = a;
      p[row] = b;
    }
  }

  int n_;
  int m_;  // spherical block size, n - 1
  bool from_particles_;
  JacobiMatrix jac_;
};

// Three particles in the plane, R^6 -> (r, psi, u1..u4). The u axes span the
// two translation directions and the two imposed invariance directions; the
// orthogonal complement carries the polar pair, proportional to
// (x1 + x3 - 2 x5, x2 + x4 - 2 x6).
class PlaneReductionChart final : public ChartImpl<PlaneReductionChart> {
 public:
  PlaneReductionChart() : ChartImpl("plane23", 6, 6) {
    const double s3 = 1.0 / std::sqrt(3.0), s2 = 1.0 / std::sqrt(2.0),
                 s6 = 1.0 / std::sqrt(6.0);
    // rows: complement pair first, then the four axis directions
    double rows[6][6] = {
        {s6, 0, s6, 0, -2 * s6, 0},   // ~ X1
        {0, s6, 0, s6, 0, -2 * s6},   // ~ X2
        {s3, 0, s3, 0, s3, 0},        // omega_1
        {0, s3, 0, s3, 0, s3},        // omega_2
        {s2, 0, -s2, 0, 0, 0},        // omega_3
        {0, s2, 0, -s2, 0, 0},        // omega_4
    };
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) w_[r][c] = rows[r][c];
  }

  bool in_cart_domain(std::span<const double> x) const override {
    if (!all_finite(x)) return false;
    double a = 0, b = 0;
    for (int c = 0; c < 6; ++c) {
      a += w_[0][c] * x[c];
      b += w_[1][c] * x[c];
    }
    return std::hypot(a, b) > kRadiusGuard;
  }
  bool in_chart_domain(std::span<const double> q) const override {
    return all_finite(q) && q[0] > kRadiusGuard;
  }

  template <class T>
  void fwd(std::span<const T> x, std::span<const T> p, std::span<T> q,
           std::span<T> pq) const {
    T y[6], py[6];
    rotate<T>(x, p, y, py, false);
    T r = sqrt(y[0] * y[0] + y[1] * y[1]);
    if (value_of(r) <= kRadiusGuard)
      throw ChartDomainError("plane23: point on the invariance axis (r = 0)");
    q[0] = r;
    q[1] = atan2(y[1], y[0]);
    pq[0] = (y[0] * py[0] + y[1] * py[1]) / r;
    pq[1] = y[0] * py[1] - y[1] * py[0];
    for (int i = 0; i < 4; ++i) {
      q[2 + i] = y[2 + i];
      pq[2 + i] = py[2 + i];
    }
  }
  template <class T>
  void inv(std::span<const T> q, std::span<const T> pq, std::span<T> x,
           std::span<T> p) const {
    if (value_of(q[0]) <= kRadiusGuard)
      throw ChartDomainError("plane23: r = 0 is singular");
    T c = cos(q[1]), s = sin(q[1]);
    T y[6], py[6];
    y[0] = q[0] * c;
    y[1] = q[0] * s;
    py[0] = c * pq[0] - s * pq[1] / q[0];
    py[1] = s * pq[0] + c * pq[1] / q[0];
    for (int i = 0; i < 4; ++i) {
      y[2 + i] = q[2 + i];
      py[2 + i] = pq[2 + i];
    }
    rotate_back<T>(y, py, x, p);
  }
  template <class T>
  T kin(std::span<const T> q, std::span<const T> p) const {
    T t = T(0.5) * (p[0] * p[0] + p[1] * p[1] / (q[0] * q[0]));
    for (int i = 0; i < 4; ++i) t += T(0.5) * p[2 + i] * p[2 + i];
    return t;
  }

 private:
  template <class T>
  void rotate(std::span<const T> x, std::span<const T> p, T* y, T* py,
              bool) const {
    for (int r = 0; r < 6; ++r) {
      T a(0.0), b(0.0);
      for (int c = 0; c < 6; ++c) {
        a += T(w_[r][c]) * x[c];
        b += T(w_[r][c]) * p[c];
      }
      y[r] = a;
      py[r] = b;
    }
  }
  template <class T>
  void rotate_back(const T* y, const T* py, std::span<T> x, std::span<T> p) const {
    for (int r = 0; r < 6; ++r) {
      T a(0.0), b(0.0);
      for (int c = 0; c < 6; ++c) {
        a += T(w_[c][r]) * y[c];
        b += T(w_[c][r]) * py[c];
      }
      x[r] = a;
      p[r] = b;
    }
  }

  double w_[6][6];
};

// E^4 as sphere x cartesian: (x, y, z, u) -> (rho, psi1, psi2, u) with
// x = rho sin(psi2) cos(psi1), y = rho sin(psi2) sin(psi1), z = rho cos(psi2).
class Spherical4Chart final : public ChartImpl<Spherical4Chart> {
 public:
  Spherical4Chart() : ChartImpl("spherical4", 4, 4) {}

  bool in_cart_domain(std::span<const double> x) const override {
    if (!all_finite(x)) return false;
    double rho = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    double rxy = std::hypot(x[0], x[1]);
    return rho > kRadiusGuard && rxy > kPoleGuard * rho;
  }
  bool in_chart_domain(std::span<const double> q) const override {
    return all_finite(q) && q[0] > kRadiusGuard && q[2] > kPoleGuard &&
           q[2] < M_PI - kPoleGuard;
  }

  template <class T>
  void fwd(std::span<const T> x, std::span<const T> p, std::span<T> q,
           std::span<T> pq) const {
    T rho = sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    T rxy = sqrt(x[0] * x[0] + x[1] * x[1]);
    if (value_of(rho) <= kRadiusGuard)
      throw ChartDomainError("spherical4: rho = 0");
    if (value_of(rxy) <= kPoleGuard * value_of(rho))
      throw ChartDomainError("spherical4: polar axis (sin psi2 = 0)");
    q[0] = rho;
    q[1] = atan2(x[1], x[0]);
    q[2] = atan2(rxy, x[2]);
    q[3] = x[3];
    pq[0] = (x[0] * p[0] + x[1] * p[1] + x[2] * p[2]) / rho;
    pq[1] = x[0] * p[1] - x[1] * p[0];
    // d(x,y,z)/dpsi2 . p with the chain written through rxy and z
    pq[2] = (x[2] * (x[0] * p[0] + x[1] * p[1]) / rxy - rxy * p[2]);
    pq[3] = p[3];
  }
  template <class T>
  void inv(std::span<const T> q, std::span<const T> pq, std::span<T> x,
           std::span<T> p) const {
    T c1 = cos(q[1]), s1 = sin(q[1]), c2 = cos(q[2]), s2 = sin(q[2]);
    if (value_of(q[0]) <= kRadiusGuard || std::abs(value_of(s2)) <= kPoleGuard)
      throw ChartDomainError("spherical4: singular chart point");
    T rho = q[0];
    x[0] = rho * s2 * c1;
    x[1] = rho * s2 * s1;
    x[2] = rho * c2;
    x[3] = q[3];
    T pr = pq[0], pps1 = pq[1], pps2 = pq[2];
    p[0] = s2 * c1 * pr + c2 * c1 * pps2 / rho - s1 * pps1 / (rho * s2);
    p[1] = s2 * s1 * pr + c2 * s1 * pps2 / rho + c1 * pps1 / (rho * s2);
    p[2] = c2 * pr - s2 * pps2 / rho;
    p[3] = pq[3];
  }
  template <class T>
  T kin(std::span<const T> q, std::span<const T> p) const {
    T s2 = sin(q[2]);
    T rho2 = q[0] * q[0];
    return T(0.5) * (p[0] * p[0] + p[2] * p[2] / rho2 +
                     p[1] * p[1] / (rho2 * s2 * s2) + p[3] * p[3]);
  }
};

// Reduced (r, psi) phase plane used by the higher-order integral.
class PolarChart final : public ChartImpl<PolarChart> {
 public:
  PolarChart() : ChartImpl("polar", 2, 2) {}

  bool in_cart_domain(std::span<const double> x) const override {
    return all_finite(x) && std::hypot(x[0], x[1]) > kRadiusGuard;
  }
  bool in_chart_domain(std::span<const double> q) const override {
    return all_finite(q) && q[0] > kRadiusGuard;
  }

  template <class T>
  void fwd(std::span<const T> x, std::span<const T> p, std::span<T> q,
           std::span<T> pq) const {
    T r = sqrt(x[0] * x[0] + x[1] * x[1]);
    if (value_of(r) <= kRadiusGuard) throw ChartDomainError("polar: r = 0");
    q[0] = r;
    q[1] = atan2(x[1], x[0]);
    pq[0] = (x[0] * p[0] + x[1] * p[1]) / r;
    pq[1] = x[0] * p[1] - x[1] * p[0];
  }
  template <class T>
  void inv(std::span<const T> q, std::span<const T> pq, std::span<T> x,
           std::span<T> p) const {
    if (value_of(q[0]) <= kRadiusGuard) throw ChartDomainError("polar: r = 0");
    T c = cos(q[1]), s = sin(q[1]);
    x[0] = q[0] * c;
    x[1] = q[0] * s;
    p[0] = c * pq[0] - s * pq[1] / q[0];
    p[1] = s * pq[0] + c * pq[1] / q[0];
  }
  template <class T>
  T kin(std::span<const T> q, std::span<const T> p) const {
    return T(0.5) * (p[0] * p[0] + p[1] * p[1] / (q[0] * q[0]));
  }
};

}  // namespace

ChartPtr make_cartesian_chart(int n) {
  return std::make_shared<CartesianChart>(n);
}
ChartPtr make_jacobi_chart(int n) { return std::make_shared<JacobiChart>(n); }
ChartPtr make_cylindrical3_chart(bool from_particles) {
  return std::make_shared<Cylindrical3Chart>(from_particles);
}
ChartPtr make_hyperspherical_chart(int n, bool from_particles) {
  return std::make_shared<HypersphericalChart>(n, from_particles);
}
ChartPtr make_plane_reduction_chart() {
  return std::make_shared<PlaneReductionChart>();
}
ChartPtr make_spherical4_chart() { return std::make_shared<Spherical4Chart>(); }
ChartPtr make_polar_chart() { return std::make_shared<PolarChart>(); }

ChartPtr chart_by_name(const std::string& tag) {
  auto suffix_int = [&tag](size_t prefix_len) {
    return std::stoi(tag.substr(prefix_len));
  };
  if (tag == "polar") return make_polar_chart();
  if (tag == "plane23") return make_plane_reduction_chart();
  if (tag == "spherical4") return make_spherical4_chart();
  if (tag == "cylindrical3") return make_cylindrical3_chart(false);
  if (tag == "cylindrical3_particles") return make_cylindrical3_chart(true);
  if (tag.rfind("cartesian", 0) == 0) return make_cartesian_chart(suffix_int(9));
  if (tag.rfind("jacobi", 0) == 0) return make_jacobi_chart(suffix_int(6));
  if (tag.rfind("hyperspherical_particles", 0) == 0)
    return make_hyperspherical_chart(suffix_int(24), true);
  if (tag.rfind("hyperspherical", 0) == 0)
    return make_hyperspherical_chart(suffix_int(14), false);
  throw std::invalid_argument("unknown chart tag: " + tag);
}

PhasePoint cylindrical3(std::span<const double> z, std::span<const double> pz) {
  static const ChartPtr chart = make_cylindrical3_chart(false);
  return chart->lift(z, pz);
}

PhasePoint hyperspherical_cylindrical(std::span<const double> z,
                                      std::span<const double> pz, int n) {
  return make_hyperspherical_chart(n, false)->lift(z, pz);
}

PhasePoint plane_reduction(std::span<const double> x, std::span<const double> p) {
  static const ChartPtr chart = make_plane_reduction_chart();
  return chart->lift(x, p);
}

}  // namespace superint
