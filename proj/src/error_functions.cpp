#include "ngtheta/error_functions.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/owens_t.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ngtheta {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

int sgn_of(double v) { return (v > 0) - (v < 0); }

// Normal cdf-like weight: int_{-inf}^{a} e^{-pi s^2} ds.
double upper_mass(double a) { return 0.5 * std::erfc(-kSqrtPi * a); }

// sum_{k>=1} (-1)^(k+1) c_k u^k with c_k = w(k) (2k-1)!!, truncated at the smallest term.
template <class W>
double asymptotic_tail(double u, W weight) {
  double sum = 0;
  double dfact = 1;  // (2k-1)!!
  double upow = 1;
  double prev = INFINITY;
  for (int k = 1; k < 60; ++k) {
    dfact *= (2 * k - 1);
    upow *= u;
    const double term = weight(k) * dfact * upow;
    if (term >= prev) break;
    sum += (k % 2 ? term : -term);
    prev = term;
    if (term < 1e-18 * std::fabs(sum)) break;
  }
  return sum;
}

template <class F>
double integrate(F&& f, double a, double b, double tol, const char* what, double abs_floor = 1e-300) {
  if (!(b > a)) return 0;
  double err = 0;
  double l1 = 0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 12, tol, &err, &l1);
  if (!std::isfinite(v) || err > 1e3 * tol * l1 + abs_floor) throw QuadratureError(std::string(what) + ": quadrature did not converge");
  return v;
}

std::vector<double> sorted_angles(std::vector<double> angles) {
  for (auto& t : angles) {
    t = std::fmod(t, kTwoPi);
    if (t < 0) t += kTwoPi;
  }
  std::sort(angles.begin(), angles.end());
  std::vector<double> out;
  for (double t : angles)
    if (out.empty() || t - out.back() > 1e-15) out.push_back(t);
  if (out.size() > 1 && out.front() + kTwoPi - out.back() <= 1e-15) out.pop_back();
  return out;
}

}  // namespace

namespace detail {

double radial1(double a) {
  if (a > -5) return std::exp(-kPi * a * a) / kTwoPi + a * upper_mass(a);
  const double u = 1 / (kTwoPi * a * a);
  return std::exp(-kPi * a * a) / kTwoPi * asymptotic_tail(u, [](int) { return 1.0; });
}

}  // namespace detail

double erf_minus_sign(double t, int s) {
  const double y = kSqrtPi * t;
  if (s > 0) return -std::erfc(y);
  if (s < 0) return std::erfc(-y);
  return std::erf(y);
}

SignCone::SignCone(const QuadraticSpace& space, std::vector<RatVector> cs, FloatTolerance tol)
    : plane_(space, std::move(cs)), tol_(tol) {
  tol_.check();
  const std::size_t q = plane_.rank();
  if (q < 1 || q > 3) throw ValidationError("generalized error functions need 1 to 3 vectors");
  const auto m = static_cast<Eigen::Index>(space.dim());
  pair_rows_.resize(static_cast<Eigen::Index>(q), m);
  for (std::size_t i = 0; i < q; ++i)
    pair_rows_.row(static_cast<Eigen::Index>(i)) = (space.gram_real() * plane_.ortho()[i]).transpose();
  for (std::size_t k = 0; k < q; ++k) {
    const Eigen::VectorXd c = to_real(plane_.span()[k]);
    Eigen::VectorXd g = pair_rows_ * c;
    gamma_.push_back(g / g.norm());
  }
}

Eigen::VectorXd SignCone::center(const Eigen::VectorXd& x) const {
  if (x.size() != pair_rows_.cols()) throw ValidationError("argument length does not match the space dimension");
  return -(pair_rows_ * x);
}

double SignCone::value(const Eigen::VectorXd& x) const { return value_at(center(x)); }

double SignCone::deviation(const Eigen::VectorXd& x, const std::vector<int>& signs) const {
  return deviation_at(center(x), signs);
}

namespace {

struct Sector {
  double lo, hi;
  std::vector<int> signs;
};

std::vector<Sector> planar_sectors(const std::vector<Eigen::VectorXd>& gamma) {
  std::vector<double> rays;
  for (const auto& g : gamma) {
    const double t = std::atan2(g[1], g[0]);
    rays.push_back(t + kPi / 2);
    rays.push_back(t - kPi / 2);
  }
  rays = sorted_angles(rays);
  std::vector<Sector> out;
  for (std::size_t k = 0; k < rays.size(); ++k) {
    const double lo = rays[k];
    const double hi = k + 1 < rays.size() ? rays[k + 1] : rays[0] + kTwoPi;
    const double mid = 0.5 * (lo + hi);
    Sector s{lo, hi, {}};
    for (const auto& g : gamma) s.signs.push_back(sgn_of(g[0] * std::cos(mid) + g[1] * std::sin(mid)));
    out.push_back(s);
  }
  return out;
}

double sector_mass(const Eigen::VectorXd& u, double lo, double hi, double tol) {
  const auto f = [&](double th) {
    const double c = std::cos(th), s = std::sin(th);
    const double a = u[0] * c + u[1] * s;
    const double b = u[0] * s - u[1] * c;
    return std::exp(-kPi * b * b) * detail::radial1(a);
  };
  return integrate(f, lo, hi, tol, "E2");
}

// P(X > -h, Y > -k) for standard normals with correlation rho.
double bivariate_upper(double h, double k, double rho) {
  if (h == 0) h = 1e-300;
  if (k == 0) k = 1e-300;
  const double r = std::sqrt((1 - rho) * (1 + rho));
  const double ah = (k - rho * h) / (h * r);
  const double ak = (h - rho * k) / (k * r);
  const double beta = (h * k > 0) ? 0.0 : 0.5;
  const auto phi = [](double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); };
  return 0.5 * phi(h) + 0.5 * phi(k) - boost::math::owens_t(h, ah) - boost::math::owens_t(k, ak) - beta;
}

// Triple sign average in a frame whose third axis is gamma_3: the first two signs are
// averaged in closed form over each slice t3 = const, the slices numerically.
double solid_value(const Eigen::Vector3d& u, const Eigen::Vector3d& d1, const Eigen::Vector3d& d2, double tol) {
  const Eigen::Vector2d p1(d1[0], d1[1]), p2(d2[0], d2[1]);
  const double n1 = p1.norm(), n2 = p2.norm();
  const double rho = p1.dot(p2) / (n1 * n2);
  const Eigen::Vector2d uu(u[0], u[1]);
  const double s2pi = std::sqrt(kTwoPi);
  const auto phi = [](double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); };
  const auto slice = [&](double t3) {
    const double h1 = s2pi * (p1.dot(uu) + d1[2] * t3) / n1;
    const double h2 = s2pi * (p2.dot(uu) + d2[2] * t3) / n2;
    const double both = bivariate_upper(h1, h2, rho);
    const double f = 4 * both - 2 * phi(h1) - 2 * phi(h2) + 1;
    return std::exp(-kPi * (t3 - u[2]) * (t3 - u[2])) * f;
  };
  const double lo = u[2] - 9, hi = u[2] + 9;
  double total = 0;
  if (hi > 0) total += integrate(slice, std::max(lo, 0.0), hi, tol, "E3", 1e-15);
  if (lo < 0) total -= integrate(slice, lo, std::min(hi, 0.0), tol, "E3", 1e-15);
  return total;
}

}  // namespace

double SignCone::value_at(const Eigen::VectorXd& u) const {
  const double tol = tol_.quadrature_target;
  switch (rank()) {
    case 1:
      return std::erf(kSqrtPi * u[0] * gamma_[0][0]);
    case 2: {
      double total = 0;
      for (const auto& s : planar_sectors(gamma_)) {
        const int sign = s.signs[0] * s.signs[1];
        if (sign != 0) total += sign * sector_mass(u, s.lo, s.hi, tol);
      }
      return std::clamp(total, -1.0, 1.0);
    }
    default: {
      // rotate so that gamma_[2] is the pole
      const Eigen::Vector3d ez = gamma_[2];
      Eigen::Vector3d ex = std::fabs(ez[0]) < 0.9 ? Eigen::Vector3d(1, 0, 0) : Eigen::Vector3d(0, 1, 0);
      ex = (ex - ex.dot(ez) * ez).normalized();
      const Eigen::Vector3d ey = ez.cross(ex);
      Eigen::Matrix3d r;
      r.row(0) = ex.transpose();
      r.row(1) = ey.transpose();
      r.row(2) = ez.transpose();
      const Eigen::Vector3d uu = r * Eigen::Vector3d(u);
      const Eigen::Vector3d d1 = r * Eigen::Vector3d(gamma_[0]);
      const Eigen::Vector3d d2 = r * Eigen::Vector3d(gamma_[1]);
      return std::clamp(solid_value(uu, d1, d2, tol), -1.0, 1.0);
    }
  }
}

double SignCone::deviation_at(const Eigen::VectorXd& u, const std::vector<int>& signs) const {
  if (signs.size() != rank()) throw std::invalid_argument("one sign per vector required");
  // A zero sign means the argument lies exactly on that wall, where E1 vanishes identically.
  const auto e1_minus = [&](std::size_t i, int s) { return s == 0 ? 0.0 : erf_minus_sign(u.dot(gamma_[i]), s); };
  switch (rank()) {
    case 1:
      return e1_minus(0, signs[0]);
    case 2: {
      // E2 - s1 s2 = s2 (E1(c1) - s1) + sum s1 (s2 - sig2) m, or the same with the roles exchanged;
      // the sectors entering the sum lie across the wall that is farther from the center.
      const int s1 = signs[0], s2 = signs[1];
      const bool swap = s2 == 0 && s1 != 0;
      const std::size_t a = swap ? 1 : 0;
      const int sa = swap ? s2 : s1, sb = swap ? s1 : s2;
      double total = sb == 0 ? 0.0 : sb * e1_minus(a, sa);
      for (const auto& s : planar_sectors(gamma_)) {
        const int ka = s.signs[a], kb = s.signs[1 - a];
        const int w = ka * (kb - sb);
        if (w != 0) total += w * sector_mass(u, s.lo, s.hi, tol_.quadrature_target);
      }
      return total;
    }
    default:
      throw std::invalid_argument("deviation is available for rank 1 and 2 only");
  }
}

double SignCone::joint_deviation(const Eigen::VectorXd& x, const std::vector<int>& signs) const {
  if (rank() != 2 || signs.size() != 2) throw std::invalid_argument("joint deviation needs two vectors and signs");
  const Eigen::VectorXd u = center(x);
  double total = 0;
  for (const auto& s : planar_sectors(gamma_)) {
    const int w = (s.signs[0] - signs[0]) * (s.signs[1] - signs[1]);
    if (w != 0) total += w * sector_mass(u, s.lo, s.hi, tol_.quadrature_target);
  }
  return total;
}

double E1(const QuadraticSpace& space, const RatVector& c, const Eigen::VectorXd& x) {
  return std::erf(kSqrtPi * space.inner(x, unit_negative(space, c)));
}

double E2(const QuadraticSpace& space, const RatVector& c1, const RatVector& c2, const Eigen::VectorXd& x,
          FloatTolerance tol) {
  // sgn(y,c)^2 = 1 almost everywhere for parallel arguments
  bool parallel = c1.size() == c2.size() && !is_zero(c1);
  for (std::size_t i = 0; parallel && i < c1.size(); ++i)
    for (std::size_t j = i + 1; parallel && j < c1.size(); ++j) parallel = c1[i] * c2[j] == c1[j] * c2[i];
  if (parallel && space.norm(c1) < 0 && !is_zero(c2)) return space.inner(c1, c2) < 0 ? 1.0 : -1.0;
  return SignCone(space, {c1, c2}, tol).value(x);
}

double E3(const QuadraticSpace& space, const RatVector& c1, const RatVector& c2, const RatVector& c3,
          const Eigen::VectorXd& x, FloatTolerance tol) {
  return SignCone(space, {c1, c2, c3}, tol).value(x);
}

double generalized_erf(const QuadraticSpace& space, const std::vector<RatVector>& cs, const Eigen::VectorXd& x,
                       FloatTolerance tol) {
  return SignCone(space, cs, tol).value(x);
}

}  // namespace ngtheta
