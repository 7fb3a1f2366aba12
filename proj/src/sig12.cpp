#include "ngtheta/sig12.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace ngtheta::sig12 {

namespace {

int sgn_r(const Rational& r) { return sgn(r); }

Rational abs2(const UHPoint& z) { return z.x * z.x + z.y * z.y; }

bool same_point(const UHPoint& a, const UHPoint& b) { return a.x == b.x && a.y == b.y; }

void check_form_space(const QuadraticSpace& space) {
  if (space.gram() != form_space().gram()) throw InputError("winding needs an N-gon in form coordinates");
}

}  // namespace

QuadraticSpace form_space() {
  return QuadraticSpace(RatMatrix{{0, 0, 4}, {0, -2, 0}, {4, 0, 0}}, Signature{1, 2});
}

QuadraticSpace basis_space() { return QuadraticSpace(RatMatrix{{2, 0, 0}, {0, -2, 0}, {0, 0, -2}}, Signature{1, 2}); }

RatVector form_to_basis(const RatVector& v) {
  if (v.size() != 3) throw InputError("expected three coordinates");
  return {v[0] + v[2], v[1], v[0] - v[2]};
}

RatVector basis_to_form(const RatVector& e) {
  if (e.size() != 3) throw InputError("expected three coordinates");
  return {(e[0] + e[2]) / 2, e[1], (e[0] - e[2]) / 2};
}

UHPoint make_point(const Rational& x, const Rational& y) {
  if (y <= 0) throw InputError("point must lie in the upper half plane");
  return {x, y};
}

std::complex<double> to_complex(const UHPoint& z) { return {z.x.get_d(), z.y.get_d()}; }

RatVector point_to_vector(const UHPoint& z) {
  if (z.y <= 0) throw InputError("point must lie in the upper half plane");
  return {1 / (2 * z.y), -z.x / z.y, abs2(z) / (2 * z.y)};
}

Eigen::Vector3d point_to_vector(std::complex<double> z) {
  const double y = z.imag();
  return {1 / (2 * y), -z.real() / y, std::norm(z) / (2 * y)};
}

RatVector cross(const RatVector& u0, const RatVector& u1) {
  if (u0.size() != 3 || u1.size() != 3) throw InputError("cross product needs three coordinates");
  return {u0[1] * u1[2] - u0[2] * u1[1], u0[0] * u1[2] - u0[2] * u1[0], -(u0[0] * u1[1] - u0[1] * u1[0])};
}

RatVector cross_form(const RatVector& u0, const RatVector& u1) {
  return basis_to_form(cross(form_to_basis(u0), form_to_basis(u1)));
}

Rational alpha(const UHPoint& z1, const UHPoint& z2, const UHPoint& z3) {
  const Rational n = z1.x * (abs2(z2) - abs2(z3)) + z2.x * (abs2(z3) - abs2(z1)) + z3.x * (abs2(z1) - abs2(z2));
  return n / (2 * z1.y * z2.y * z3.y);
}

std::complex<double> cm_point(const RatVector& v) {
  const Rational q = 4 * v[0] * v[2] - v[1] * v[1];
  if (q <= 0) throw ValidationError("CM point needs Q > 0");
  const double a = v[0].get_d();
  return {-v[1].get_d() / (2 * a), std::sqrt(q.get_d()) / (2 * a)};
}

std::complex<double> cm_point_upper(const RatVector& v) {
  const std::complex<double> z = cm_point(v);
  return z.imag() > 0 ? z : std::conj(z);
}

std::complex<double> plane_to_point(const RatVector& u0, const RatVector& u1) {
  return cm_point(cross_form(u0, u1));
}

RatVector primitive(const RatVector& v) {
  mpz_class den = 1;
  for (const auto& c : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  std::vector<mpz_class> ints;
  mpz_class g = 0;
  for (const auto& c : v) {
    ints.push_back(c.get_num() * (den / c.get_den()));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints.back().get_mpz_t());
  }
  if (g == 0) return v;
  RatVector out;
  for (const auto& n : ints) out.emplace_back(mpz_class(n / g));
  return out;
}

RecoveryError::RecoveryError(Kind k, std::size_t vertex, const std::string& msg)
    : ValidationError(msg), kind(k), j(vertex) {}

std::vector<int> turning_signs(const std::vector<UHPoint>& zs) {
  const std::size_t n = zs.size();
  if (n < 3) throw InputError("need at least three vertices");
  for (std::size_t j = 0; j < n; ++j) {
    if (zs[j].y <= 0) throw InputError("vertex " + std::to_string(j + 1) + " is not in the upper half plane");
    if (same_point(zs[j], zs[(j + 1) % n]))
      throw RecoveryError(RecoveryError::Kind::coincident, j + 1,
                          "vertices " + std::to_string(j + 1) + " and " + std::to_string((j + 1) % n + 1) +
                              " coincide");
  }
  std::vector<int> tau(n);
  for (std::size_t j = 0; j < n; ++j) {
    tau[j] = sgn_r(alpha(zs[(j + n - 1) % n], zs[j], zs[(j + 1) % n]));
    if (tau[j] == 0)
      throw RecoveryError(RecoveryError::Kind::collinear, j + 1,
                          "vertex " + std::to_string(j + 1) + " and its neighbours lie on one geodesic");
  }
  return tau;
}

Recovery recover_ngon(const std::vector<UHPoint>& zs_in, bool allow_reverse) {
  std::vector<UHPoint> zs = zs_in;
  std::vector<int> tau = turning_signs(zs);
  const int total = std::accumulate(tau.begin(), tau.end(), 1, std::multiplies<int>());
  bool reversed = false;
  if (total != 1) {
    if (!(allow_reverse && zs.size() % 2 == 1))
      throw RecoveryError(RecoveryError::Kind::total_turning, zs.size(),
                          "total turning != 1: odd number of right turns" +
                              std::string(zs.size() % 2 == 1 ? "; reversing the vertex order gives an admissible "
                                                               "collection with negated theta series"
                                                             : ""));
    std::reverse(zs.begin(), zs.end());
    tau = turning_signs(zs);
    reversed = true;
  }
  const std::size_t n = zs.size();
  std::vector<RatVector> cs;
  int eps = 1;
  for (std::size_t j = 0; j < n; ++j) {
    const RatVector y = cross_form(point_to_vector(zs[(j + n - 1) % n]), point_to_vector(zs[j]));
    cs.push_back(primitive(Rational(eps) * y));
    eps *= tau[j];
  }
  return {NGonData::validate(form_space(), std::move(cs)), reversed, std::move(tau)};
}

int one_sign_term(const std::vector<UHPoint>& zs, std::size_t j) {
  const std::size_t n = zs.size();
  if (j < 1 || j > n) throw std::out_of_range("vertex index out of range");
  const auto tau = turning_signs(zs);
  const UHPoint& prev = zs[(j + n - 2) % n];
  const UHPoint& cur = zs[j - 1];
  const UHPoint& next = zs[j % n];
  return tau[j - 1] * sgn_r(abs2(cur) - abs2(prev)) * sgn_r(abs2(next) - abs2(cur));
}

Winding winding_number(const NGonData& ngon, const RatVector& x) {
  check_form_space(ngon.space());
  if (ngon.space().Q(x) <= 0) throw ValidationError("winding needs Q(x) > 0");
  if (!ngon.epsilon(x).regular) throw ValidationError("x is not regular for the collection");
  const std::complex<double> zx_up = cm_point_upper(x);
  const auto edge_point = [&](std::size_t j, const Rational& s) {
    return plane_to_point(ngon.C(j), (s - 1) * ngon.prev(j) + s * ngon.next(j));
  };
  const bool upper = edge_point(1, Rational(0)).imag() > 0;
  const std::complex<double> zx = upper ? zx_up : std::conj(zx_up);

  Winding out;
  out.min_distance = std::numeric_limits<double>::infinity();
  double total = 0;
  const auto visit = [&](const std::complex<double>& p) {
    out.min_distance = std::min(out.min_distance, std::abs(p - zx));
    ++out.samples;
  };
  const auto segment = [&](auto&& self, std::size_t j, const Rational& s0, const Rational& s1,
                           std::complex<double> p0, std::complex<double> p1, int depth) -> void {
    const double d = std::arg((p1 - zx) / (p0 - zx));
    const double near = std::min(std::abs(p0 - zx), std::abs(p1 - zx));
    if ((std::abs(d) > std::numbers::pi / 8 || std::abs(p1 - p0) > 0.5 * near) && depth < 40) {
      const Rational sm = (s0 + s1) / 2;
      const std::complex<double> pm = edge_point(j, sm);
      visit(pm);
      self(self, j, s0, sm, p0, pm, depth + 1);
      self(self, j, sm, s1, pm, p1, depth + 1);
      return;
    }
    if (std::abs(d) >= std::numbers::pi / 2) throw ValidationError("curve sampling could not resolve the winding");
    total += d;
  };
  for (std::size_t j = 1; j <= ngon.size(); ++j) {
    constexpr int kInitial = 8;
    std::complex<double> p0 = edge_point(j, Rational(0));
    visit(p0);
    for (int k = 1; k <= kInitial; ++k) {
      const Rational s0 = make_rational(k - 1, kInitial), s1 = make_rational(k, kInitial);
      const std::complex<double> p1 = edge_point(j, s1);
      visit(p1);
      segment(segment, j, s0, s1, p0, p1, 0);
      p0 = p1;
    }
  }
  if (out.min_distance < 1e-12 * std::max(1.0, std::abs(zx)))
    throw ValidationError("curve passes too close to the CM point");
  const double turns = total / (2 * std::numbers::pi);
  out.winding = static_cast<int>(std::lround(turns));
  if (std::abs(turns - out.winding) > 1e-6) throw ValidationError("accumulated angle is not a multiple of 2 pi");
  return out;
}

std::vector<RatVector> fundamental_domain(const Rational& T) {
  if (T <= 1) throw InputError("truncation height must exceed 1");
  return {{0, -1, make_rational(1, 2)},
          {make_rational(-1, 2), 0, (T * T + make_rational(1, 4)) / 2},
          {0, 1, make_rational(1, 2)},
          {make_rational(1, 2), 0, make_rational(-1, 2)}};
}

std::vector<RatVector> butterfly() {
  return {{make_rational(1, 2), make_rational(-3, 2), make_rational(-5, 4)},
          {make_rational(-1, 2), 0, 2},
          {make_rational(1, 2), make_rational(3, 2), make_rational(-5, 4)},
          {make_rational(1, 2), 0, make_rational(-1, 2)}};
}

ClassSeries truncated_class_series(const Rational& T, const Rational& nmax, const SeriesOptions& opts) {
  NGonData ngon = NGonData::validate(form_space(), fundamental_domain(T));
  SeriesOptions o = opts;
  o.normalized = true;
  const LatticeCoset coset = make_coset(form_space(), {});
  QExpansion series = holomorphic_series(coset, NGonKernel(ngon), nmax, o);
  return {std::move(series), std::move(ngon)};
}

}  // namespace ngtheta::sig12
