#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "ngtheta/error_functions.hpp"

using namespace ngtheta;

namespace {

const double kPi = std::numbers::pi;

Rational R(long p, long q = 1) { return make_rational(p, q); }

// signature (2,3), not diagonal
QuadraticSpace sig23() {
  return QuadraticSpace(RatMatrix{{2, 1, 0, 0, 0}, {1, 2, 0, 0, 0}, {0, 0, -2, 1, 0}, {0, 0, 1, -4, 0},
                                  {0, 0, 0, 0, -6}},
                        Signature{2, 3});
}

QuadraticSpace sig13() { return QuadraticSpace(RatMatrix{{2, 0, 0, 0}, {0, -2, 0, 0}, {0, 0, -2, 0}, {0, 0, 0, -2}}); }

// Independent oracle: iterated integral in an orthonormal frame of span(c1,c2); the inner
// variable is integrated in closed form between sign breakpoints, the outer one numerically.
double e2_oracle(const QuadraticSpace& v, const RatVector& c1, const RatVector& c2, const Eigen::VectorXd& x) {
  const Eigen::VectorXd a = to_real(c1), b = to_real(c2);
  // Gram-Schmidt for -( , )
  const auto bf = [&](const Eigen::VectorXd& p, const Eigen::VectorXd& q) { return -v.inner(p, q); };
  const Eigen::VectorXd u1 = a / std::sqrt(bf(a, a));
  Eigen::VectorXd w = b - bf(b, u1) * u1;
  const Eigen::VectorXd u2 = w / std::sqrt(bf(w, w));
  const double m1 = -v.inner(x, u1), m2 = -v.inner(x, u2);  // centre
  const double g1[2] = {v.inner(u1, a), v.inner(u2, a)};
  const double g2[2] = {v.inner(u1, b), v.inner(u2, b)};
  const auto cdf = [](double t) { return 0.5 * std::erfc(-std::sqrt(kPi) * t); };
  const auto outer = [&](double t1) {
    // breakpoints in t2 where g.(t1,t2) changes sign
    std::vector<double> bp;
    for (const double* g : {g1, g2})
      if (std::fabs(g[1]) > 1e-300) bp.push_back(-g[0] * t1 / g[1]);
    std::sort(bp.begin(), bp.end());
    std::vector<double> edges{-INFINITY};
    edges.insert(edges.end(), bp.begin(), bp.end());
    edges.push_back(INFINITY);
    double s = 0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      double lo = edges[k], hi = edges[k + 1];
      double mid = std::isinf(lo) ? hi - 1 : (std::isinf(hi) ? lo + 1 : 0.5 * (lo + hi));
      const auto sg = [&](const double* g) { double t = g[0] * t1 + g[1] * mid; return (t > 0) - (t < 0); };
      const double mass = (std::isinf(hi) ? 1.0 : cdf(hi - m2)) - (std::isinf(lo) ? 0.0 : cdf(lo - m2));
      s += sg(g1) * sg(g2) * mass;
    }
    return std::exp(-kPi * (t1 - m1) * (t1 - m1)) * s;
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  return GK::integrate(outer, -INFINITY, 0.0, 15, 1e-13) + GK::integrate(outer, 0.0, INFINITY, 15, 1e-13);
}

double e1_oracle(double a) {
  // int e^{-pi (t-a)^2} sgn(t) dt by Gauss-Legendre on [-12, 12] around a, split at 0
  using G = boost::math::quadrature::gauss<double, 40>;
  const auto f = [&](double t) { return std::exp(-kPi * (t - a) * (t - a)); };
  double pos = 0, neg = 0;
  const double lo = a - 12, hi = a + 12;
  const int pieces = 48;
  for (int k = 0; k < pieces; ++k) {
    double l = lo + (hi - lo) * k / pieces, h = lo + (hi - lo) * (k + 1) / pieces;
    if (h <= 0) neg += G::integrate(f, l, h);
    else if (l >= 0) pos += G::integrate(f, l, h);
    else {
      neg += G::integrate(f, l, 0.0);
      pos += G::integrate(f, 0.0, h);
    }
  }
  return pos - neg;
}

Eigen::VectorXd random_real(std::mt19937& rng, int m, double scale) {
  std::normal_distribution<double> nd(0, scale);
  Eigen::VectorXd x(m);
  for (int i = 0; i < m; ++i) x[i] = nd(rng);
  return x;
}

}  // namespace

TEST_CASE("radial closed form against quadrature") {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  for (double a : {-7.0, -5.5, -5.0, -4.9, -3.0, -1.0, 0.0, 0.7, 2.5}) {
    const double r1 = GK::integrate([&](double r) { return r * std::exp(-kPi * (r - a) * (r - a)); }, 0.0, INFINITY, 15, 1e-14);
    CHECK(detail::radial1(a) == doctest::Approx(r1).epsilon(1e-10));
  }
}

TEST_CASE("E1 closed form vs quadrature") {
  const QuadraticSpace v = sig13();
  const RatVector c{R(0), R(1), R(0), R(0)};  // (c,c) = -2
  CHECK(E1(v, c, Eigen::VectorXd::Zero(4)) == 0);
  // (x, und c) = 1
  Eigen::VectorXd x = Eigen::VectorXd::Zero(4);
  x[1] = -1 / std::sqrt(2.0);
  CHECK(E1(v, c, x) == doctest::Approx(0.987811).epsilon(1e-6));
  CHECK(E1(v, c, x) == doctest::Approx(std::erf(std::sqrt(kPi))).epsilon(1e-15));
  std::mt19937 rng(5);
  for (int t = 0; t < 50; ++t) {
    const Eigen::VectorXd y = random_real(rng, 4, 1.0);
    const double a = v.inner(y, unit_negative(v, c));
    CHECK(std::fabs(E1(v, c, y) - e1_oracle(a)) < 1e-10);
    CHECK(E1(v, R(5, 3) * c, y) == doctest::Approx(E1(v, c, y)).epsilon(1e-15));
    CHECK(E1(v, c, -y) == doctest::Approx(-E1(v, c, y)).epsilon(1e-15));
  }
}

TEST_CASE("E2 trivial values") {
  const QuadraticSpace v = sig13();
  const RatVector c1{R(0), R(1), R(0), R(0)}, c2{R(0), R(0), R(1), R(0)};
  std::mt19937 rng(9);
  const Eigen::VectorXd x = random_real(rng, 4, 1.0);
  CHECK(E2(v, c1, c1, x) == 1);
  CHECK(E2(v, c1, R(3) * c1, x) == 1);
  CHECK(std::fabs(E2(v, c1, c2, Eigen::VectorXd::Zero(4))) < 1e-13);
}

TEST_CASE("E2 factorization on orthogonal data") {
  const QuadraticSpace v = sig13();
  const RatVector c1{R(0), R(1), R(0), R(0)}, c2{R(0), R(0), R(2), R(0)};
  std::mt19937 rng(13);
  for (int t = 0; t < 40; ++t) {
    const Eigen::VectorXd x = random_real(rng, 4, 1.2);
    const double prod = E1(v, c1, x) * E1(v, c2, x);
    CHECK(std::fabs(E2(v, c1, c2, x) - prod) < 1e-8);
    CHECK(std::fabs(e2_oracle(v, c1, c2, x) - prod) < 1e-8);
  }
}

TEST_CASE("E2 against the iterated-integral oracle on skew data") {
  const QuadraticSpace v = sig23();
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> d(-4, 4);
  int checked = 0;
  while (checked < 40) {
    RatVector c1{R(0), R(0), R(d(rng)), R(d(rng)), R(d(rng))};
    RatVector c2{R(d(rng), 3), R(0), R(d(rng)), R(d(rng)), R(d(rng))};
    try {
      SignCone cone(v, {c1, c2});
    } catch (const DegeneratePlaneError&) {
      continue;
    }
    const Eigen::VectorXd x = random_real(rng, 5, 0.8);
    CHECK(std::fabs(E2(v, c1, c2, x) - e2_oracle(v, c1, c2, x)) < 1e-9);
    ++checked;
  }
}

TEST_CASE("E3 factorization and mixed factorization") {
  const QuadraticSpace v = sig13();
  const RatVector c1{R(0), R(1), R(0), R(0)}, c2{R(0), R(0), R(3), R(0)}, c3{R(0), R(0), R(0), R(1, 2)};
  std::mt19937 rng(21);
  CHECK(std::fabs(E3(v, c1, c2, c3, Eigen::VectorXd::Zero(4))) < 1e-12);
  for (int t = 0; t < 10; ++t) {
    const Eigen::VectorXd x = random_real(rng, 4, 1.0);
    const double prod = E1(v, c1, x) * E1(v, c2, x) * E1(v, c3, x);
    CHECK(std::fabs(E3(v, c1, c2, c3, x) - prod) < 1e-8);
  }
  // c3 orthogonal to a skew pair
  const RatVector s1{R(0), R(2), R(1), R(0)}, s2{R(0), R(-1), R(3), R(0)};
  for (int t = 0; t < 10; ++t) {
    const Eigen::VectorXd x = random_real(rng, 4, 1.0);
    const double expect = e2_oracle(v, s1, s2, x) * E1(v, c3, x);
    CHECK(std::fabs(E3(v, s1, s2, c3, x) - expect) < 1e-8);
    CHECK(std::fabs(E3(v, c3, s1, s2, x) - expect) < 1e-8);
  }
  CHECK_THROWS_AS(E3(v, c1, c1, c3, Eigen::VectorXd::Zero(4)), DegeneratePlaneError);
}

TEST_CASE("E3 is symmetric under permutations") {
  const QuadraticSpace v = sig23();
  const RatVector c1{R(0), R(0), R(1), R(0), R(0)}, c2{R(0), R(0), R(1), R(1), R(0)}, c3{R(0), R(0), R(-1), R(1), R(1)};
  std::mt19937 rng(23);
  for (int t = 0; t < 5; ++t) {
    const Eigen::VectorXd x = random_real(rng, 5, 0.7);
    const double base = E3(v, c1, c2, c3, x);
    CHECK(std::fabs(base) <= 1.0);
    CHECK(std::fabs(E3(v, c2, c3, c1, x) - base) < 1e-8);
    CHECK(std::fabs(E3(v, c3, c1, c2, x) - base) < 1e-8);
    CHECK(std::fabs(E3(v, c2, c1, c3, x) - base) < 1e-8);
  }
}

TEST_CASE("invariances: scaling, projection, symmetry") {
  const QuadraticSpace v = sig23();
  const RatVector c1{R(0), R(0), R(1), R(0), R(0)}, c2{R(0), R(0), R(1), R(1), R(1)}, c3{R(0), R(0), R(0), R(1), R(-1)};
  std::mt19937 rng(29);
  for (int t = 0; t < 8; ++t) {
    const Eigen::VectorXd x = random_real(rng, 5, 1.0);
    const SignCone cone(v, {c1, c2});
    // pr_z(x) = -sum (x,u_i) u_i
    Eigen::VectorXd pr = Eigen::VectorXd::Zero(5);
    for (const auto& u : cone.plane().ortho()) pr -= v.inner(x, u) * u;
    const double e2 = E2(v, c1, c2, x);
    CHECK(std::fabs(E2(v, c1, c2, pr) - e2) < 1e-8);
    CHECK(std::fabs(E2(v, R(7, 3) * c1, R(2, 9) * c2, x) - e2) < 1e-8);
    CHECK(std::fabs(E2(v, c2, c1, x) - e2) < 1e-8);
    const double e3 = E3(v, c1, c2, c3, x);
    CHECK(std::fabs(E3(v, R(5) * c1, c2, R(1, 4) * c3, x) - e3) < 1e-8);
    const SignCone cone3(v, {c1, c2, c3});
    Eigen::VectorXd pr3 = Eigen::VectorXd::Zero(5);
    for (const auto& u : cone3.plane().ortho()) pr3 -= v.inner(x, u) * u;
    CHECK(std::fabs(E3(v, c1, c2, c3, pr3) - e3) < 1e-8);
  }
}

TEST_CASE("sign asymptotics at margin 4") {
  const QuadraticSpace v = sig23();
  const std::vector<RatVector> cs{{R(0), R(0), R(1), R(0), R(0)}, {R(0), R(0), R(1), R(1), R(1)},
                                  {R(0), R(0), R(0), R(1), R(-1)}};
  std::mt19937 rng(31);
  int done = 0;
  while (done < 6) {
    const Eigen::VectorXd xh = random_real(rng, 5, 1.0);
    for (std::size_t q = 1; q <= 3; ++q) {
      std::vector<RatVector> sub(cs.begin(), cs.begin() + static_cast<long>(q));
      double margin = INFINITY;
      double prod = 1;
      for (const auto& c : sub) {
        const double p = v.inner(xh, unit_negative(v, c));
        margin = std::min(margin, std::fabs(p));
        prod *= (p > 0) - (p < 0);
      }
      if (margin < 1e-3) continue;
      const double r = 4 / margin;
      const double val = generalized_erf(v, sub, r * xh);
      CHECK(std::fabs(val - prod) <= 1e-6);
      CHECK(std::fabs(generalized_erf(v, sub, 2 * r * xh) - prod) <= 1e-6);
    }
    ++done;
  }
}

TEST_CASE("deviation matches value minus signs and stays accurate far out") {
  const QuadraticSpace v = sig23();
  const RatVector c1{R(0), R(0), R(1), R(0), R(0)}, c2{R(0), R(0), R(1), R(1), R(1)};
  const SignCone cone(v, {c1, c2});
  std::mt19937 rng(37);
  for (int t = 0; t < 20; ++t) {
    const Eigen::VectorXd x = random_real(rng, 5, 1.0);
    const double p1 = v.inner(x, to_real(c1)), p2 = v.inner(x, to_real(c2));
    const std::vector<int> s{(p1 > 0) - (p1 < 0), (p2 > 0) - (p2 < 0)};
    CHECK(std::fabs(cone.deviation(x, s) - (cone.value(x) - s[0] * s[1])) < 1e-10);
    // far out: compare with the single-sector asymptotic scale, relative accuracy
    const Eigen::VectorXd y = 6 * x;
    const double dev = cone.deviation(y, s);
    CHECK(std::fabs(dev) <= 1.0);
    const double dev_b = cone.deviation(y * (1 + 1e-9), s);
    CHECK(std::fabs(dev - dev_b) <= 1e-6 * std::fabs(dev) + 1e-300);
  }
  // exact wall: sign zero on the first vector
  Eigen::VectorXd w = Eigen::VectorXd::Zero(5);
  w[0] = 1;  // (w, c1) = 0 and (w, c2) = 0
  CHECK(std::fabs(cone.deviation(w, {0, 0}) - cone.value(w)) < 1e-12);
}
