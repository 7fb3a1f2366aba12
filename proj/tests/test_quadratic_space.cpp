#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ngtheta/quadratic_space.hpp"

using namespace ngtheta;

namespace {

QuadraticSpace matrix_model() { return QuadraticSpace(RatMatrix{{2, 0, 0}, {0, -2, 0}, {0, 0, -2}}); }

QuadraticSpace form_model() { return QuadraticSpace(RatMatrix{{0, 0, 4}, {0, -2, 0}, {4, 0, 0}}); }

RatVector e(int i) {
  RatVector v(3);
  v[static_cast<std::size_t>(i - 1)] = 1;
  return v;
}

Rational R(long p, long q = 1) { return make_rational(p, q); }

}  // namespace

TEST_CASE("rational parsing round trip") {
  CHECK(parse_rational("3/6") == R(1, 2));
  CHECK(parse_rational(" -7 ") == R(-7));
  CHECK(parse_rational("-0.125") == R(-1, 8));
  CHECK(parse_rational("+4/2") == R(2));
  CHECK(to_string(R(6, -4)) == "-3/2");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK(parse_rational_list("[1, -1/2, 0]") == RatVector{R(1), R(-1, 2), R(0)});
}

TEST_CASE("signatures of the two sig (1,2) models") {
  CHECK(matrix_model().signature() == Signature{1, 2});
  CHECK(form_model().signature() == Signature{1, 2});
  CHECK_THROWS_AS(QuadraticSpace(RatMatrix{{1, 0}, {0, 0}}), ValidationError);
  CHECK_THROWS_AS(QuadraticSpace(RatMatrix{{1, 2}, {3, 1}}), ValidationError);
  CHECK_THROWS_AS(QuadraticSpace(RatMatrix{{1, 0}, {0, 1}}, Signature{1, 1}), ValidationError);
  // zero diagonal needs the off-diagonal pivot
  CHECK(exact_signature(RatMatrix{{0, 1}, {1, 0}}) == Signature{1, 1});
}

TEST_CASE("inner products") {
  const auto v = matrix_model();
  CHECK(v.inner(e(1), e(1)) == 2);
  CHECK(v.inner(e(2), e(3)) == 0);
  CHECK(v.inner(e(2), RatVector(3)) == 0);
  CHECK_THROWS_AS(v.inner(e(1), RatVector(2)), ValidationError);
  CHECK(v.Q(e(1)) == 1);
}

TEST_CASE("exact signature agrees with floating eigenvalues") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 6;
    RatMatrix g(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) g(i, j) = g(j, i) = Rational(num(rng), den(rng));
    if (trial % 5 == 0) g(0, 0) = 0;
    if (g.determinant() == 0) continue;
    Eigen::MatrixXd gd(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) gd(i, j) = g(i, j).get_d();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gd);
    int p = 0, q = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) (es.eigenvalues()[i] > 0 ? p : q)++;
    CHECK(exact_signature(g) == Signature{p, q});
  }
}

TEST_CASE("majorant examples") {
  const auto f = form_model();
  // plane of i: the orthogonal complement of X(i) = [1/2, 0, 1/2]
  const NegativePlane zi(f, {{R(1, 2), R(0), R(-1, 2)}, {R(0), R(1), R(0)}});
  const RatVector x{R(1), R(0), R(2)};
  auto [val, r] = majorant_exact(f, x, zi);
  CHECK(val == 20);
  auto [vd, rd] = majorant(f, x, zi);
  CHECK(vd == doctest::Approx(20).epsilon(1e-12));
  CHECK(rd == doctest::Approx(r.get_d()).epsilon(1e-12));

  const RatVector s0 = zi.span()[0];
  auto [v0, r0] = majorant_exact(f, s0, zi);
  CHECK(v0 == -f.norm(s0));
  CHECK(r0 == -f.norm(s0));

  const RatVector perp{R(1, 2), R(0), R(1, 2)};
  auto [vp, rp] = majorant_exact(f, perp, zi);
  CHECK(vp == f.norm(perp));
  CHECK(rp == 0);
}

TEST_CASE("majorant dominates |(x,x)| and matches its matrix") {
  const auto f = form_model();
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> d(-6, 6);
  for (int trial = 0; trial < 200; ++trial) {
    RatVector a{R(d(rng), 3), R(d(rng)), R(d(rng), 2)};
    RatVector b{R(d(rng)), R(d(rng), 5), R(d(rng))};
    NegativePlane z = [&]() {
      for (;;) {
        try {
          return NegativePlane(f, {a, b});
        } catch (const DegeneratePlaneError&) {
          a = {R(d(rng), 3), R(d(rng)), R(d(rng), 2)};
          b = {R(d(rng)), R(d(rng), 5), R(d(rng))};
        }
      }
    }();
    const RatVector x{R(d(rng)), R(d(rng), 7), R(d(rng))};
    auto [val, r] = majorant_exact(f, x, z);
    CHECK(val >= f.norm(x));
    CHECK(val >= -f.norm(x));
    CHECK(r >= 0);
    const RatMatrix m = majorant_matrix(f, z);
    CHECK(inner(QuadraticSpace(RatMatrix::identity(3)), x, m * x) == val);
    const Eigen::MatrixXd mr = majorant_matrix_real(f, z);
    const Eigen::VectorXd xr = to_real(x);
    CHECK(xr.dot(mr * xr) == doctest::Approx(val.get_d()).epsilon(1e-9));
    // orthonormal basis
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        CHECK(f.inner(z.ortho()[i], z.ortho()[j]) == doctest::Approx(i == j ? -1.0 : 0.0).epsilon(1e-12));
  }
}

TEST_CASE("degenerate planes are rejected") {
  const auto v = matrix_model();
  CHECK_THROWS_AS(NegativePlane(v, {e(2), e(2)}), DegeneratePlaneError);
  CHECK_THROWS_AS(NegativePlane(v, {e(1), e(2)}), DegeneratePlaneError);
  CHECK_NOTHROW(NegativePlane(v, {e(2), e(3)}));
}

TEST_CASE("project_perp") {
  const auto v = matrix_model();
  CHECK(project_perp(v, e(1) + e(2), e(2)) == e(1));
  CHECK(project_perp(v, e(1), e(2)) == e(1));
  CHECK(is_zero(project_perp(v, e(3), e(3))));
  const RatVector null{R(1), R(1), R(0)};
  CHECK_THROWS_AS(project_perp(v, e(1), null), ValidationError);
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> d(-9, 9);
  for (int t = 0; t < 100; ++t) {
    RatVector x{R(d(rng), 2), R(d(rng)), R(d(rng), 3)};
    RatVector c{R(d(rng)), R(d(rng), 5), R(d(rng))};
    if (v.norm(c) == 0) continue;
    const RatVector p = project_perp(v, x, c);
    CHECK(v.inner(p, c) == 0);
    CHECK(project_perp(v, p, c) == p);
  }
}

TEST_CASE("unit_negative") {
  const auto v = matrix_model();
  const Eigen::VectorXd u = unit_negative(v, e(2));
  CHECK(u[1] == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(v.inner(u, u) == doctest::Approx(-1));
  const RatVector c{R(1, 3), R(2), R(-1)};
  const Eigen::VectorXd a = unit_negative(v, c);
  const Eigen::VectorXd b = unit_negative(v, R(7, 2) * c);
  CHECK((a - b).norm() < 1e-14);
  const RatVector unit{R(0), R(1, 2), R(1, 2)};
  CHECK(v.norm(unit) == -1);
  CHECK((unit_negative(v, unit) - to_real(unit)).norm() < 1e-15);
  CHECK_THROWS_AS(unit_negative(v, e(1)), ValidationError);
}
