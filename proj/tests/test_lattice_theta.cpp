#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ngtheta/lattice_theta.hpp"
#include "ngtheta/sig12.hpp"
#include "oracles.hpp"

using namespace ngtheta;
using oracle::R;

namespace {

QuadraticSpace forms() { return sig12::form_space(); }

NGonData funddom() { return NGonData::validate(forms(), sig12::fundamental_domain(R(2))); }

// The plane of z = i: orthogonal complement of X(i) = [1/2, 0, 1/2].
NegativePlane plane_of_i() { return NegativePlane(forms(), {{0, R(1), 0}, {R(1, 2), 0, R(-1, 2)}}); }

std::vector<RatVector> brute_force_ball(long B) {
  // (x,x)_i = 4a^2 + 2b^2 + 4c^2
  std::vector<RatVector> out;
  for (long a = -B; a <= B; ++a)
    for (long b = -B; b <= B; ++b)
      for (long c = -B; c <= B; ++c)
        if (4 * a * a + 2 * b * b + 4 * c * c <= B) out.push_back({R(a), R(b), R(c)});
  return out;
}

std::vector<RatVector> sorted(std::vector<RatVector> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("lattice predicates and cosets") {
  CHECK(is_integral(forms().gram()));
  CHECK(is_even(forms().gram()));
  CHECK_FALSE(is_even(RatMatrix{{1, 0}, {0, -1}}));
  CHECK_FALSE(is_integral(RatMatrix{{R(1, 2), 0}, {0, -1}}));
  const auto c = make_coset(forms(), {R(5, 4), R(-1, 2), 0});
  CHECK(c.mu == RatVector{R(1, 4), R(1, 2), 0});
  CHECK_THROWS_AS(make_coset(forms(), {R(1, 3), 0, 0}), InputError);
  CHECK_THROWS_AS(make_coset(forms(), {0, 0}), ValidationError);
}

TEST_CASE("discriminant group of the form lattice") {
  const auto g = discriminant_group(forms());
  CHECK(g.size() == 32);
  CHECK(is_zero(g.front()));
  CHECK(std::is_sorted(g.begin(), g.end()));
  // |L^dual / L| = |det Gram|
  CHECK(Rational(static_cast<long>(g.size())) == abs(forms().gram().determinant()));
  for (const auto& mu : g) {
    const RatVector gm = forms().gram() * mu;
    for (const auto& x : gm) CHECK(x.get_den() == 1);
  }
}

TEST_CASE("enumeration at the plane of i") {
  const auto coset = make_coset(forms(), {});
  const auto z = plane_of_i();
  const auto small = enumerate(coset, z, R(4));
  CHECK(small.size() == 7);
  CHECK(sorted(small) == sorted(brute_force_ball(4)));
  for (long B : {10, 30, 57}) CHECK(sorted(enumerate(coset, z, R(B))) == sorted(brute_force_ball(B)));
  // (x,x)_i from the majorant agrees with the closed form.
  for (const auto& x : enumerate(coset, z, R(30)))
    CHECK(majorant_exact(forms(), x, z).first == 4 * x[0] * x[0] + 2 * x[1] * x[1] + 4 * x[2] * x[2]);
  // Sorted by Q.
  const auto big = enumerate(coset, z, R(40));
  for (std::size_t i = 1; i < big.size(); ++i) CHECK(forms().Q(big[i - 1]) <= forms().Q(big[i]));
}

TEST_CASE("enumeration is monotone and empty below the coset minimum") {
  const auto z = plane_of_i();
  const auto coset = make_coset(forms(), {R(1, 4), 0, 0});
  // Minimum of 4a^2 + 2b^2 + 4c^2 on a in 1/4 + Z is 1/4.
  CHECK(enumerate(coset, z, R(1, 5)).empty());
  CHECK(enumerate(coset, z, R(1, 4)).size() == 1);
  std::size_t prev = 0;
  for (long B = 1; B <= 64; B *= 2) {
    const auto v = enumerate(coset, z, R(B));
    CHECK(v.size() >= prev);
    const auto half = enumerate(coset, z, R(B, 2));
    for (const auto& x : half) CHECK(std::find(v.begin(), v.end(), x) != v.end());
    prev = v.size();
  }
}

TEST_CASE("comparability of planes") {
  const auto z = plane_of_i();
  CHECK(comparability(forms(), z, z) == doctest::Approx(1.0));
  const NGonData d = funddom();
  for (std::size_t j = 1; j <= d.size(); ++j) CHECK(comparability(forms(), z, d.vertex_plane(j)) >= 1.0 - 1e-12);
}

TEST_CASE("holomorphic series certification") {
  const auto coset = make_coset(forms(), {});
  for (const NGonData& d : {funddom(), NGonData::validate(forms(), sig12::butterfly())}) {
    const NGonKernel k(d);
    SeriesOptions o;
    const QExpansion a = holomorphic_series(coset, k, R(30), o);
    o.safety *= 2;
    const QExpansion b = holomorphic_series(coset, k, R(30), o);
    CHECK(a.coeffs == b.coeffs);
    CHECK(a.nonregular == b.nonregular);
    CHECK(b.window.B >= a.window.B);
    CHECK(a.window.B >= a.window.kappa * a.window.safety * 2 * 30 - 1e-9);
    for (const auto& [n, c] : a.coeffs) {
      CHECK(n >= 0);
      CHECK(c.get_den() == 1);
    }
    CHECK(a.coeff(R(0)) == d.w());
  }
}

TEST_CASE("normalized mode divides by four") {
  const auto coset = make_coset(forms(), {});
  const NGonKernel k(funddom());
  SeriesOptions o;
  const QExpansion raw = holomorphic_series(coset, k, R(24), o);
  o.normalized = true;
  const QExpansion norm = holomorphic_series(coset, k, R(24), o);
  CHECK(raw.coeff(R(8)) == 8);
  CHECK(norm.coeff(R(8)) == 2);
  for (const auto& [n, c] : raw.coeffs) CHECK(norm.coeff(n) == c / 4);
}

TEST_CASE("series results do not depend on the thread count") {
  const auto coset = make_coset(forms(), {});
  const NGonKernel k(funddom());
  SeriesOptions o;
  o.threads = 1;
  const QExpansion a = holomorphic_series(coset, k, R(40), o);
  CompletionOptions co;
  co.threads = 1;
  const auto ca = completion_eval(coset, k, {0.2, 1.1}, R(6), co);
  for (unsigned t : {2u, 8u}) {
    o.threads = t;
    co.threads = t;
    const QExpansion b = holomorphic_series(coset, k, R(40), o);
    CHECK(a.coeffs == b.coeffs);
    CHECK(a.nonregular == b.nonregular);
    const auto cb = completion_eval(coset, k, {0.2, 1.1}, R(6), co);
    CHECK(ca.value == cb.value);
  }
}

TEST_CASE("completion coefficients converge and approach the holomorphic ones") {
  const auto coset = make_coset(forms(), {});
  const NGonKernel k(funddom());
  const auto c4 = completion_coefficients(coset, k, 1.0, R(4));
  const auto c8 = completion_coefficients(coset, k, 1.0, R(8));
  for (const auto& [n, v] : c4) {
    const auto it = c8.find(n);
    REQUIRE(it != c8.end());
    CHECK(std::abs(v - it->second) <= 1e-6);
  }
  // Large v: at n = 8 no vector is near a wall, so the completion is the holomorphic coefficient.
  const QExpansion h = holomorphic_series(coset, k, R(8));
  double prev = 1;
  for (double v : {1.0, 2.0, 4.0}) {
    const auto c = completion_coefficients(coset, k, v, R(8));
    const double diff = std::abs(c.at(R(8)) - h.coeff(R(8)).get_d());
    CHECK(diff < prev);
    prev = diff;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("completion value is stable and carries a tail bound") {
  const auto coset = make_coset(forms(), {});
  const NGonKernel k(funddom());
  const auto a = completion_eval(coset, k, {0, 1}, R(4));
  const auto b = completion_eval(coset, k, {0, 1}, R(8));
  CHECK(std::abs(a.value - b.value) <= 1e-6);
  CHECK(a.tail_bound > b.tail_bound);
  CHECK(b.tail_bound < 1e-10);
  CHECK(b.terms > a.terms);
  CHECK_THROWS_AS(completion_eval(coset, k, {0, -1}, R(4)), InputError);
}

TEST_CASE("Weil representation relations") {
  const auto rep = weil_representation(forms());
  const std::size_t n = rep.group.size();
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  CHECK((rep.S * rep.S.adjoint() - I).norm() < 1e-12);
  CHECK((rep.T * rep.T.adjoint() - I).norm() < 1e-12);
  const Eigen::MatrixXcd ST = rep.S * rep.T;
  CHECK((ST * ST * ST - rep.S * rep.S).norm() < 1e-10);
  CHECK_THROWS_AS(weil_representation(QuadraticSpace(RatMatrix{{1, 0}, {0, -1}})), InputError);
}

TEST_CASE("modularity of the completed series") {
  const NGonData d = funddom();
  const auto r = modularity_check(forms(), NGonKernel(d), {0, 1}, R(4));
  CHECK(r.t_ok);
  CHECK(r.t_defect < 1e-8);
  CHECK(r.s_ok);
  CHECK(r.s_defect < 1e-3);
  CHECK(r.tail_bound < 1e-3);
  CHECK(r.s_squared_defect < 1e-10);
  CHECK(r.st_cubed_defect < 1e-10);
  // Adding 4 to every weight is not modular (and not even convergent on negative vectors).
  const auto bad = modularity_check(forms(), NGonKernel(d, 32, 4), {0, 1}, R(4));
  CHECK(bad.s_defect >= 1e-1);
  CHECK_FALSE(bad.s_ok);
}
