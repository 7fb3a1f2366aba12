#pragma once

#include <complex>
#include <vector>

#include "ngtheta/lattice_theta.hpp"
#include "ngtheta/ngon.hpp"

// Signature (1,2) model: traceless 2x2 matrices with Q = det and (X,Y) = -tr(XY).
// Form coordinates [a,b,c] stand for the matrix [[b,2c],[-2a,-b]], so Q([a,b,c]) = 4ac - b^2.
// The orthogonal basis e1, e2, e3 has Gram diag(2,-2,-2).
namespace ngtheta::sig12 {

QuadraticSpace form_space();
QuadraticSpace basis_space();

// [a,b,c] <-> coordinates in e1, e2, e3.
RatVector form_to_basis(const RatVector& abc);
RatVector basis_to_form(const RatVector& e);

struct UHPoint {
  Rational x;
  Rational y;
};

UHPoint make_point(const Rational& x, const Rational& y);
std::complex<double> to_complex(const UHPoint& z);

// X(z) in form coordinates.
RatVector point_to_vector(const UHPoint& z);
Eigen::Vector3d point_to_vector(std::complex<double> z);

// Hyperbolic cross product in basis coordinates.
RatVector cross(const RatVector& u0, const RatVector& u1);
// Same product for form coordinates.
RatVector cross_form(const RatVector& u0, const RatVector& u1);

Rational alpha(const UHPoint& z1, const UHPoint& z2, const UHPoint& z3);

// Zero of a z^2 + b z + c with Im z of the sign of a. Needs Q > 0.
std::complex<double> cm_point(const RatVector& abc);
// Point of the upper half plane fixed by x, Q(x) > 0.
std::complex<double> cm_point_upper(const RatVector& abc);

// Point of H+ or H- represented by an oriented negative plane given in form coordinates.
std::complex<double> plane_to_point(const RatVector& u0, const RatVector& u1);

// Primitive integral multiple with the same sign.
RatVector primitive(const RatVector& v);

struct RecoveryError : ValidationError {
  enum class Kind { coincident, collinear, total_turning };
  RecoveryError(Kind kind, std::size_t j, const std::string& msg);
  Kind kind;
  std::size_t j;  // 1-based vertex
};

struct Recovery {
  NGonData ngon;
  bool reversed = false;  // vertex order was reversed to satisfy the total turning condition
  std::vector<int> tau;
};

// C_j = eps_j X(z_{j-1}) x X(z_j), with z_0 = z_N, scaled to primitive integral vectors.
// With allow_reverse, a total turning failure for odd N is resolved by reversing the order.
Recovery recover_ngon(const std::vector<UHPoint>& zs, bool allow_reverse = false);
std::vector<int> turning_signs(const std::vector<UHPoint>& zs);

// tau_j sgn(|z_j|^2 - |z_{j-1}|^2) sgn(|z_{j+1}|^2 - |z_j|^2), 1-based cyclic j.
int one_sign_term(const std::vector<UHPoint>& zs, std::size_t j);

struct Winding {
  int winding = 0;
  double min_distance = 0;
  std::size_t samples = 0;
};

// Winding number of the loop of vertex planes and edges around the CM point of x. The N-gon must
// live in form coordinates. Throws ValidationError if x is not regular or Q(x) <= 0.
Winding winding_number(const NGonData& ngon, const RatVector& x);

// Truncated fundamental domain for SL2(Z): vertical sides at x = 1/2 and x = -1/2, the unit circle,
// and the circle |z|^2 = T^2 + 1/4.
std::vector<RatVector> fundamental_domain(const Rational& T);
// Two diagonals, the circle |z| = 2 and the unit circle; the loop bounds two triangles of opposite
// orientation.
std::vector<RatVector> butterfly();

struct ClassSeries {
  QExpansion series;  // normalized
  NGonData ngon;
};

// Intersection counts with the truncated fundamental domain on the lattice of integral forms.
ClassSeries truncated_class_series(const Rational& T, const Rational& nmax, const SeriesOptions& opts = {});

}  // namespace ngtheta::sig12
