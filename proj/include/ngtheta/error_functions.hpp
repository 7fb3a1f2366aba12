#pragma once

#include <Eigen/Dense>

#include <vector>

#include "ngtheta/quadratic_space.hpp"

namespace ngtheta {

// Gaussian average of a product of q sign functions over the negative plane spanned by cs (q = 1, 2, 3).
// The Gaussian has unit mass and is centred at pr_z(x); values lie in [-1, 1].
class SignCone {
 public:
  SignCone(const QuadraticSpace& space, std::vector<RatVector> cs, FloatTolerance tol = {});

  std::size_t rank() const { return gamma_.size(); }
  const NegativePlane& plane() const { return plane_; }

  // Coordinates of pr_z(x) in the orthonormal frame of the plane.
  Eigen::VectorXd center(const Eigen::VectorXd& x) const;

  double value(const Eigen::VectorXd& x) const;

  // value(x) - prod(signs), computed without cancellation. signs[i] is the
  // caller's exact sgn((x, c_i)); rank 1 and 2 only.
  double deviation(const Eigen::VectorXd& x, const std::vector<int>& signs) const;

  // Gaussian average of (sgn(t,c1) - s1)(sgn(t,c2) - s2), i.e. the mass of the wedge where both
  // signs differ from the given ones, weighted by the differences. Rank 2 only.
  double joint_deviation(const Eigen::VectorXd& x, const std::vector<int>& signs) const;

 private:
  double value_at(const Eigen::VectorXd& u) const;
  double deviation_at(const Eigen::VectorXd& u, const std::vector<int>& signs) const;

  NegativePlane plane_;
  Eigen::MatrixXd pair_rows_;  // row i is (G u_i)^T, so -(pair_rows_ x) = center
  std::vector<Eigen::VectorXd> gamma_;
  FloatTolerance tol_;
};

double E1(const QuadraticSpace& space, const RatVector& c, const Eigen::VectorXd& x);
double E2(const QuadraticSpace& space, const RatVector& c1, const RatVector& c2, const Eigen::VectorXd& x,
          FloatTolerance tol = {});
double E3(const QuadraticSpace& space, const RatVector& c1, const RatVector& c2, const RatVector& c3,
          const Eigen::VectorXd& x, FloatTolerance tol = {});

// Dispatches on cs.size().
double generalized_erf(const QuadraticSpace& space, const std::vector<RatVector>& cs, const Eigen::VectorXd& x,
                       FloatTolerance tol = {});

// erf(sqrt(pi) t) - s for s in {-1, 0, 1}, accurate when the difference is tiny.
double erf_minus_sign(double t, int s);

namespace detail {
// int_0^inf r exp(-pi (r - a)^2) dr
double radial1(double a);
}  // namespace detail

}  // namespace ngtheta
