#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "ngtheta/errors.hpp"
#include "ngtheta/rational.hpp"

namespace ngtheta {

struct Signature {
  int p = 0;
  int q = 0;
  bool operator==(const Signature&) const = default;
};

struct FloatTolerance {
  double abs_eps = 1e-12;
  double rel_eps = 1e-10;
  double quadrature_target = 1e-10;
  void check() const;
};

// Exact signature by congruence diagonalization. Throws ValidationError if singular or asymmetric.
Signature exact_signature(const RatMatrix& gram);

Eigen::VectorXd to_real(const RatVector& v);

class QuadraticSpace {
 public:
  explicit QuadraticSpace(RatMatrix gram);
  QuadraticSpace(RatMatrix gram, Signature expected);

  std::size_t dim() const { return gram_.size(); }
  const Signature& signature() const { return sig_; }
  const RatMatrix& gram() const { return gram_; }
  const Eigen::MatrixXd& gram_real() const { return gram_real_; }

  Rational inner(const RatVector& x, const RatVector& y) const;
  double inner(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  // (x,x)
  Rational norm(const RatVector& x) const { return inner(x, x); }
  // Q(x) = (x,x)/2
  Rational Q(const RatVector& x) const { return inner(x, x) / 2; }

  void check_dim(const RatVector& x) const;

 private:
  RatMatrix gram_;
  Signature sig_;
  Eigen::MatrixXd gram_real_;
};

// Oriented negative plane given by an ordered spanning list.
class NegativePlane {
 public:
  NegativePlane(const QuadraticSpace& space, std::vector<RatVector> span, double abs_eps = 1e-12);

  std::size_t rank() const { return span_.size(); }
  const std::vector<RatVector>& span() const { return span_; }
  // Orthonormal for -( , ), same orientation as span.
  const std::vector<Eigen::VectorXd>& ortho() const { return ortho_; }
  const RatMatrix& span_gram() const { return span_gram_; }

  // Coordinates (x,u_i) against the orthonormal basis.
  Eigen::VectorXd pairings(const QuadraticSpace& space, const Eigen::VectorXd& x) const;

 private:
  std::vector<RatVector> span_;
  RatMatrix span_gram_;
  std::vector<Eigen::VectorXd> ortho_;
};

Rational inner(const QuadraticSpace& space, const RatVector& x, const RatVector& y);

// ((x,x)_z, R(x,z))
std::pair<double, double> majorant(const QuadraticSpace& space, const RatVector& x, const NegativePlane& z);
std::pair<double, double> majorant(const QuadraticSpace& space, const Eigen::VectorXd& x, const NegativePlane& z);
std::pair<Rational, Rational> majorant_exact(const QuadraticSpace& space, const RatVector& x,
                                             const NegativePlane& z);

// Gram matrix of the majorant ( , )_z in the ambient basis.
RatMatrix majorant_matrix(const QuadraticSpace& space, const NegativePlane& z);
Eigen::MatrixXd majorant_matrix_real(const QuadraticSpace& space, const NegativePlane& z);

RatVector project_perp(const QuadraticSpace& space, const RatVector& x, const RatVector& c);

Eigen::VectorXd unit_negative(const QuadraticSpace& space, const RatVector& c);

}  // namespace ngtheta
