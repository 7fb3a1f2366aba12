#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ngtheta/error_functions.hpp"
#include "ngtheta/quadratic_space.hpp"

namespace ngtheta {

// How the last vertex plane closes up. A flipped closure uses [-C_N, C_1] as z_N, so the
// inequalities hold for the antiperiodic sequence ..., C_N, -C_1, -C_2, ...
enum class Closure { legal, flipped };

struct ConditionViolation {
  std::size_t j = 0;   // 1-based index
  int condition = 0;   // 1: (C_j,C_j) < 0, 2: Gram of (C_j,C_j+1) positive, 3: turning inequality
  Rational value;      // left-hand side that has the wrong sign
  std::string describe() const;
};

struct NGonError : ValidationError {
  explicit NGonError(ConditionViolation v);
  ConditionViolation violation;
};

struct KernelValue {
  int eps = 0;
  bool regular = false;
};

// Every violated inequality, ordered by j and then by condition.
std::vector<ConditionViolation> ngon_violations(const QuadraticSpace& space, const std::vector<RatVector>& cs,
                                                Closure closure = Closure::legal);

class NGonData {
 public:
  static NGonData validate(const QuadraticSpace& space, std::vector<RatVector> cs, Closure closure = Closure::legal);

  const QuadraticSpace& space() const { return *space_; }
  const std::vector<RatVector>& cs() const { return cs_; }
  std::size_t size() const { return cs_.size(); }
  Closure closure() const { return closure_; }

  // 1-based cyclic access; next(N) is -C_1 for a flipped closure and prev(1) is -C_N.
  const RatVector& C(std::size_t j) const;
  RatVector next(std::size_t j) const;
  RatVector prev(std::size_t j) const;

  RatVector default_negative_vector() const;
  int w() const { return w_; }
  int w(const RatVector& v) const;

  KernelValue epsilon(const RatVector& x) const;
  // False if x lies on a wall across which epsilon jumps.
  bool locally_constant(const RatVector& x) const;

  NegativePlane vertex_plane(std::size_t j) const;
  NegativePlane gamma_sample(std::size_t j, const Rational& s) const;

  // w + sum_j E2(C_j, next(j); scale * x). Evaluated as epsilon plus integer combinations of
  // E1(C_j) - sgn and the far-wedge masses, so the cancellation between neighbouring cones is exact.
  double completion_kernel(const RatVector& x, double scale) const;
  // Same for a real argument; signs are taken in floating point.
  double completion_kernel(const Eigen::VectorXd& x) const;

  // 1/4 sum_j [E2(C_j, next(j); x sqrt2) - sgn sgn]. Throws ValidationError if x is not regular.
  double j0_value(const RatVector& x) const;
  double j0_value(const Eigen::VectorXd& x) const;

  // Cyclic relabelling C_j -> C_{j+k}; only for legal closures.
  NGonData rotated(std::size_t k) const;

 private:
  NGonData() = default;
  std::shared_ptr<const QuadraticSpace> space_;
  std::vector<RatVector> cs_;
  Closure closure_ = Closure::legal;
  int w_ = 0;
  std::vector<std::shared_ptr<const SignCone>> cones_;
  std::vector<Eigen::VectorXd> units_;  // C_j / sqrt(-(C_j,C_j))
};

// Translation from the alternating-sign convention with reversed third inequality.
std::vector<RatVector> abmp_to_ours(const std::vector<RatVector>& cs_abmp);
std::vector<RatVector> ours_to_abmp(const std::vector<RatVector>& cs);

// N even. Returns a legal N-gon when N = 0 mod 4 and a flipped closure when N = 2 mod 4.
NGonData from_abmp(const QuadraticSpace& space, const std::vector<RatVector>& cs_abmp);

// Violations of the alternating-convention inequalities (third one with > 0).
std::vector<ConditionViolation> abmp_violations(const QuadraticSpace& space, const std::vector<RatVector>& cs_abmp);

// w + sum (-1)^(j-1) sgn(x,C'_j) sgn(x,C'_j+1) with w computed in the same convention.
int abmp_w(const QuadraticSpace& space, const std::vector<RatVector>& cs_abmp, const RatVector& v);
int abmp_kernel(const QuadraticSpace& space, const std::vector<RatVector>& cs_abmp, const RatVector& x,
                const RatVector& v);

}  // namespace ngtheta
