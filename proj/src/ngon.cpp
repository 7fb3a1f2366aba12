#include "ngtheta/ngon.hpp"

#include <cmath>

namespace ngtheta {

namespace {

RatVector signed_next(const std::vector<RatVector>& cs, std::size_t j, Closure closure) {
  const std::size_t n = cs.size();
  if (j < n) return cs[j];
  return closure == Closure::flipped ? -cs[0] : cs[0];
}

RatVector signed_prev(const std::vector<RatVector>& cs, std::size_t j, Closure closure) {
  const std::size_t n = cs.size();
  if (j > 1) return cs[j - 2];
  return closure == Closure::flipped ? -cs[n - 1] : cs[n - 1];
}

int sgn_pair(const QuadraticSpace& space, const RatVector& x, const RatVector& c) {
  return sign(space.inner(x, c));
}

}  // namespace

std::string ConditionViolation::describe() const {
  static const char* text[] = {"", "(C_j,C_j) < 0", "(C_j,C_j)(C_j+1,C_j+1) - (C_j,C_j+1)^2 > 0",
                               "(C_j,C_j)(C_j-1,C_j+1) - (C_j,C_j-1)(C_j,C_j+1) < 0"};
  return "condition " + std::to_string(condition) + " [" + text[condition] + "] fails at j=" + std::to_string(j) +
         " (value " + to_string(value) + ")";
}

NGonError::NGonError(ConditionViolation v) : ValidationError(v.describe()), violation(std::move(v)) {}

std::vector<ConditionViolation> ngon_violations(const QuadraticSpace& space, const std::vector<RatVector>& cs,
                                                Closure closure) {
  if (cs.size() < 3) throw ValidationError("an N-gon needs at least 3 vectors");
  for (const auto& c : cs) space.check_dim(c);
  std::vector<ConditionViolation> out;
  for (std::size_t j = 1; j <= cs.size(); ++j) {
    const RatVector& c = cs[j - 1];
    const RatVector n = signed_next(cs, j, closure);
    const RatVector p = signed_prev(cs, j, closure);
    const Rational cc = space.norm(c);
    if (!(cc < 0)) out.push_back({j, 1, cc});
    const Rational cn = space.inner(c, n);
    const Rational g = cc * space.norm(n) - cn * cn;
    if (!(g > 0)) out.push_back({j, 2, g});
    const Rational t = cc * space.inner(p, n) - space.inner(c, p) * cn;
    if (!(t < 0)) out.push_back({j, 3, t});
  }
  return out;
}

NGonData NGonData::validate(const QuadraticSpace& space, std::vector<RatVector> cs, Closure closure) {
  if (space.signature().q != 2) throw ValidationError("N-gons live in a space with two negative directions");
  const auto violations = ngon_violations(space, cs, closure);
  if (!violations.empty()) throw NGonError(violations.front());
  NGonData d;
  d.space_ = std::make_shared<const QuadraticSpace>(space);
  d.cs_ = std::move(cs);
  d.closure_ = closure;
  d.w_ = d.w(d.default_negative_vector());
  for (std::size_t j = 1; j <= d.size(); ++j)
    d.cones_.push_back(std::make_shared<const SignCone>(space, std::vector<RatVector>{d.C(j), d.next(j)}));
  for (const auto& c : d.cs_) d.units_.push_back(unit_negative(space, c));
  return d;
}

const RatVector& NGonData::C(std::size_t j) const { return cs_[(j - 1) % cs_.size()]; }

RatVector NGonData::next(std::size_t j) const { return signed_next(cs_, (j - 1) % cs_.size() + 1, closure_); }

RatVector NGonData::prev(std::size_t j) const { return signed_prev(cs_, (j - 1) % cs_.size() + 1, closure_); }

RatVector NGonData::default_negative_vector() const {
  const auto ok = [&](const RatVector& v) {
    for (const auto& c : cs_)
      if (space_->inner(v, c) == 0) return false;
    return space_->norm(v) < 0;
  };
  if (ok(cs_[0])) return cs_[0];
  for (long k = 2;; ++k) {
    RatVector v = cs_[0] + make_rational(1, k) * cs_[1];
    if (ok(v)) return v;
  }
}

int NGonData::w(const RatVector& v) const {
  if (!(space_->norm(v) < 0)) throw ValidationError("w needs a negative vector");
  int s = 0;
  for (std::size_t j = 1; j <= size(); ++j) s += sgn_pair(*space_, v, C(j)) * sgn_pair(*space_, v, next(j));
  return -s;
}

KernelValue NGonData::epsilon(const RatVector& x) const {
  space_->check_dim(x);
  std::vector<int> s(size());
  bool regular = true;
  for (std::size_t j = 0; j < size(); ++j) {
    s[j] = sgn_pair(*space_, x, cs_[j]);
    regular = regular && s[j] != 0;
  }
  int eps = w_;
  for (std::size_t j = 0; j + 1 < size(); ++j) eps += s[j] * s[j + 1];
  eps += (closure_ == Closure::flipped ? -1 : 1) * s.back() * s.front();
  return {eps, regular};
}

bool NGonData::locally_constant(const RatVector& x) const {
  std::vector<int> s(size());
  std::vector<std::size_t> zeros;
  for (std::size_t j = 0; j < size(); ++j) {
    s[j] = sgn_pair(*space_, x, cs_[j]);
    if (s[j] == 0) zeros.push_back(j);
  }
  if (zeros.empty()) return true;
  if (zeros.size() > 20) return false;
  // Every sign pattern on the vanishing pairings is tried; patterns that no nearby point realizes
  // can only make the answer more conservative.
  std::optional<int> first;
  for (unsigned long mask = 0; mask < (1ul << zeros.size()); ++mask) {
    for (std::size_t k = 0; k < zeros.size(); ++k) s[zeros[k]] = (mask >> k) & 1 ? 1 : -1;
    int eps = 0;
    for (std::size_t j = 0; j + 1 < size(); ++j) eps += s[j] * s[j + 1];
    eps += (closure_ == Closure::flipped ? -1 : 1) * s.back() * s.front();
    if (!first) first = eps;
    if (*first != eps) return false;
  }
  return true;
}

NegativePlane NGonData::vertex_plane(std::size_t j) const {
  if (j < 1 || j > size()) throw std::out_of_range("vertex index out of range");
  return NegativePlane(*space_, {C(j), next(j)});
}

NegativePlane NGonData::gamma_sample(std::size_t j, const Rational& s) const {
  if (j < 1 || j > size()) throw std::out_of_range("edge index out of range");
  if (s < 0 || s > 1) throw std::out_of_range("curve parameter must lie in [0,1]");
  return NegativePlane(*space_, {C(j), (s - 1) * prev(j) + s * next(j)});
}

double NGonData::completion_kernel(const RatVector& x, double scale) const {
  const KernelValue k = epsilon(x);
  const std::size_t n = size();
  const Eigen::VectorXd xr = to_real(x) * scale;
  std::vector<int> s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = sgn_pair(*space_, x, cs_[j]);
  // E2 - s1 s2 = s2 (E1(c1) - s1) + s1 (E1(c2) - s2) + joint deviation
  std::vector<int> coef(n, 0);
  double total = k.eps;
  for (std::size_t j = 0; j < n; ++j) {
    const bool closing = j + 1 == n;
    const int a = s[j];
    const int b = closing && closure_ == Closure::flipped ? -s[0] : s[(j + 1) % n];
    coef[j] += b;
    coef[(j + 1) % n] += closing && closure_ == Closure::flipped ? -a : a;
    total += cones_[j]->joint_deviation(xr, {a, b});
  }
  for (std::size_t j = 0; j < n; ++j)
    if (coef[j] != 0 && s[j] != 0) total += coef[j] * erf_minus_sign(space_->inner(xr, units_[j]), s[j]);
  return total;
}

double NGonData::completion_kernel(const Eigen::VectorXd& x) const {
  double total = w_;
  for (const auto& cone : cones_) total += cone->value(x);
  return total;
}

double NGonData::j0_value(const RatVector& x) const {
  if (!epsilon(x).regular) throw ValidationError("x is not regular for this N-gon");
  return j0_value(to_real(x));
}

double NGonData::j0_value(const Eigen::VectorXd& x) const {
  std::vector<int> s(size());
  for (std::size_t j = 0; j < size(); ++j) {
    const double p = space_->inner(x, to_real(cs_[j]));
    if (p == 0) throw ValidationError("x is not regular for this N-gon");
    s[j] = (p > 0) - (p < 0);
  }
  const Eigen::VectorXd xs = x * std::sqrt(2.0);
  double total = 0;
  for (std::size_t j = 1; j <= size(); ++j) {
    int sn = s[j % size()];
    if (j == size() && closure_ == Closure::flipped) sn = -sn;
    total += cones_[j - 1]->deviation(xs, {s[j - 1], sn});
  }
  return total / 4;
}

NGonData NGonData::rotated(std::size_t k) const {
  if (closure_ != Closure::legal) throw ValidationError("only legal N-gons can be relabelled cyclically");
  std::vector<RatVector> r(size());
  for (std::size_t j = 0; j < size(); ++j) r[j] = cs_[(j + k) % size()];
  return validate(*space_, std::move(r), closure_);
}

std::vector<RatVector> abmp_to_ours(const std::vector<RatVector>& cs_abmp) {
  if (cs_abmp.size() % 2) throw ValidationError("the alternating convention needs an even number of vectors");
  std::vector<RatVector> out(cs_abmp.size());
  for (std::size_t j = 0; j < cs_abmp.size(); ++j) out[j] = ((j / 2) % 2) ? -cs_abmp[j] : cs_abmp[j];
  return out;
}

std::vector<RatVector> ours_to_abmp(const std::vector<RatVector>& cs) { return abmp_to_ours(cs); }

std::vector<ConditionViolation> abmp_violations(const QuadraticSpace& space, const std::vector<RatVector>& cs_abmp) {
  if (cs_abmp.size() < 3) throw ValidationError("an N-gon needs at least 3 vectors");
  const std::size_t n = cs_abmp.size();
  std::vector<ConditionViolation> out;
  for (std::size_t j = 1; j <= n; ++j) {
    const RatVector& c = cs_abmp[j - 1];
    const RatVector& nx = cs_abmp[j % n];
    const RatVector& pv = cs_abmp[(j + n - 2) % n];
    const Rational cc = space.norm(c);
    if (!(cc < 0)) out.push_back({j, 1, cc});
    const Rational cn = space.inner(c, nx);
    const Rational g = cc * space.norm(nx) - cn * cn;
    if (!(g > 0)) out.push_back({j, 2, g});
    const Rational t = cc * space.inner(pv, nx) - space.inner(c, pv) * cn;
    if (!(t > 0)) out.push_back({j, 3, t});
  }
  return out;
}

NGonData from_abmp(const QuadraticSpace& space, const std::vector<RatVector>& cs_abmp) {
  if (cs_abmp.size() % 2) throw ValidationError("the alternating convention needs an even number of vectors");
  const auto v = abmp_violations(space, cs_abmp);
  if (!v.empty()) throw NGonError(v.front());
  const Closure closure = cs_abmp.size() % 4 == 0 ? Closure::legal : Closure::flipped;
  return NGonData::validate(space, abmp_to_ours(cs_abmp), closure);
}

int abmp_w(const QuadraticSpace& space, const std::vector<RatVector>& cs_abmp, const RatVector& v) {
  if (!(space.norm(v) < 0)) throw ValidationError("w needs a negative vector");
  const std::size_t n = cs_abmp.size();
  int s = 0;
  for (std::size_t j = 0; j < n; ++j)
    s += (j % 2 ? -1 : 1) * sgn_pair(space, v, cs_abmp[j]) * sgn_pair(space, v, cs_abmp[(j + 1) % n]);
  return -s;
}

int abmp_kernel(const QuadraticSpace& space, const std::vector<RatVector>& cs_abmp, const RatVector& x,
                const RatVector& v) {
  const std::size_t n = cs_abmp.size();
  int s = abmp_w(space, cs_abmp, v);
  for (std::size_t j = 0; j < n; ++j)
    s += (j % 2 ? -1 : 1) * sgn_pair(space, x, cs_abmp[j]) * sgn_pair(space, x, cs_abmp[(j + 1) % n]);
  return s;
}

}  // namespace ngtheta
