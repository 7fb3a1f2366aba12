#include "ngtheta/quadratic_space.hpp"

#include <cmath>
#include <string>

namespace ngtheta {

void FloatTolerance::check() const {
  if (!(abs_eps > 0) || !(rel_eps > 0) || !(quadrature_target > 0))
    throw std::invalid_argument("tolerances must be strictly positive");
}

Signature exact_signature(const RatMatrix& gram) {
  if (!gram.is_symmetric()) throw ValidationError("Gram matrix is not symmetric");
  const std::size_t n = gram.size();
  RatMatrix a = gram;
  Signature sig;
  for (std::size_t k = 0; k < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, p) == 0) ++p;
      if (p < n) {
        // symmetric swap of k and p
        for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
        for (std::size_t i = 0; i < n; ++i) std::swap(a(i, k), a(i, p));
      } else {
        p = k + 1;
        while (p < n && a(k, p) == 0) ++p;
        if (p == n) throw ValidationError("Gram matrix is singular");
        // row/col k += row/col p gives a(k,k) = 2 a(k,p)
        for (std::size_t j = 0; j < n; ++j) a(k, j) += a(p, j);
        for (std::size_t i = 0; i < n; ++i) a(i, k) += a(i, p);
      }
    }
    const Rational piv = a(k, k);
    (piv > 0 ? sig.p : sig.q) += 1;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational f = a(i, k) / piv;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
    for (std::size_t i = k + 1; i < n; ++i) a(i, k) = a(k, i) = 0;
  }
  return sig;
}

Eigen::VectorXd to_real(const RatVector& v) {
  Eigen::VectorXd r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[static_cast<Eigen::Index>(i)] = v[i].get_d();
  return r;
}

QuadraticSpace::QuadraticSpace(RatMatrix gram) : gram_(std::move(gram)) {
  if (gram_.size() == 0) throw ValidationError("empty Gram matrix");
  sig_ = exact_signature(gram_);
  const auto n = static_cast<Eigen::Index>(gram_.size());
  gram_real_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      gram_real_(i, j) = gram_(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).get_d();
}

QuadraticSpace::QuadraticSpace(RatMatrix gram, Signature expected) : QuadraticSpace(std::move(gram)) {
  if (!(sig_ == expected))
    throw ValidationError("signature is (" + std::to_string(sig_.p) + "," + std::to_string(sig_.q) +
                          "), expected (" + std::to_string(expected.p) + "," + std::to_string(expected.q) + ")");
}

void QuadraticSpace::check_dim(const RatVector& x) const {
  if (x.size() != dim())
    throw ValidationError("vector of length " + std::to_string(x.size()) + " in a space of dimension " +
                          std::to_string(dim()));
}

Rational QuadraticSpace::inner(const RatVector& x, const RatVector& y) const {
  check_dim(x);
  check_dim(y);
  Rational s = 0;
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (y[j] != 0 && gram_(i, j) != 0) s += x[i] * gram_(i, j) * y[j];
  }
  return s;
}

double QuadraticSpace::inner(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  if (static_cast<std::size_t>(x.size()) != dim() || static_cast<std::size_t>(y.size()) != dim())
    throw ValidationError("vector length does not match the space dimension");
  return x.dot(gram_real_ * y);
}

Rational inner(const QuadraticSpace& space, const RatVector& x, const RatVector& y) { return space.inner(x, y); }

NegativePlane::NegativePlane(const QuadraticSpace& space, std::vector<RatVector> span, double abs_eps)
    : span_(std::move(span)) {
  const std::size_t q = span_.size();
  if (q == 0) throw DegeneratePlaneError("empty span");
  for (const auto& s : span_) space.check_dim(s);
  span_gram_ = RatMatrix(q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j) span_gram_(i, j) = space.inner(span_[i], span_[j]);
  // -Gram must be positive definite: leading minors of -Gram positive.
  for (std::size_t k = 1; k <= q; ++k) {
    RatMatrix minor(k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) minor(i, j) = -span_gram_(i, j);
    if (minor.determinant() <= 0)
      throw DegeneratePlaneError("span is not negative definite (leading minor " + std::to_string(k) + ")");
  }
  // modified Gram-Schmidt for b(x,y) = -(x,y)
  const auto b = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) { return -space.inner(x, y); };
  for (std::size_t k = 0; k < q; ++k) {
    Eigen::VectorXd v = to_real(span_[k]);
    const double scale = b(v, v);
    for (const auto& u : ortho_) v -= b(v, u) * u;
    const double nrm = b(v, v);
    if (!(nrm > abs_eps * scale)) throw DegeneratePlaneError("span is numerically degenerate");
    ortho_.push_back(v / std::sqrt(nrm));
  }
}

Eigen::VectorXd NegativePlane::pairings(const QuadraticSpace& space, const Eigen::VectorXd& x) const {
  Eigen::VectorXd t(static_cast<Eigen::Index>(ortho_.size()));
  for (std::size_t i = 0; i < ortho_.size(); ++i) t[static_cast<Eigen::Index>(i)] = space.inner(x, ortho_[i]);
  return t;
}

std::pair<double, double> majorant(const QuadraticSpace& space, const Eigen::VectorXd& x, const NegativePlane& z) {
  const double r = z.pairings(space, x).squaredNorm();
  return {space.inner(x, x) + 2 * r, r};
}

std::pair<double, double> majorant(const QuadraticSpace& space, const RatVector& x, const NegativePlane& z) {
  auto [v, r] = majorant_exact(space, x, z);
  return {v.get_d(), r.get_d()};
}

std::pair<Rational, Rational> majorant_exact(const QuadraticSpace& space, const RatVector& x,
                                             const NegativePlane& z) {
  const std::size_t q = z.rank();
  RatVector rhs(q);
  for (std::size_t i = 0; i < q; ++i) rhs[i] = space.inner(z.span()[i], x);
  const RatVector a = z.span_gram().inverse() * rhs;
  Rational pp = 0;  // (pr x, pr x) = rhs . a
  for (std::size_t i = 0; i < q; ++i) pp += rhs[i] * a[i];
  const Rational r = -pp;
  return {space.norm(x) + 2 * r, r};
}

RatMatrix majorant_matrix(const QuadraticSpace& space, const NegativePlane& z) {
  const std::size_t m = space.dim();
  const std::size_t q = z.rank();
  const RatMatrix ginv = z.span_gram().inverse();
  std::vector<RatVector> gs(q);  // G s_k
  for (std::size_t k = 0; k < q; ++k) gs[k] = space.gram() * z.span()[k];
  RatMatrix mm = space.gram();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      Rational s = 0;
      for (std::size_t k = 0; k < q; ++k)
        for (std::size_t l = 0; l < q; ++l) s += gs[k][i] * ginv(k, l) * gs[l][j];
      mm(i, j) -= 2 * s;
    }
  return mm;
}

Eigen::MatrixXd majorant_matrix_real(const QuadraticSpace& space, const NegativePlane& z) {
  Eigen::MatrixXd mm = space.gram_real();
  for (const auto& u : z.ortho()) {
    const Eigen::VectorXd gu = space.gram_real() * u;
    mm += 2 * gu * gu.transpose();
  }
  return mm;
}

RatVector project_perp(const QuadraticSpace& space, const RatVector& x, const RatVector& c) {
  const Rational cc = space.norm(c);
  if (cc == 0) throw ValidationError("projection axis is null");
  return x - (space.inner(x, c) / cc) * c;
}

Eigen::VectorXd unit_negative(const QuadraticSpace& space, const RatVector& c) {
  const Rational cc = space.norm(c);
  if (cc >= 0) throw ValidationError("vector is not negative");
  return to_real(c) / std::sqrt(-cc.get_d());
}

}  // namespace ngtheta
