#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace ngtheta {

using Rational = mpq_class;
using RatVector = std::vector<Rational>;

inline Rational make_rational(long p, long q = 1) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

// Parses "p/q", "p" or a finite decimal such as "-0.125". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

// Canonical text form: "p/q" in lowest terms, or "p" when q = 1.
std::string to_string(const Rational& r);

inline int sign(const Rational& r) { return sgn(r); }

inline double to_double(const Rational& r) { return r.get_d(); }

RatVector parse_rational_list(std::string_view csv);

std::string to_string(const RatVector& v);

RatVector operator+(const RatVector& a, const RatVector& b);
RatVector operator-(const RatVector& a, const RatVector& b);
RatVector operator-(const RatVector& a);
RatVector operator*(const Rational& s, const RatVector& a);

bool is_zero(const RatVector& v);

// Dense square matrix of rationals, row-major.
class RatMatrix {
 public:
  RatMatrix() = default;
  explicit RatMatrix(std::size_t n) : n_(n), data_(n * n) {}
  RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static RatMatrix identity(std::size_t n);
  static RatMatrix from_rows(const std::vector<RatVector>& rows);

  std::size_t size() const { return n_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  RatVector operator*(const RatVector& v) const;
  RatMatrix operator*(const RatMatrix& o) const;
  RatMatrix transpose() const;
  bool is_symmetric() const;
  bool operator==(const RatMatrix& o) const { return n_ == o.n_ && data_ == o.data_; }

  Rational determinant() const;
  // Throws std::domain_error when singular.
  RatMatrix inverse() const;

 private:
  std::size_t n_ = 0;
  std::vector<Rational> data_;
};

}  // namespace ngtheta
