#include "ngtheta/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace ngtheta {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  if (!all_digits(body)) throw std::invalid_argument("not a rational: '" + std::string(whole) + "'");
  std::string str(s.front() == '+' ? s.substr(1) : s);
  return mpz_class(str, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    mpz_class p = parse_integer(trim(s.substr(0, slash)), text);
    std::string_view den = trim(s.substr(slash + 1));
    if (!all_digits(den)) throw std::invalid_argument("bad denominator in '" + std::string(text) + "'");
    mpz_class q(std::string(den), 10);
    if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational r(p, q);
    r.canonicalize();
    return r;
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = s.substr(dot + 1);
    bool neg = !ip.empty() && ip.front() == '-';
    std::string_view ip_body = (!ip.empty() && (ip.front() == '-' || ip.front() == '+')) ? ip.substr(1) : ip;
    if ((!ip_body.empty() && !all_digits(ip_body)) || (!fp.empty() && !all_digits(fp)) ||
        (ip_body.empty() && fp.empty()))
      throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
    std::string digits = std::string(ip_body) + std::string(fp);
    mpz_class num(digits.empty() ? "0" : digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
    Rational r(neg ? mpz_class(-num) : num, den);
    r.canonicalize();
    return r;
  }
  return Rational(parse_integer(s, text));
}

std::string to_string(const Rational& r) { return r.get_str(10); }

RatVector parse_rational_list(std::string_view csv) {
  RatVector out;
  std::string_view s = trim(csv);
  if (!s.empty() && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  while (true) {
    auto comma = s.find(',');
    out.push_back(parse_rational(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

std::string to_string(const RatVector& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += to_string(v[i]);
  }
  return out + "]";
}

RatVector operator+(const RatVector& a, const RatVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector length mismatch");
  RatVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

RatVector operator-(const RatVector& a, const RatVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector length mismatch");
  RatVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

RatVector operator-(const RatVector& a) {
  RatVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

RatVector operator*(const Rational& s, const RatVector& a) {
  RatVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

bool is_zero(const RatVector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

RatMatrix::RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows) : n_(rows.size()), data_() {
  data_.reserve(n_ * n_);
  for (const auto& row : rows) {
    if (row.size() != n_) throw std::invalid_argument("matrix must be square");
    for (const auto& x : row) data_.push_back(x);
  }
}

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::from_rows(const std::vector<RatVector>& rows) {
  RatMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw std::invalid_argument("matrix must be square");
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

RatVector RatMatrix::operator*(const RatVector& v) const {
  if (v.size() != n_) throw std::invalid_argument("matrix/vector size mismatch");
  RatVector r(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < n_; ++j)
      if ((*this)(i, j) != 0) s += (*this)(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
  if (o.n_ != n_) throw std::invalid_argument("matrix size mismatch");
  RatMatrix r(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = 0; k < n_; ++k) {
      if ((*this)(i, k) == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) r(i, j) += (*this)(i, k) * o(k, j);
    }
  return r;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix r(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

bool RatMatrix::is_symmetric() const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

Rational RatMatrix::determinant() const {
  RatMatrix a = *this;
  Rational det = 1;
  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t p = k;
    while (p < n_ && a(p, k) == 0) ++p;
    if (p == n_) return 0;
    if (p != k) {
      for (std::size_t j = 0; j < n_; ++j) std::swap(a(p, j), a(k, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n_; ++i) {
      if (a(i, k) == 0) continue;
      Rational f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n_; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

RatMatrix RatMatrix::inverse() const {
  RatMatrix a = *this;
  RatMatrix inv = identity(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t p = k;
    while (p < n_ && a(p, k) == 0) ++p;
    if (p == n_) throw std::domain_error("singular matrix");
    if (p != k)
      for (std::size_t j = 0; j < n_; ++j) {
        std::swap(a(p, j), a(k, j));
        std::swap(inv(p, j), inv(k, j));
      }
    Rational piv = a(k, k);
    for (std::size_t j = 0; j < n_; ++j) {
      a(k, j) /= piv;
      inv(k, j) /= piv;
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (i == k || a(i, k) == 0) continue;
      Rational f = a(i, k);
      for (std::size_t j = 0; j < n_; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

}  // namespace ngtheta
