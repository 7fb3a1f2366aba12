#include "ngtheta/dodecahedron.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <optional>

namespace ngtheta::dodec {

namespace {

constexpr int B0 = bar(0), B1 = bar(1), B2 = bar(2), B3 = bar(3), B4 = bar(4), B5 = bar(5);

const std::array<Cycle, 12>& table() {
  static const std::array<Cycle, 12> t = [] {
    std::array<Cycle, 12> c{};
    c[0] = {1, 2, 3, 4, 5};
    c[1] = {0, 5, B3, B4, 2};
    c[2] = {0, 1, B4, B5, 3};
    c[3] = {0, 2, B5, B1, 4};
    c[4] = {0, 3, B1, B2, 5};
    c[5] = {0, 4, B2, B3, 1};
    c[B5] = {B0, B1, 3, 2, B4};
    c[B4] = {B0, B5, 2, 1, B3};
    c[B3] = {B0, B4, 1, 5, B2};
    c[B2] = {B0, B3, 5, 4, B1};
    c[B1] = {B0, B2, 4, 3, B5};
    c[B0] = {B5, B4, B3, B2, B1};
    return c;
  }();
  return t;
}

Cycle rotate_to(const Cycle& c, int value, std::size_t pos) {
  const auto it = std::find(c.begin(), c.end(), value);
  if (it == c.end()) throw ValidationError("face " + label(value) + " is not adjacent");
  const auto k = static_cast<std::size_t>(it - c.begin());
  Cycle out{};
  for (std::size_t i = 0; i < 5; ++i) out[(pos + i) % 5] = c[(k + i) % 5];
  return out;
}

Triple canonical(Triple t) {
  while (t[0] != std::min({t[0], t[1], t[2]})) t = {t[1], t[2], t[0]};
  return t;
}

int sgn_pair(const QuadraticSpace& s, const RatVector& x, const RatVector& c) { return sign(s.inner(x, c)); }

std::size_t exact_rank(std::vector<RatVector> rows) {
  if (rows.empty()) return 0;
  const std::size_t m = rows[0].size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][col] == 0) continue;
      const Rational f = rows[r][col] / rows[rank][col];
      for (std::size_t k = col; k < m; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

RatVector project(const QuadraticSpace& s, const RatVector& v, const RatVector& c) { return project_perp(s, v, c); }

// -sum sgn(v,R_l) sgn(v,R_l+1) over the cyclic 5-tuple.
int tuple_w(const QuadraticSpace& s, const std::vector<RatVector>& r, const RatVector& v) {
  int total = 0;
  for (std::size_t l = 0; l < r.size(); ++l) total += sgn_pair(s, v, r[l]) * sgn_pair(s, v, r[(l + 1) % r.size()]);
  return -total;
}

std::array<Rational, 3> scaled(const std::array<long, 6>& pq, const Rational& phi) {
  // (p0 + q0 phi, p1 + q1 phi, p2 + q2 phi)
  return {pq[0] + pq[1] * phi, pq[2] + pq[3] * phi, pq[4] + pq[5] * phi};
}

Rational dot3(const std::array<Rational, 3>& a, const std::array<Rational, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Rational det3(const std::array<Rational, 3>& a, const std::array<Rational, 3>& b, const std::array<Rational, 3>& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
}

}  // namespace

std::string label(int a) {
  a = (a % 12 + 12) % 12;
  return a < 6 ? std::to_string(a) : "bar " + std::to_string(bar(a));
}

Cycle recipe(const Cycle& fi, int i, int j) {
  const Cycle r = rotate_to(fi, j, 1);
  return {r[2], i, r[0], bar(r[3]), bar(r[4])};
}

bool same_cycle(const Cycle& a, const Cycle& b) {
  for (std::size_t k = 0; k < 5; ++k) {
    bool eq = true;
    for (std::size_t i = 0; i < 5 && eq; ++i) eq = a[i] == b[(i + k) % 5];
    if (eq) return true;
  }
  return false;
}

std::array<Cycle, 12> regenerate(const Cycle& top) {
  std::array<std::optional<Cycle>, 12> found;
  found[0] = top;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int i = queue.front();
    queue.pop_front();
    for (int j : *found[static_cast<std::size_t>(i)]) {
      const Cycle c = recipe(*found[static_cast<std::size_t>(i)], i, j);
      auto& slot = found[static_cast<std::size_t>(j)];
      if (!slot) {
        slot = c;
        queue.push_back(j);
      } else if (!same_cycle(*slot, c)) {
        throw ValidationError("recipe is inconsistent at face " + label(j));
      }
    }
  }
  std::array<Cycle, 12> out{};
  for (std::size_t i = 0; i < 12; ++i) {
    if (!found[i]) throw ValidationError("recipe does not reach face " + label(static_cast<int>(i)));
    out[i] = *found[i];
  }
  return out;
}

std::vector<Triple> vertices_of(const std::array<Cycle, 12>& cycles) {
  std::vector<Triple> out;
  for (int i = 0; i < 12; ++i) {
    const Cycle& c = cycles[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < 5; ++k) {
      const Triple t = canonical({i, c[k], c[(k + 1) % 5]});
      if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

const Combinatorics& cycle_table() {
  static const Combinatorics comb = [] {
    Combinatorics c;
    c.cycles = table();
    const auto regen = regenerate(c.cycles[0]);
    for (std::size_t i = 0; i < 12; ++i) {
      if (!same_cycle(regen[i], c.cycles[i])) throw std::logic_error("cycle table does not follow the recipe");
      Cycle rev{};
      for (std::size_t k = 0; k < 5; ++k) rev[k] = bar(c.cycles[i][4 - k]);
      if (!same_cycle(rev, c.cycles[static_cast<std::size_t>(bar(static_cast<int>(i)))]))
        throw std::logic_error("cycle table is not symmetric under the involution");
    }
    c.vertices = vertices_of(c.cycles);
    if (c.vertices.size() != 20) throw std::logic_error("cycle table does not give 20 vertices");
    return c;
  }();
  return comb;
}

std::string DodecViolation::describe() const { return "face " + label(face) + ": " + violation.describe(); }

DodecError::DodecError(DodecViolation v) : ValidationError(v.describe()), violation(std::move(v)) {}

std::vector<DodecViolation> dodec_violations(const QuadraticSpace& space, const std::vector<RatVector>& cs) {
  if (space.signature().q != 3) throw ValidationError("dodecahedra live in a space with three negative directions");
  if (cs.size() != 12) throw InputError("a dodecahedron needs 12 vectors");
  for (const auto& c : cs) space.check_dim(c);
  std::vector<DodecViolation> out;
  for (int i = 0; i < 12; ++i) {
    const RatVector& ci = cs[static_cast<std::size_t>(i)];
    if (!(space.norm(ci) < 0)) {
      out.push_back({i, {0, 1, space.norm(ci)}});
      continue;
    }
    std::vector<RatVector> r;
    for (int j : cycle_table().cycles[static_cast<std::size_t>(i)])
      r.push_back(project(space, cs[static_cast<std::size_t>(j)], ci));
    for (auto& v : ngon_violations(space, r)) out.push_back({i, v});
  }
  return out;
}

DodecData DodecData::validate(const QuadraticSpace& space, std::vector<RatVector> cs,
                              std::optional<std::vector<RatVector>> seed_plane) {
  const auto violations = dodec_violations(space, cs);
  if (!violations.empty()) throw DodecError(violations.front());
  DodecData d;
  d.space_ = std::make_shared<const QuadraticSpace>(space);
  d.cs_ = std::move(cs);
  if (seed_plane) {
    NegativePlane check(space, *seed_plane);
    if (check.rank() != 3) throw ValidationError("seed plane must be a negative 3-plane");
    d.seed_plane_ = std::move(seed_plane);
  }
  for (int i = 0; i < 12; ++i) d.face_w_[static_cast<std::size_t>(i)] = d.face_w(i, d.face_negative_vector(i));
  for (const auto& t : cycle_table().vertices)
    d.vertex_cones_.push_back(std::make_shared<const SignCone>(space, std::vector<RatVector>{d.C(t[0]), d.C(t[1]), d.C(t[2])}));
  for (const auto& c : d.cs_) d.units_.push_back(unit_negative(space, c));
  d.d_v_ = d.D(d.default_negative_vector());
  return d;
}

std::vector<RatVector> DodecData::face_tuple(int i) const {
  std::vector<RatVector> r;
  for (int j : cycle_table().cycles[static_cast<std::size_t>(i)]) r.push_back(project(*space_, C(j), C(i)));
  return r;
}

int DodecData::face_w(int i, const RatVector& v) const {
  if (!(space_->norm(v) < 0)) throw ValidationError("w needs a negative vector");
  if (space_->inner(v, C(i)) != 0) throw ValidationError("w(R(i)) needs a vector orthogonal to C_i");
  return tuple_w(*space_, face_tuple(i), v);
}

RatVector DodecData::face_negative_vector(int i) const {
  const auto r = face_tuple(i);
  const auto ok = [&](const RatVector& v) {
    for (const auto& c : r)
      if (space_->inner(v, c) == 0) return false;
    return space_->norm(v) < 0;
  };
  if (ok(r[0])) return r[0];
  for (long k = 2;; ++k) {
    RatVector v = r[0] + make_rational(1, k) * r[1];
    if (ok(v)) return v;
  }
}

RatVector DodecData::default_negative_vector() const {
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

Rational DodecData::D(const RatVector& x) const {
  space_->check_dim(x);
  std::array<int, 12> s{};
  for (std::size_t i = 0; i < 12; ++i) s[i] = sgn_pair(*space_, x, cs_[i]);
  long total = 0;
  for (const auto& t : cycle_table().vertices)
    total += s[static_cast<std::size_t>(t[0])] * s[static_cast<std::size_t>(t[1])] * s[static_cast<std::size_t>(t[2])];
  for (std::size_t i = 0; i < 12; ++i) total += face_w_[i] * s[i];
  return make_rational(-total, 8);
}

bool DodecData::regular(const RatVector& x) const {
  for (const auto& c : cs_)
    if (space_->inner(x, c) == 0) return false;
  return true;
}

bool DodecData::locally_constant(const RatVector& x) const {
  std::array<int, 12> s{};
  std::vector<std::size_t> zeros;
  for (std::size_t i = 0; i < 12; ++i) {
    s[i] = sgn_pair(*space_, x, cs_[i]);
    if (s[i] == 0) zeros.push_back(i);
  }
  if (zeros.empty()) return true;
  std::optional<long> first;
  for (unsigned mask = 0; mask < (1u << zeros.size()); ++mask) {
    for (std::size_t k = 0; k < zeros.size(); ++k) s[zeros[k]] = (mask >> k) & 1 ? 1 : -1;
    long total = 0;
    for (const auto& t : cycle_table().vertices)
      total += s[static_cast<std::size_t>(t[0])] * s[static_cast<std::size_t>(t[1])] * s[static_cast<std::size_t>(t[2])];
    for (std::size_t i = 0; i < 12; ++i) total += face_w_[i] * s[i];
    if (!first) first = total;
    if (*first != total) return false;
  }
  return true;
}

double DodecData::E(const Eigen::VectorXd& y) const {
  double total = 0;
  for (const auto& cone : vertex_cones_) total += cone->value(y);
  for (std::size_t i = 0; i < 12; ++i)
    total += face_w_[i] * std::erf(std::sqrt(std::numbers::pi) * space_->inner(y, units_[i]));
  return total / 8;
}

double DodecData::completion(const RatVector& x, double scale) const {
  // -E(y) - D(v) = P(x) - [1/8 sum (E3 - sgn) + 1/8 sum w (E1 - sgn)]
  const Eigen::VectorXd y = to_real(x) * scale;
  std::array<int, 12> s{};
  for (std::size_t i = 0; i < 12; ++i) s[i] = sgn_pair(*space_, x, cs_[i]);
  double dev = 0;
  const auto& verts = cycle_table().vertices;
  for (std::size_t k = 0; k < verts.size(); ++k) {
    const auto& t = verts[k];
    const int st = s[static_cast<std::size_t>(t[0])] * s[static_cast<std::size_t>(t[1])] * s[static_cast<std::size_t>(t[2])];
    dev += vertex_cones_[k]->value(y) - st;
  }
  for (std::size_t i = 0; i < 12; ++i)
    if (face_w_[i] != 0) dev += face_w_[i] * erf_minus_sign(space_->inner(y, units_[i]), s[i]);
  return P(x).get_d() - dev / 8;
}

NegativePlane DodecData::vertex_plane(const Triple& t) const { return NegativePlane(*space_, {C(t[0]), C(t[1]), C(t[2])}); }

NegativePlane DodecData::edge_sample(int i, int j, const Rational& s) const {
  if (s < 0 || s > 1) throw std::out_of_range("curve parameter must lie in [0,1]");
  const Cycle r = rotate_to(cycle_table().cycles[static_cast<std::size_t>((i % 12 + 12) % 12)], j, 1);
  return NegativePlane(*space_, {C(i), C(j), (s - 1) * C(r[0]) + s * C(r[2])});
}

bool DodecData::distinct_vertices() const {
  const auto& verts = cycle_table().vertices;
  for (std::size_t a = 0; a < verts.size(); ++a)
    for (std::size_t b = a + 1; b < verts.size(); ++b) {
      std::vector<RatVector> rows;
      for (int k : verts[a]) rows.push_back(C(k));
      for (int k : verts[b]) rows.push_back(C(k));
      if (exact_rank(rows) == 3) return false;
    }
  return true;
}

std::vector<std::array<Rational, 3>> seed_normals(const Rational& phi) {
  if (!(phi > 1) || !(phi < 2)) throw InputError("golden ratio approximation must lie in (1,2)");
  // Face normals (0, +-1, +-phi) and cyclic permutations, stored as (p + q phi) per coordinate.
  std::vector<std::array<Rational, 3>> all;
  for (int s1 : {1, -1})
    for (int s2 : {1, -1}) {
      all.push_back(scaled({0, 0, s1, 0, 0, s2}, phi));
      all.push_back(scaled({s1, 0, 0, s2, 0, 0}, phi));
      all.push_back(scaled({0, s2, 0, 0, s1, 0}, phi));
    }
  std::vector<std::array<Rational, 3>> n(12);
  n[0] = scaled({0, 0, 1, 0, 0, 1}, phi);  // (0, 1, phi)
  const auto adjacent = [&](const std::array<Rational, 3>& a, const std::array<Rational, 3>& b) {
    return dot3(a, b) > 0 && dot3(a, b) < dot3(a, a);
  };
  std::vector<std::array<Rational, 3>> ring;
  for (const auto& v : all)
    if (adjacent(n[0], v)) ring.push_back(v);
  if (ring.size() != 5) throw std::logic_error("golden ratio approximation too coarse");
  n[1] = ring[0];
  // Walk clockwise about the outward normal n[0]: det(n0, a, b) < 0.
  for (int k = 2; k <= 5; ++k) {
    bool found = false;
    for (const auto& v : ring)
      if (adjacent(n[static_cast<std::size_t>(k - 1)], v) && det3(n[0], n[static_cast<std::size_t>(k - 1)], v) < 0) {
        n[static_cast<std::size_t>(k)] = v;
        found = true;
      }
    if (!found) throw std::logic_error("could not order the faces around the top");
  }
  for (int a = 0; a < 6; ++a)
    for (std::size_t c = 0; c < 3; ++c) n[static_cast<std::size_t>(bar(a))][c] = -n[static_cast<std::size_t>(a)][c];
  return n;
}

std::vector<RatVector> seed_construction(const QuadraticSpace& space, const std::vector<RatVector>& frame,
                                         const RatVector& v0, const std::vector<Rational>& t, const Rational& phi) {
  if (frame.size() != 3) throw InputError("the seed frame needs three vectors");
  if (t.size() != 12) throw InputError("the seed perturbation needs 12 parameters");
  for (const auto& u : frame) space.check_dim(u);
  space.check_dim(v0);
  const Rational n0 = space.norm(frame[0]);
  if (!(n0 < 0)) throw ValidationError("seed frame must span a negative 3-plane");
  for (std::size_t a = 0; a < 3; ++a) {
    if (space.norm(frame[a]) != n0) throw ValidationError("seed frame vectors must have equal norms");
    for (std::size_t b = a + 1; b < 3; ++b)
      if (space.inner(frame[a], frame[b]) != 0) throw ValidationError("seed frame must be orthogonal");
    if (space.inner(frame[a], v0) != 0) throw ValidationError("v0 must be orthogonal to the seed plane");
  }
  if (!(space.norm(v0) > 0)) throw ValidationError("v0 must be a positive vector");
  const auto normals = seed_normals(phi);
  std::vector<RatVector> cs;
  for (std::size_t j = 0; j < 12; ++j) {
    RatVector c = t[j] * v0;
    for (std::size_t a = 0; a < 3; ++a) c = c + normals[j][a] * frame[a];
    cs.push_back(std::move(c));
  }
  return cs;
}

DodecKernel::DodecKernel(DodecData dodec, int per_edge) : dodec_(std::move(dodec)), per_edge_(per_edge) {
  if (per_edge_ < 1) throw InputError("per-edge sample count must be positive");
}

Rational DodecKernel::exact(const RatVector& x, bool* stable) const {
  if (stable) *stable = dodec_.locally_constant(x);
  return dodec_.P(x);
}

double DodecKernel::completion(const RatVector& x, double scale) const { return dodec_.completion(x, scale); }

std::vector<NegativePlane> DodecKernel::boundary_planes() const {
  std::vector<NegativePlane> out;
  for (const auto& t : cycle_table().vertices) out.push_back(dodec_.vertex_plane(t));
  for (int i = 0; i < 12; ++i)
    for (int j : cycle_table().cycles[static_cast<std::size_t>(i)]) {
      if (j < i) continue;  // each edge is shared by two faces
      for (int k = 1; k < per_edge_; ++k) out.push_back(dodec_.edge_sample(i, j, make_rational(k, per_edge_)));
    }
  return out;
}

std::vector<NegativePlane> DodecKernel::base_candidates() const {
  if (dodec_.seed_plane()) return {NegativePlane(dodec_.space(), *dodec_.seed_plane())};
  return boundary_planes();
}

double DodecKernel::bound() const {
  double w = 0;
  for (int i = 0; i < 12; ++i) w += std::abs(dodec_.face_w(i));
  return (20 + w) / 8 + std::abs(dodec_.D_v().get_d());
}

QExpansion dodec_series(const LatticeCoset& coset, const DodecData& dodec, const Rational& nmax,
                        const SeriesOptions& opts) {
  return holomorphic_series(coset, DodecKernel(dodec), nmax, opts);
}

}  // namespace ngtheta::dodec
