#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ngtheta/lattice_theta.hpp"
#include "ngtheta/ngon.hpp"

// Geodesic dodecahedra in signature (m-3,3). Faces carry labels in Z/12 with the involution
// a -> bar(a) = -(a+1) exchanging antipodal faces.
namespace ngtheta::dodec {

constexpr int bar(int a) { return ((-(a + 1)) % 12 + 12) % 12; }

using Cycle = std::array<int, 5>;
using Triple = std::array<int, 3>;

struct Combinatorics {
  std::array<Cycle, 12> cycles;  // F(i): adjacent faces, clockwise about the outward normal
  std::vector<Triple> vertices;  // [i,u,v] rotated to start with the smallest label
};

// The fixed face-cycle table, checked at first use.
const Combinatorics& cycle_table();

// F(j) from F(i) = (a, j, b, u, v): (b, i, a, bar u, bar v). F(i) is rotated to put j second.
Cycle recipe(const Cycle& fi, int i, int j);

// All twelve cycles generated by the recipe starting from the top cycle (1,2,3,4,5).
std::array<Cycle, 12> regenerate(const Cycle& top = {1, 2, 3, 4, 5});

bool same_cycle(const Cycle& a, const Cycle& b);

// Vertices [i,u,v] for consecutive (u,v) in every F(i), with duplicates merged.
std::vector<Triple> vertices_of(const std::array<Cycle, 12>& cycles);

std::string label(int a);  // "3" or "bar 2"

struct DodecViolation {
  int face = 0;
  ConditionViolation violation;
  std::string describe() const;
};

struct DodecError : ValidationError {
  explicit DodecError(DodecViolation v);
  DodecViolation violation;
};

// Violations of the 5-gon conditions on the projected tuples R(i), face by face.
std::vector<DodecViolation> dodec_violations(const QuadraticSpace& space, const std::vector<RatVector>& cs);

class DodecData {
 public:
  // seed_plane, if given, spans the negative 3-plane used as the enumeration base.
  static DodecData validate(const QuadraticSpace& space, std::vector<RatVector> cs,
                            std::optional<std::vector<RatVector>> seed_plane = std::nullopt);

  const QuadraticSpace& space() const { return *space_; }
  const std::vector<RatVector>& cs() const { return cs_; }
  const RatVector& C(int a) const { return cs_[static_cast<std::size_t>((a % 12 + 12) % 12)]; }
  const std::optional<std::vector<RatVector>>& seed_plane() const { return seed_plane_; }

  // P_i C_j for j in F(i).
  std::vector<RatVector> face_tuple(int i) const;
  int face_w(int i) const { return face_w_[static_cast<std::size_t>(i)]; }
  // w(R(i)) with a caller-chosen negative vector of C_i^perp.
  int face_w(int i, const RatVector& v) const;
  RatVector face_negative_vector(int i) const;

  RatVector default_negative_vector() const;
  // D(x) = -1/8 sum_vertices sgn(x;nu) - 1/8 sum_i w(R(i)) sgn(x,C_i)
  Rational D(const RatVector& x) const;
  Rational D_v() const { return d_v_; }
  // P(x) = D(x) - D(v)
  Rational P(const RatVector& x) const { return D(x) - d_v_; }
  bool regular(const RatVector& x) const;
  bool locally_constant(const RatVector& x) const;

  // 1/8 sum E3(nu; y) + 1/8 sum w(R(i)) E1(C_i; y). The theta kernel uses y = x sqrt(2v).
  double E(const Eigen::VectorXd& y) const;
  // E(scale x) - D(v), evaluated as P(x) plus the small corrections.
  double completion(const RatVector& x, double scale) const;

  NegativePlane vertex_plane(const Triple& t) const;
  // [C_i, C_j, (s-1) C_a + s C_b] for F(i) = (a, j, b, ...) rotated.
  NegativePlane edge_sample(int i, int j, const Rational& s) const;
  // True when the 20 vertex planes are pairwise distinct (exact).
  bool distinct_vertices() const;

 private:
  DodecData() = default;
  std::shared_ptr<const QuadraticSpace> space_;
  std::vector<RatVector> cs_;
  std::optional<std::vector<RatVector>> seed_plane_;
  std::array<int, 12> face_w_{};
  Rational d_v_;
  std::vector<std::shared_ptr<const SignCone>> vertex_cones_;
  std::vector<Eigen::VectorXd> units_;
};

// 12 outward face normals of a regular dodecahedron with the golden ratio replaced by phi,
// as coordinates in an orthonormal frame, numbered by the cycle table.
std::vector<std::array<Rational, 3>> seed_normals(const Rational& phi);

inline Rational default_phi() { return make_rational(809, 500); }

// C_j = c_j + t_j v0 with c_j the normals placed in the frame spanning z0. The frame must be
// pairwise orthogonal with equal negative norms; v0 must be positive and orthogonal to it.
std::vector<RatVector> seed_construction(const QuadraticSpace& space, const std::vector<RatVector>& frame,
                                         const RatVector& v0, const std::vector<Rational>& t,
                                         const Rational& phi = default_phi());

class DodecKernel : public ThetaKernel {
 public:
  explicit DodecKernel(DodecData dodec, int per_edge = 8);
  const QuadraticSpace& space() const override { return dodec_.space(); }
  Rational exact(const RatVector& x, bool* stable) const override;
  double completion(const RatVector& x, double scale) const override;
  std::vector<NegativePlane> boundary_planes() const override;
  std::vector<NegativePlane> base_candidates() const override;
  double bound() const override;
  const DodecData& dodec() const { return dodec_; }

 private:
  DodecData dodec_;
  int per_edge_;
};

QExpansion dodec_series(const LatticeCoset& coset, const DodecData& dodec, const Rational& nmax,
                        const SeriesOptions& opts = {});

}  // namespace ngtheta::dodec
