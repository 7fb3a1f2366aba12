#pragma once

#include <complex>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "ngtheta/ngon.hpp"
#include "ngtheta/quadratic_space.hpp"

namespace ngtheta {

// x in mu + L, where L = Z^m carries the Gram matrix of space.
struct LatticeCoset {
  std::shared_ptr<const QuadraticSpace> space;
  RatVector mu;
};

bool is_integral(const RatMatrix& gram);
bool is_even(const RatMatrix& gram);

// Checks that mu lies in the dual lattice and reduces it to [0,1)^m.
LatticeCoset make_coset(std::shared_ptr<const QuadraticSpace> space, RatVector mu);
LatticeCoset make_coset(const QuadraticSpace& space, RatVector mu);

// Representatives of L^dual/L in [0,1)^m, lexicographically sorted, zero first.
std::vector<RatVector> discriminant_group(const QuadraticSpace& space);

// All x in mu + L with (x,x)_z0 <= B, sorted by Q(x) and then lexicographically.
std::vector<RatVector> enumerate(const LatticeCoset& coset, const NegativePlane& z0, const Rational& B);

// Largest generalized eigenvalue of (M_z0, M_z), i.e. max (x,x)_z0 / (x,x)_z.
double comparability(const QuadraticSpace& space, const NegativePlane& z0, const NegativePlane& z);

// Coefficient weight of a theta series together with what the window needs.
class ThetaKernel {
 public:
  virtual ~ThetaKernel() = default;
  virtual const QuadraticSpace& space() const = 0;
  // Exact holomorphic weight. stable is false if the weight is not locally constant at x.
  virtual Rational exact(const RatVector& x, bool* stable) const = 0;
  // Completed weight evaluated at x * scale.
  virtual double completion(const RatVector& x, double scale) const = 0;
  // Planes sampling the cycle; the window compares every candidate base plane against them.
  virtual std::vector<NegativePlane> boundary_planes() const = 0;
  virtual std::vector<NegativePlane> base_candidates() const { return boundary_planes(); }
  // Upper bound for |completion|.
  virtual double bound() const = 0;
  // Factor applied in normalized mode.
  virtual Rational normalization() const { return 1; }
};

class NGonKernel : public ThetaKernel {
 public:
  explicit NGonKernel(NGonData ngon, int per_edge = 32, int w_shift = 0);
  const QuadraticSpace& space() const override { return ngon_.space(); }
  Rational exact(const RatVector& x, bool* stable) const override;
  double completion(const RatVector& x, double scale) const override;
  std::vector<NegativePlane> boundary_planes() const override;
  double bound() const override { return 2.0 * ngon_.size() + std::abs(w_shift_); }
  Rational normalization() const override { return make_rational(1, 4); }
  const NGonData& ngon() const { return ngon_; }

 private:
  NGonData ngon_;
  int per_edge_;
  int w_shift_;
};

struct EnumWindow {
  std::vector<RatVector> z0;  // spanning vectors of the base plane
  double B = 0;
  double kappa = 0;
  double safety = 1.5;
};

// Base plane minimizing kappa over the candidates.
EnumWindow choose_window(const ThetaKernel& kernel, const Rational& nmax, double safety);

struct SeriesOptions {
  double safety = 1.5;
  int max_retries = 4;
  bool normalized = false;
  unsigned threads = 0;  // 0: NGON_THETA_THREADS or hardware concurrency
};

struct QExpansion {
  RatVector mu;
  Rational nmax;
  bool normalized = false;
  std::map<Rational, Rational> coeffs;  // nonzero coefficients only
  std::set<Rational> nonregular;       // levels with a vector where the weight jumps
  EnumWindow window;
  std::size_t enumerated = 0;
  int retries = 0;
  Rational coeff(const Rational& n) const;
};

QExpansion holomorphic_series(const LatticeCoset& coset, const ThetaKernel& kernel, const Rational& nmax,
                              const SeriesOptions& opts = {});

struct CompletionOptions {
  bool sqrt2_scaling = false;  // scale x by sqrt2 instead of sqrt(2v)
  double safety = 1.5;
  unsigned threads = 0;
};

struct CompletionValue {
  std::complex<double> value;
  double tail_bound = 0;
  EnumWindow window;
  std::size_t terms = 0;
};

CompletionValue completion_eval(const LatticeCoset& coset, const ThetaKernel& kernel, std::complex<double> tau,
                                const Rational& nmax, const CompletionOptions& opts = {});

// Sum of the completed weights over x in the window with Q(x) = n, for every n <= nmax.
std::map<Rational, double> completion_coefficients(const LatticeCoset& coset, const ThetaKernel& kernel, double v,
                                                   const Rational& nmax, const CompletionOptions& opts = {});

// Finite Weil representation of an even lattice.
struct WeilRepresentation {
  std::vector<RatVector> group;
  Eigen::MatrixXcd T;
  Eigen::MatrixXcd S;  // without the automorphy factor
  Signature sig;
};
WeilRepresentation weil_representation(const QuadraticSpace& space);

struct ModularityReport {
  std::vector<std::complex<double>> at_tau, at_tau_plus_1, at_minus_inv;
  double t_defect = 0;
  double s_defect = 0;
  double tail_bound = 0;
  double s_squared_defect = 0;  // S^2 against e(-sig/4) times mu -> -mu
  double st_cubed_defect = 0;   // (ST)^3 against S^2
  double tolerance = 0;
  bool t_ok = false;
  bool s_ok = false;
};

ModularityReport modularity_check(const QuadraticSpace& space, const ThetaKernel& kernel, std::complex<double> tau,
                                  const Rational& nmax, double tolerance = 1e-3, const CompletionOptions& opts = {});

unsigned resolve_threads(unsigned requested);

}  // namespace ngtheta
