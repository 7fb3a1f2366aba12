#include "ngtheta/lattice_theta.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <numbers>
#include <thread>

#include "parallel.hpp"

namespace ngtheta {

namespace {

constexpr double kGuard = 1.2;

bool is_integer(const Rational& r) { return r.get_den() == 1; }

Rational frac(const Rational& r) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return r - Rational(f);
}

bool lex_less(const RatVector& a, const RatVector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::complex<double> e(double t) { return std::polar(1.0, 2 * std::numbers::pi * t); }

// Columns of U span Z^m; U^T M U is LLL-reduced.
std::vector<std::vector<long>> lll(const Eigen::MatrixXd& M) {
  const std::size_t m = M.rows();
  std::vector<std::vector<long>> U(m, std::vector<long>(m, 0));  // U[col][row]
  for (std::size_t i = 0; i < m; ++i) U[i][i] = 1;
  const auto gram = [&](std::size_t a, std::size_t b) {
    double s = 0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) s += U[a][i] * M(i, j) * U[b][j];
    return s;
  };
  Eigen::MatrixXd mu(m, m);
  Eigen::VectorXd bs(m);
  const auto gso = [&] {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        double s = gram(i, j);
        for (std::size_t l = 0; l < j; ++l) s -= mu(i, l) * mu(j, l) * bs(l);
        mu(i, j) = s / bs(j);
      }
      double s = gram(i, i);
      for (std::size_t l = 0; l < i; ++l) s -= mu(i, l) * mu(i, l) * bs(l);
      bs(i) = s;
    }
  };
  gso();
  std::size_t k = 1;
  for (int guard = 0; k < m && guard < 10000; ++guard) {
    for (std::size_t j = k; j-- > 0;) {
      const long r = std::lround(mu(k, j));
      if (r != 0) {
        for (std::size_t i = 0; i < m; ++i) U[k][i] -= r * U[j][i];
        gso();
      }
    }
    if (bs(k) >= (0.99 - mu(k, k - 1) * mu(k, k - 1)) * bs(k - 1)) {
      ++k;
    } else {
      std::swap(U[k], U[k - 1]);
      gso();
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  return U;
}

struct Point {
  RatVector x;
  Rational q;   // Q(x)
  double norm;  // (x,x)_z0
};

// Fincke-Pohst on the reduced form, exact majorant filter at the end.
std::vector<Point> enumerate_points(const LatticeCoset& coset, const NegativePlane& z0, const Rational& B) {
  const QuadraticSpace& space = *coset.space;
  const std::size_t m = space.dim();
  const RatMatrix Mx = majorant_matrix(space, z0);
  Eigen::MatrixXd Md(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) Md(i, j) = Mx(i, j).get_d();
  const auto U = lll(Md);
  RatMatrix Ur(m);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t r = 0; r < m; ++r) Ur(r, c) = Rational(U[c][r]);
  const RatMatrix Mr = Ur.transpose() * Mx * Ur;
  Eigen::MatrixXd Mp(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) Mp(i, j) = Mr(i, j).get_d();
  const RatVector mup_exact = Ur.inverse() * coset.mu;
  Eigen::VectorXd mup(m);
  for (std::size_t i = 0; i < m; ++i) mup(i) = mup_exact[i].get_d();
  const Eigen::MatrixXd R = Mp.llt().matrixU();
  const double Bd = B.get_d();
  const double Bslack = Bd * (1 + 1e-9) + 1e-9;

  std::vector<Point> out;
  std::vector<long> k(m, 0);
  Eigen::VectorXd y(m);
  const auto leaf = [&] {
    RatVector x = coset.mu;
    for (std::size_t r = 0; r < m; ++r) {
      long n = 0;
      for (std::size_t c = 0; c < m; ++c) n += U[c][r] * k[c];
      x[r] += n;
    }
    const RatVector mx = Mx * x;
    Rational norm = 0;
    for (std::size_t r = 0; r < m; ++r) norm += x[r] * mx[r];
    if (norm > B) return;
    out.push_back({x, space.Q(x), norm.get_d()});
  };
  const auto recurse = [&](auto&& self, std::size_t i, double partial) -> void {
    double s = 0;
    for (std::size_t j = i + 1; j < m; ++j) s += R(i, j) * y(j);
    const double c = -s / R(i, i);
    const double room = Bslack - partial;
    if (room < 0) return;
    const double h = std::sqrt(room) / R(i, i);
    const long lo = static_cast<long>(std::ceil(c - h - mup(i) - 1e-9));
    const long hi = static_cast<long>(std::floor(c + h - mup(i) + 1e-9));
    for (long t = lo; t <= hi; ++t) {
      k[i] = t;
      y(i) = mup(i) + t;
      const double d = R(i, i) * y(i) + s;
      if (i == 0)
        leaf();
      else
        self(self, i - 1, partial + d * d);
    }
  };
  recurse(recurse, m - 1, 0.0);
  std::sort(out.begin(), out.end(), [](const Point& a, const Point& b) {
    if (a.q != b.q) return a.q < b.q;
    return lex_less(a.x, b.x);
  });
  return out;
}

double window_kappa(const QuadraticSpace& space, const NegativePlane& z0, const std::vector<NegativePlane>& samples) {
  double kappa = 0;
  for (const auto& z : samples) kappa = std::max(kappa, comparability(space, z0, z));
  return kappa;
}

double tail_estimate(const QuadraticSpace& space, const NegativePlane& z0, const EnumWindow& win, double bound,
                     double v) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(majorant_matrix_real(space, z0));
  const double lmin = es.eigenvalues().minCoeff();
  const double alpha = std::numbers::pi * v / win.kappa;
  double factor = 1;
  for (std::size_t i = 0; i < space.dim(); ++i) factor *= 2 + std::sqrt(2 * std::numbers::pi / (alpha * lmin));
  return bound * std::exp(-alpha * win.B / 2) * factor;
}

void check_nmax(const Rational& nmax) {
  if (nmax <= 0) throw InputError("nmax must be positive");
}

}  // namespace

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NGON_THETA_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

bool is_integral(const RatMatrix& gram) {
  for (std::size_t i = 0; i < gram.size(); ++i)
    for (std::size_t j = 0; j < gram.size(); ++j)
      if (!is_integer(gram(i, j))) return false;
  return true;
}

bool is_even(const RatMatrix& gram) {
  if (!is_integral(gram)) return false;
  for (std::size_t i = 0; i < gram.size(); ++i)
    if (gram(i, i).get_num() % 2 != 0) return false;
  return true;
}

LatticeCoset make_coset(std::shared_ptr<const QuadraticSpace> space, RatVector mu) {
  if (mu.empty()) mu.assign(space->dim(), Rational(0));
  space->check_dim(mu);
  if (!is_integral(space->gram())) throw InputError("lattice Gram matrix must be integral");
  for (const auto& g : space->gram() * mu)
    if (!is_integer(g)) throw InputError("shift " + to_string(mu) + " is not in the dual lattice");
  for (auto& c : mu) c = frac(c);
  return {std::move(space), std::move(mu)};
}

LatticeCoset make_coset(const QuadraticSpace& space, RatVector mu) {
  return make_coset(std::make_shared<const QuadraticSpace>(space), std::move(mu));
}

std::vector<RatVector> discriminant_group(const QuadraticSpace& space) {
  if (!is_integral(space.gram())) throw InputError("lattice Gram matrix must be integral");
  const std::size_t m = space.dim();
  const RatMatrix ginv = space.gram().inverse();
  std::vector<RatVector> gens;
  for (std::size_t i = 0; i < m; ++i) {
    RatVector g(m);
    for (std::size_t r = 0; r < m; ++r) g[r] = frac(ginv(r, i));
    if (!is_zero(g)) gens.push_back(g);
  }
  std::vector<RatVector> group{RatVector(m, Rational(0))};
  std::deque<RatVector> queue{group.front()};
  const auto known = [&](const RatVector& v) { return std::find(group.begin(), group.end(), v) != group.end(); };
  while (!queue.empty()) {
    const RatVector cur = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      RatVector n = cur + g;
      for (auto& c : n) c = frac(c);
      if (!known(n)) {
        group.push_back(n);
        queue.push_back(n);
      }
    }
  }
  std::sort(group.begin(), group.end(), lex_less);
  return group;
}

std::vector<RatVector> enumerate(const LatticeCoset& coset, const NegativePlane& z0, const Rational& B) {
  std::vector<RatVector> out;
  for (auto& p : enumerate_points(coset, z0, B)) out.push_back(std::move(p.x));
  return out;
}

double comparability(const QuadraticSpace& space, const NegativePlane& z0, const NegativePlane& z) {
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(majorant_matrix_real(space, z0),
                                                                      majorant_matrix_real(space, z));
  return es.eigenvalues().maxCoeff();
}

NGonKernel::NGonKernel(NGonData ngon, int per_edge, int w_shift)
    : ngon_(std::move(ngon)), per_edge_(per_edge), w_shift_(w_shift) {
  if (per_edge_ < 1) throw InputError("per-edge sample count must be positive");
}

Rational NGonKernel::exact(const RatVector& x, bool* stable) const {
  const KernelValue k = ngon_.epsilon(x);
  if (stable) *stable = k.regular || ngon_.locally_constant(x);
  return Rational(k.eps + w_shift_);
}

double NGonKernel::completion(const RatVector& x, double scale) const {
  return ngon_.completion_kernel(x, scale) + w_shift_;
}

std::vector<NegativePlane> NGonKernel::boundary_planes() const {
  std::vector<NegativePlane> out;
  for (std::size_t j = 1; j <= ngon_.size(); ++j)
    for (int k = 0; k < per_edge_; ++k) out.push_back(ngon_.gamma_sample(j, make_rational(k, per_edge_)));
  return out;
}

EnumWindow choose_window(const ThetaKernel& kernel, const Rational& nmax, double safety) {
  check_nmax(nmax);
  if (!(safety >= 1)) throw InputError("safety factor must be at least 1");
  const auto samples = kernel.boundary_planes();
  const auto candidates = kernel.base_candidates();
  if (candidates.empty()) throw InputError("no base plane candidates");
  std::size_t best = 0;
  double best_kappa = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double k = window_kappa(kernel.space(), candidates[i], samples);
    if (k < best_kappa * (1 - 1e-12)) {
      best_kappa = k;
      best = i;
    }
  }
  EnumWindow w;
  w.z0 = candidates[best].span();
  w.kappa = best_kappa;
  w.safety = safety;
  w.B = best_kappa * safety * 2 * nmax.get_d();
  return w;
}

Rational QExpansion::coeff(const Rational& n) const {
  const auto it = coeffs.find(n);
  return it == coeffs.end() ? Rational(0) : it->second;
}

QExpansion holomorphic_series(const LatticeCoset& coset, const ThetaKernel& kernel, const Rational& nmax,
                              const SeriesOptions& opts) {
  check_nmax(nmax);
  if (coset.space->gram() != kernel.space().gram()) throw InputError("lattice and kernel live in different spaces");
  const unsigned threads = resolve_threads(opts.threads);
  double safety = opts.safety;
  for (int attempt = 0; attempt <= opts.max_retries; ++attempt, safety *= 2) {
    const EnumWindow win = choose_window(kernel, nmax, safety);
    const NegativePlane z0(kernel.space(), win.z0);
    const auto pts = enumerate_points(coset, z0, Rational(win.B * kGuard));
    std::vector<Rational> vals(pts.size());
    std::vector<char> reg(pts.size());
    detail::parallel_for(pts.size(), threads, [&](std::size_t i) {
      if (pts[i].q > nmax) return;
      bool r = true;
      vals[i] = kernel.exact(pts[i].x, &r);
      reg[i] = r;
    });
    bool certified = true;
    for (std::size_t i = 0; i < pts.size() && certified; ++i)
      if (pts[i].q <= nmax && pts[i].norm > win.B / kGuard && vals[i] != 0) certified = false;
    if (!certified) continue;

    QExpansion out;
    out.mu = coset.mu;
    out.nmax = nmax;
    out.normalized = opts.normalized;
    out.window = win;
    out.enumerated = pts.size();
    out.retries = attempt;
    const Rational scale = opts.normalized ? kernel.normalization() : Rational(1);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].q > nmax) continue;
      if (vals[i] != 0) out.coeffs[pts[i].q] += vals[i] * scale;
      if (!reg[i] && pts[i].q > 0) out.nonregular.insert(pts[i].q);
    }
    for (auto it = out.coeffs.begin(); it != out.coeffs.end();) it = it->second == 0 ? out.coeffs.erase(it) : ++it;
    return out;
  }
  throw CertificationError("enumeration window could not be certified after " + std::to_string(opts.max_retries) +
                           " retries; try a safety factor above " + std::to_string(safety));
}

namespace {

struct CosetTerms {
  std::vector<Point> pts;
  EnumWindow win;
};

CosetTerms coset_terms(const LatticeCoset& coset, const ThetaKernel& kernel, const Rational& nmax, double safety) {
  if (coset.space->gram() != kernel.space().gram()) throw InputError("lattice and kernel live in different spaces");
  CosetTerms t;
  t.win = choose_window(kernel, nmax, safety);
  const NegativePlane z0(kernel.space(), t.win.z0);
  t.pts = enumerate_points(coset, z0, Rational(t.win.B));
  return t;
}

std::vector<double> weights(const CosetTerms& t, const ThetaKernel& kernel, double scale, unsigned threads) {
  std::vector<double> w(t.pts.size());
  detail::parallel_for(t.pts.size(), threads, [&](std::size_t i) { w[i] = kernel.completion(t.pts[i].x, scale); });
  return w;
}

double scale_for(double v, const CompletionOptions& opts) {
  return opts.sqrt2_scaling ? std::sqrt(2.0) : std::sqrt(2 * v);
}

std::complex<double> sum_terms(const CosetTerms& t, const std::vector<double>& w, std::complex<double> tau) {
  std::complex<double> s = 0;
  const double u = tau.real(), v = tau.imag();
  for (std::size_t i = 0; i < t.pts.size(); ++i) {
    const double q = t.pts[i].q.get_d();
    if (w[i] == 0) continue;
    // e(Q(x) u) computed from the fractional part to keep the phase accurate.
    const double qu = frac(t.pts[i].q * Rational(u)).get_d();
    s += w[i] * std::exp(-2 * std::numbers::pi * v * q) * e(qu);
  }
  return s;
}

}  // namespace

CompletionValue completion_eval(const LatticeCoset& coset, const ThetaKernel& kernel, std::complex<double> tau,
                                const Rational& nmax, const CompletionOptions& opts) {
  if (!(tau.imag() > 0)) throw InputError("tau must lie in the upper half plane");
  const CosetTerms t = coset_terms(coset, kernel, nmax, opts.safety);
  const auto w = weights(t, kernel, scale_for(tau.imag(), opts), resolve_threads(opts.threads));
  CompletionValue out;
  out.value = sum_terms(t, w, tau);
  out.window = t.win;
  out.terms = t.pts.size();
  out.tail_bound = tail_estimate(kernel.space(), NegativePlane(kernel.space(), t.win.z0), t.win, kernel.bound(),
                                 tau.imag());
  return out;
}

std::map<Rational, double> completion_coefficients(const LatticeCoset& coset, const ThetaKernel& kernel, double v,
                                                   const Rational& nmax, const CompletionOptions& opts) {
  if (!(v > 0)) throw InputError("v must be positive");
  const CosetTerms t = coset_terms(coset, kernel, nmax, opts.safety);
  const auto w = weights(t, kernel, scale_for(v, opts), resolve_threads(opts.threads));
  std::map<Rational, double> out;
  for (std::size_t i = 0; i < t.pts.size(); ++i)
    if (t.pts[i].q <= nmax) out[t.pts[i].q] += w[i];
  return out;
}

WeilRepresentation weil_representation(const QuadraticSpace& space) {
  if (!is_even(space.gram())) throw InputError("Weil representation needs an even lattice");
  WeilRepresentation rep;
  rep.group = discriminant_group(space);
  rep.sig = space.signature();
  const std::size_t n = rep.group.size();
  rep.T = Eigen::MatrixXcd::Zero(n, n);
  rep.S = Eigen::MatrixXcd::Zero(n, n);
  const double sig = rep.sig.p - rep.sig.q;
  const std::complex<double> pre = e(-sig / 8) / std::sqrt(static_cast<double>(n));
  for (std::size_t a = 0; a < n; ++a) {
    rep.T(a, a) = e(frac(space.Q(rep.group[a])).get_d());
    for (std::size_t b = 0; b < n; ++b) rep.S(a, b) = pre * e(-frac(space.inner(rep.group[a], rep.group[b])).get_d());
  }
  return rep;
}

ModularityReport modularity_check(const QuadraticSpace& space, const ThetaKernel& kernel, std::complex<double> tau,
                                  const Rational& nmax, double tolerance, const CompletionOptions& opts) {
  if (!(tau.imag() > 0)) throw InputError("tau must lie in the upper half plane");
  const WeilRepresentation rep = weil_representation(space);
  const std::size_t n = rep.group.size();
  const std::complex<double> tau_s = -1.0 / tau;
  const unsigned threads = resolve_threads(opts.threads);
  const auto shared = std::make_shared<const QuadraticSpace>(space);

  ModularityReport r;
  r.tolerance = tolerance;
  r.at_tau.resize(n);
  r.at_tau_plus_1.resize(n);
  r.at_minus_inv.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    const CosetTerms t = coset_terms(make_coset(shared, rep.group[a]), kernel, nmax, opts.safety);
    const auto w = weights(t, kernel, scale_for(tau.imag(), opts), threads);
    r.at_tau[a] = sum_terms(t, w, tau);
    r.at_tau_plus_1[a] = sum_terms(t, w, tau + 1.0);
    const auto ws = tau_s.imag() == tau.imag() ? w : weights(t, kernel, scale_for(tau_s.imag(), opts), threads);
    r.at_minus_inv[a] = sum_terms(t, ws, tau_s);
    const NegativePlane z0(kernel.space(), t.win.z0);
    r.tail_bound = std::max({r.tail_bound, tail_estimate(kernel.space(), z0, t.win, kernel.bound(), tau.imag()),
                             tail_estimate(kernel.space(), z0, t.win, kernel.bound(), tau_s.imag())});
  }
  Eigen::VectorXcd th(n), th1(n), ths(n);
  for (std::size_t a = 0; a < n; ++a) {
    th(a) = r.at_tau[a];
    th1(a) = r.at_tau_plus_1[a];
    ths(a) = r.at_minus_inv[a];
  }
  const double m = static_cast<double>(space.dim());
  const std::complex<double> automorphy = std::pow(std::sqrt(tau), m);
  r.t_defect = (th1 - rep.T * th).cwiseAbs().maxCoeff();
  r.s_defect = (ths - automorphy * (rep.S * th)).cwiseAbs().maxCoeff();

  // Consistency of the finite representation itself.
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    RatVector neg = -rep.group[a];
    for (auto& c : neg) c = frac(c);
    const auto it = std::find(rep.group.begin(), rep.group.end(), neg);
    P(a, it - rep.group.begin()) = 1;
  }
  const double sig = rep.sig.p - rep.sig.q;
  const Eigen::MatrixXcd S2 = rep.S * rep.S;
  const Eigen::MatrixXcd ST = rep.S * rep.T;
  r.s_squared_defect = (S2 - e(-sig / 4) * P).cwiseAbs().maxCoeff();
  r.st_cubed_defect = (ST * ST * ST - S2).cwiseAbs().maxCoeff();

  r.t_ok = r.t_defect < 1e-8;
  const double amplification = 1 + std::pow(std::abs(tau), m / 2) * std::sqrt(static_cast<double>(n));
  r.s_ok = r.s_defect <= tolerance + amplification * r.tail_bound;
  return r;
}

}  // namespace ngtheta
