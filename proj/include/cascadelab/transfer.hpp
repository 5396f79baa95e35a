#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cascadelab/eigen_qr.hpp"
#include "cascadelab/filter.hpp"
#include "cascadelab/laurent.hpp"

namespace cascadelab {

inline constexpr double kDefaultClusterTol = 1e-7;

inline long floor_div2(long a) { return (a >= 0) ? a / 2 : -((-a + 1) / 2); }
inline long ceil_div2(long a) { return (a >= 0) ? (a + 1) / 2 : -((-a) / 2); }

// Transfer operator in coefficient form:
//   (R x)_k = sum_{j,l} conj(a_j) a_l x_{j-l+2k} = sum_s gamma(s) x_{2k+s}.
// A polynomial supported on [lo, hi] maps into [ceil((lo-N)/2), floor((hi+N)/2)].
inline LaurentPolynomial ruelle_apply(const WaveletFilter& f, const LaurentPolynomial& xi) {
  const long deg = f.degree();
  std::vector<Complex> gamma(static_cast<std::size_t>(2 * deg + 1));
  for (long s = -deg; s <= deg; ++s) gamma[static_cast<std::size_t>(s + deg)] = f.autocorrelation(s);

  const long out_lo = ceil_div2(xi.lo() - deg);
  const long out_hi = floor_div2(xi.hi() + deg);
  if (out_lo > out_hi) return LaurentPolynomial();
  std::vector<Complex> out(static_cast<std::size_t>(out_hi - out_lo + 1), Complex(0.0));
  for (long k = out_lo; k <= out_hi; ++k) {
    Complex acc(0.0);
    for (long s = -deg; s <= deg; ++s) {
      acc += gamma[static_cast<std::size_t>(s + deg)] * xi.coeff(2 * k + s);
    }
    out[static_cast<std::size_t>(k - out_lo)] = acc;
  }
  return LaurentPolynomial(out_lo, std::move(out));
}

// The matrix of ruelle_apply on the span of z^-N .. z^N, a slant-Toeplitz
// matrix with entry(k, n) = gamma(n - 2k).
class RuelleMatrix {
 public:
  explicit RuelleMatrix(const WaveletFilter& f) : bound_(f.degree()), m_(dim(), dim()) {
    if (bound_ < 1) throw std::invalid_argument("RuelleMatrix: filter must have degree >= 1");
    for (long k = -bound_; k <= bound_; ++k) {
      for (long n = -bound_; n <= bound_; ++n) {
        const long s = n - 2 * k;
        if (s < -bound_ || s > bound_) continue;
        entry(k, n) = f.autocorrelation(s);
      }
    }
  }

  long bound() const { return bound_; }
  int dim() const { return static_cast<int>(2 * bound_ + 1); }

  Complex& entry(long k, long n) {
    return m_(static_cast<int>(k + bound_), static_cast<int>(n + bound_));
  }
  const Complex& entry(long k, long n) const {
    return m_(static_cast<int>(k + bound_), static_cast<int>(n + bound_));
  }

  const CMatrix& matrix() const { return m_; }

  // Apply to a coefficient vector x_{-N}..x_N.
  std::vector<Complex> apply(const std::vector<Complex>& coeffs) const { return m_.apply(coeffs); }

  std::vector<Complex> poly_coeffs(const LaurentPolynomial& p) const {
    std::vector<Complex> x(static_cast<std::size_t>(dim()), Complex(0.0));
    for (long k = -bound_; k <= bound_; ++k) x[static_cast<std::size_t>(k + bound_)] = p.coeff(k);
    return x;
  }

 private:
  long bound_;
  CMatrix m_;
};

inline RuelleMatrix ruelle_matrix(const WaveletFilter& f) { return RuelleMatrix(f); }

struct EigenvalueCluster {
  Complex value;
  int multiplicity = 1;
};

struct SpectralReport {
  std::vector<Complex> raw;                     // unclustered, solver order
  std::vector<EigenvalueCluster> eigenvalues;   // clustered, sorted by |value| desc
  std::vector<EigenvalueCluster> peripheral;    // clusters with |value| >= 1 - tol
  bool condition_e = false;
  double gap = 0.0;  // modulus of the largest cluster other than the one at 1
  double cluster_tol = kDefaultClusterTol;
};

// Cluster eigenvalues by single linkage at distance cluster_tol, then decide
// the peripheral-spectrum dichotomy: condition_e holds iff the cluster
// containing 1 is simple and every other cluster has modulus < 1 - tol.
inline SpectralReport spectrum(const RuelleMatrix& m, double cluster_tol = kDefaultClusterTol) {
  if (cluster_tol < 0) throw std::invalid_argument("spectrum: cluster_tol must be nonnegative");
  EigenResult er = eigenvalues(m.matrix());
  if (!er.converged) {
    throw EigensolverError("spectrum: QR iteration did not converge within the sweep cap");
  }

  SpectralReport report;
  report.raw = er.values;
  report.cluster_tol = cluster_tol;

  const std::size_t n = er.values.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(er.values[i] - er.values[j]) <= cluster_tol) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
  for (const auto& g : groups) {
    if (g.empty()) continue;
    Complex mean(0.0);
    for (std::size_t i : g) mean += er.values[i];
    mean /= static_cast<double>(g.size());
    report.eigenvalues.push_back({mean, static_cast<int>(g.size())});
  }
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
            [](const EigenvalueCluster& a, const EigenvalueCluster& b) {
              const double ma = std::abs(a.value), mb = std::abs(b.value);
              if (ma != mb) return ma > mb;
              if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
              return a.value.imag() < b.value.imag();
            });

  std::size_t unit_idx = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
    const double d = std::abs(report.eigenvalues[i].value - Complex(1.0));
    if (d < best) { best = d; unit_idx = i; }
  }

  bool others_inside = true;
  for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
    const EigenvalueCluster& c = report.eigenvalues[i];
    if (std::abs(c.value) >= 1.0 - cluster_tol) report.peripheral.push_back(c);
    if (i == unit_idx) continue;
    report.gap = std::max(report.gap, std::abs(c.value));
    if (std::abs(c.value) >= 1.0 - cluster_tol) others_inside = false;
  }
  report.condition_e = (report.eigenvalues[unit_idx].multiplicity == 1) && others_inside;
  return report;
}

// Eigenvalues of the 7x7 matrix of the 4-tap family, in closed form:
//   {1, b, b, 1/2, -2b, (1 +- sqrt(1+16b))/4} with b = (1 + 2 sin t - cos 2t)/8.
inline std::array<Complex, 7> theta_eigenvalues_closed_form(ThetaParameter theta) {
  const double t = theta.radians;
  const double b = (1.0 + 2.0 * std::sin(t) - std::cos(2.0 * t)) / 8.0;
  const double root = std::sqrt(std::max(0.0, 1.0 + 16.0 * b));
  return {Complex(1.0),          Complex(b),
          Complex(b),            Complex(0.5),
          Complex(-2.0 * b),     Complex((1.0 + root) / 4.0),
          Complex((1.0 - root) / 4.0)};
}

inline std::array<Complex, 7> theta_eigenvalues_closed_form(double theta_radians) {
  return theta_eigenvalues_closed_form(ThetaParameter(theta_radians));
}

// Smallest worst-case pairing error between two equal-size eigenvalue
// multisets (exhaustive over pairings; intended for small spectra).
inline double match_max_error(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("match_max_error: size mismatch");
  if (a.size() > 9) throw std::invalid_argument("match_max_error: too large for exhaustive matching");
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
      if (worst >= best) break;
    }
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// |m0(z)|^2 as a Laurent polynomial.
inline LaurentPolynomial power_spectrum(const WaveletFilter& f) {
  return f.symbol().conjugated().flip() * f.symbol();
}

// Adjoint on L2 of the circle: (R* xi)(z) = |m0(z)|^2 xi(z^2).
inline LaurentPolynomial adjoint_apply(const WaveletFilter& f, const LaurentPolynomial& xi) {
  return power_spectrum(f) * xi.dilated(2);
}

// p_n from the two-branch recursion p_n(z) = (1/2) sum_{w^2=z} |m0(w)|^4 p_{n-1}(w),
// p_0 = 1, evaluated at z = e^{-it}.
inline double pn_function(const WaveletFilter& f, int n, double t) {
  if (n < 1) throw std::invalid_argument("pn_function: n must be >= 1");
  auto m0_pow4 = [&f](double s) {
    const double m2 = std::norm(f.m0(s));
    return m2 * m2;
  };
  // depth-first over the 2^n half-angle branches
  auto rec = [&](auto&& self, int depth, double s) -> double {
    if (depth == 0) return 1.0;
    const double half = 0.5 * s;
    return 0.5 * (m0_pow4(half) * self(self, depth - 1, half) +
                  m0_pow4(half + std::numbers::pi) * self(self, depth - 1, half + std::numbers::pi));
  };
  return rec(rec, n, t);
}

// Grid estimate of the L2 spectral radius, max_t p_n(t)^(1/2n); lands in [1, sqrt 2].
inline double rho2_estimate(const WaveletFilter& f, int n_max, int grid) {
  if (n_max < 1) throw std::invalid_argument("rho2_estimate: n_max must be >= 1");
  if (grid < 1) throw std::invalid_argument("rho2_estimate: grid must be >= 1");
  double sup = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / grid;
    sup = std::max(sup, pn_function(f, n_max, t));
  }
  return std::pow(sup, 1.0 / (2.0 * n_max));
}

// Residual of the covariance (R xi)(z^{-1}) = (R flip(xi))(z), valid for
// real-coefficient filters only.
inline double flip_covariance_residual(const WaveletFilter& f, const LaurentPolynomial& xi) {
  if (!f.is_real()) {
    throw std::invalid_argument("flip_covariance_residual: filter coefficients must be real");
  }
  return max_coeff_diff(ruelle_apply(f, xi).flip(), ruelle_apply(f, xi.flip()));
}

}  // namespace cascadelab
