#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cascadelab/filter.hpp"
#include "cascadelab/laurent.hpp"
#include "cascadelab/step_function.hpp"
#include "cascadelab/transfer.hpp"

namespace cascadelab {

// Starting box function for cascade runs; the window is sized to the filter
// support so that iterates stay within [0, N).
inline DyadicStepFunction haar_initial(long window_hi) { return DyadicStepFunction::haar(window_hi); }

inline DyadicStepFunction haar_initial(const WaveletFilter& f) {
  return DyadicStepFunction::haar(std::max(f.degree(), 1L));
}

// Refinement step with an arbitrary Laurent symbol sigma:
//   (M_sigma psi)(x) = sqrt(2) sum_k sigma_k psi(2x - k).
// The result lives one level finer on the window [(lo+slo)/2, (hi+shi)/2]
// rounded outward to integers.
inline DyadicStepFunction cascade_apply(const LaurentPolynomial& sigma,
                                        const DyadicStepFunction& psi) {
  if (psi.level() + 1 > kLevelCap) {
    throw LevelCapError("cascade_apply: level cap exceeded (memory guard)");
  }
  const int m = psi.level();
  const long cells = 1L << m;
  const long new_lo = floor_div2(psi.lo() + sigma.lo());
  const long new_hi = ceil_div2(psi.hi() + sigma.hi());
  std::vector<Complex> v(static_cast<std::size_t>((new_hi - new_lo) * (2 * cells)), Complex(0.0));
  const long new_first = new_lo * (2 * cells);
  const double sq2 = std::sqrt(2.0);
  for (long k = sigma.lo(); k <= sigma.hi(); ++k) {
    const Complex w = sq2 * sigma.coeff(k);
    if (w == Complex(0.0)) continue;
    const long base = psi.first_index() + k * cells - new_first;
    for (std::size_t i = 0; i < psi.size(); ++i) {
      v[static_cast<std::size_t>(base + static_cast<long>(i))] += w * psi.values()[i];
    }
  }
  return DyadicStepFunction(m + 1, new_lo, new_hi, std::move(v));
}

inline DyadicStepFunction cascade_step(const WaveletFilter& f, const DyadicStepFunction& psi) {
  return cascade_apply(f.symbol(), psi);
}

// Stages 0..n of the cascade (or only the final stage).
inline std::vector<DyadicStepFunction> cascade_run(const WaveletFilter& f,
                                                   const DyadicStepFunction& psi0, int n,
                                                   bool keep_all = true) {
  if (n < 0) throw std::invalid_argument("cascade_run: stage count must be nonnegative");
  if (psi0.level() + n > kLevelCap) {
    throw LevelCapError("cascade_run: level cap exceeded (memory guard)");
  }
  std::vector<DyadicStepFunction> stages;
  stages.push_back(psi0);
  for (int i = 0; i < n; ++i) {
    DyadicStepFunction next = cascade_step(f, stages.back());
    if (keep_all) {
      stages.push_back(std::move(next));
    } else {
      stages.back() = std::move(next);
    }
  }
  return stages;
}

// (xi * psi)(x) = sum_k xi_k psi(x - k)
inline DyadicStepFunction convolve_poly(const LaurentPolynomial& xi,
                                        const DyadicStepFunction& psi) {
  const long cells = 1L << psi.level();
  const long new_lo = psi.lo() + xi.lo();
  const long new_hi = psi.hi() + xi.hi();
  std::vector<Complex> v(static_cast<std::size_t>((new_hi - new_lo) * cells), Complex(0.0));
  const long new_first = new_lo * cells;
  for (long k = xi.lo(); k <= xi.hi(); ++k) {
    const Complex w = xi.coeff(k);
    if (w == Complex(0.0)) continue;
    const long base = psi.first_index() + k * cells - new_first;
    for (std::size_t i = 0; i < psi.size(); ++i) {
      v[static_cast<std::size_t>(base + static_cast<long>(i))] += w * psi.values()[i];
    }
  }
  return DyadicStepFunction(psi.level(), new_lo, new_hi, std::move(v));
}

// Cross-correlation polynomial p(psi1, psi2)(z) = sum_k z^k <psi1(.-k), psi2>.
inline LaurentPolynomial relative_polynomial(const DyadicStepFunction& psi1,
                                             const DyadicStepFunction& psi2) {
  const long k_lo = psi2.lo() - psi1.hi() + 1;
  const long k_hi = psi2.hi() - psi1.lo() - 1;
  if (k_lo > k_hi) return LaurentPolynomial();
  std::vector<Complex> c(static_cast<std::size_t>(k_hi - k_lo + 1), Complex(0.0));
  for (long k = k_lo; k <= k_hi; ++k) {
    c[static_cast<std::size_t>(k - k_lo)] = l2_inner(psi1.shifted(k), psi2);
  }
  return LaurentPolynomial(k_lo, std::move(c)).trimmed(0.0);
}

// Residual of the intertwining identity p(M psi1, M psi2) = R p(psi1, psi2).
inline double verify_cascade_covariance(const WaveletFilter& f, const DyadicStepFunction& psi1,
                                        const DyadicStepFunction& psi2) {
  const LaurentPolynomial lhs = relative_polynomial(cascade_step(f, psi1), cascade_step(f, psi2));
  const LaurentPolynomial rhs = ruelle_apply(f, relative_polynomial(psi1, psi2));
  return max_coeff_diff(lhs, rhs);
}

// prod_{k=1..n} m0(t 2^{-k}) / sqrt(2), the n-term partial product of the
// infinite-product Fourier transform of the scaling function.
inline Complex fourier_partial_product(const WaveletFilter& f, int n, double t) {
  if (n < 1) throw std::invalid_argument("fourier_partial_product: n must be >= 1");
  Complex acc(1.0);
  const double inv_sq2 = 1.0 / std::sqrt(2.0);
  double s = t;
  for (int k = 1; k <= n; ++k) {
    s *= 0.5;
    acc *= f.m0(s) * inv_sq2;
  }
  return acc;
}

}  // namespace cascadelab
