#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cascadelab/laurent.hpp"

namespace cascadelab {

// Dense complex matrix, row-major.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("CMatrix: negative dimension");
  }

  static CMatrix identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Complex(1.0);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Complex& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Complex& operator()(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * cols_ + j];
  }

  std::vector<Complex> apply(const std::vector<Complex>& x) const {
    if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("CMatrix::apply: size mismatch");
    std::vector<Complex> y(static_cast<std::size_t>(rows_), Complex(0.0));
    for (int i = 0; i < rows_; ++i) {
      Complex acc(0.0);
      for (int j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[static_cast<std::size_t>(j)];
      y[static_cast<std::size_t>(i)] = acc;
    }
    return y;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Complex> a_;
};

struct EigenResult {
  std::vector<Complex> values;
  bool converged = false;
  int iterations = 0;
};

struct EigensolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double abs1(const Complex& z) { return std::abs(z.real()) + std::abs(z.imag()); }

inline bool is_zero(const Complex& z) { return z.real() == 0.0 && z.imag() == 0.0; }

inline void swap_rows(CMatrix& a, int i, int j) {
  for (int k = 0; k < a.cols(); ++k) std::swap(a(i, k), a(j, k));
}

inline void swap_cols(CMatrix& a, int i, int j) {
  for (int k = 0; k < a.rows(); ++k) std::swap(a(k, i), a(k, j));
}

// Permutation phase: isolate eigenvalues whose row or column has no other
// nonzero entry, shrinking the active window [lo, hi].  Then equilibrate the
// window by exact radix-2 diagonal similarities (EISPACK balanc/cbal).
inline void balance(CMatrix& a, int& lo, int& hi) {
  const int n = a.rows();
  lo = 0;
  hi = n - 1;

  bool moved = true;
  while (moved && hi >= lo) {  // push zero-off-diagonal rows to the bottom
    moved = false;
    for (int i = hi; i >= lo; --i) {
      bool all_zero = true;
      for (int j = lo; j <= hi; ++j) {
        if (j != i && !is_zero(a(i, j))) { all_zero = false; break; }
      }
      if (all_zero) {
        swap_rows(a, i, hi);
        swap_cols(a, i, hi);
        --hi;
        moved = true;
        break;
      }
    }
  }
  moved = true;
  while (moved && lo <= hi) {  // push zero-off-diagonal columns to the top
    moved = false;
    for (int j = lo; j <= hi; ++j) {
      bool all_zero = true;
      for (int i = lo; i <= hi; ++i) {
        if (i != j && !is_zero(a(i, j))) { all_zero = false; break; }
      }
      if (all_zero) {
        swap_rows(a, j, lo);
        swap_cols(a, j, lo);
        ++lo;
        moved = true;
        break;
      }
    }
  }

  constexpr double radix = 2.0;
  constexpr double radix2 = radix * radix;
  bool noconv = true;
  while (noconv) {
    noconv = false;
    for (int i = lo; i <= hi; ++i) {
      double c = 0.0, r = 0.0;
      for (int j = lo; j <= hi; ++j) {
        if (j == i) continue;
        c += abs1(a(j, i));
        r += abs1(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) { f *= radix; c *= radix2; }
      g = r * radix;
      while (c >= g) { f /= radix; c /= radix2; }
      if ((c + r) / f < 0.95 * s) {
        const double ginv = 1.0 / f;
        for (int j = 0; j < a.cols(); ++j) a(i, j) *= ginv;
        for (int j = 0; j < a.rows(); ++j) a(j, i) *= f;
        noconv = true;
      }
    }
  }
}

// Householder reduction to upper Hessenberg form within the window [lo, hi].
inline void hessenberg(CMatrix& a, int lo, int hi) {
  for (int col = lo; col <= hi - 2; ++col) {
    double xnorm2 = 0.0;
    for (int i = col + 1; i <= hi; ++i) xnorm2 += std::norm(a(i, col));
    double tail = 0.0;
    for (int i = col + 2; i <= hi; ++i) tail += std::norm(a(i, col));
    if (tail == 0.0) continue;  // already in Hessenberg shape for this column

    const Complex x0 = a(col + 1, col);
    const double xnorm = std::sqrt(xnorm2);
    const Complex alpha = (std::abs(x0) == 0.0) ? Complex(-xnorm)
                                                : -(x0 / std::abs(x0)) * xnorm;
    std::vector<Complex> v(static_cast<std::size_t>(hi - col));
    v[0] = x0 - alpha;
    for (int i = col + 2; i <= hi; ++i) v[static_cast<std::size_t>(i - col - 1)] = a(i, col);
    double vnorm2 = 0.0;
    for (const Complex& z : v) vnorm2 += std::norm(z);
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;

    // A <- P A with P = I - beta v v^*, acting on rows col+1..hi
    for (int j = col; j < a.cols(); ++j) {
      Complex dot(0.0);
      for (int i = col + 1; i <= hi; ++i) {
        dot += std::conj(v[static_cast<std::size_t>(i - col - 1)]) * a(i, j);
      }
      dot *= beta;
      for (int i = col + 1; i <= hi; ++i) {
        a(i, j) -= dot * v[static_cast<std::size_t>(i - col - 1)];
      }
    }
    // A <- A P, acting on columns col+1..hi
    for (int i = 0; i < a.rows(); ++i) {
      Complex dot(0.0);
      for (int j = col + 1; j <= hi; ++j) {
        dot += a(i, j) * v[static_cast<std::size_t>(j - col - 1)];
      }
      dot *= beta;
      for (int j = col + 1; j <= hi; ++j) {
        a(i, j) -= dot * std::conj(v[static_cast<std::size_t>(j - col - 1)]);
      }
    }
    for (int i = col + 2; i <= hi; ++i) a(i, col) = Complex(0.0);
  }
}

// Eigenvalues of [[x, y], [z, w]], the root nearer to w first.
inline std::pair<Complex, Complex> eig2(Complex x, Complex y, Complex z, Complex w) {
  const Complex mid = 0.5 * (x + w);
  const Complex d = std::sqrt(0.25 * (x - w) * (x - w) + y * z);
  const Complex l1 = mid + d;
  const Complex l2 = mid - d;
  if (std::abs(l1 - w) <= std::abs(l2 - w)) return {l1, l2};
  return {l2, l1};
}

// Single-shift QR iteration on an upper Hessenberg window [lo, hi].
// Appends eigenvalues to w; returns false when the sweep cap is exhausted.
inline bool qr_eigenvalues(CMatrix& h, int lo, int hi, std::vector<Complex>& w, int max_sweeps,
                           int& sweeps) {
  const double eps = 2.220446049250313e-16;
  double hnorm = 0.0;
  for (int i = lo; i <= hi; ++i) {
    for (int j = std::max(lo, i - 1); j <= hi; ++j) hnorm += abs1(h(i, j));
  }
  if (hnorm == 0.0) {
    for (int i = lo; i <= hi; ++i) w.push_back(Complex(0.0));
    return true;
  }

  int en = hi;
  int local_its = 0;
  while (en >= lo) {
    // deflation scan
    int l = en;
    while (l > lo) {
      double s = abs1(h(l - 1, l - 1)) + abs1(h(l, l));
      if (s == 0.0) s = hnorm;
      if (abs1(h(l, l - 1)) <= eps * s) {
        h(l, l - 1) = Complex(0.0);
        break;
      }
      --l;
    }

    if (l == en) {
      w.push_back(h(en, en));
      --en;
      local_its = 0;
      continue;
    }
    if (l == en - 1) {
      auto [l1, l2] = eig2(h(en - 1, en - 1), h(en - 1, en), h(en, en - 1), h(en, en));
      w.push_back(l1);
      w.push_back(l2);
      en -= 2;
      local_its = 0;
      continue;
    }
    if (sweeps >= max_sweeps) return false;

    Complex shift;
    if (local_its > 0 && local_its % 10 == 0) {
      shift = Complex(std::abs(h(en, en - 1).real()) + std::abs(h(en, en - 1).imag()) +
                      abs1(h(en - 1, en - 2)));
    } else {
      shift = eig2(h(en - 1, en - 1), h(en - 1, en), h(en, en - 1), h(en, en)).first;
    }

    for (int i = l; i <= en; ++i) h(i, i) -= shift;

    // QR factorization of the shifted block by Givens rotations
    std::vector<std::pair<Complex, Complex>> rot(static_cast<std::size_t>(en - l));
    for (int i = l; i < en; ++i) {
      const Complex p = h(i, i);
      const Complex q = h(i + 1, i);
      const double d = std::hypot(std::abs(p), std::abs(q));
      if (d == 0.0) {
        rot[static_cast<std::size_t>(i - l)] = {Complex(1.0), Complex(0.0)};
        continue;
      }
      const Complex cs = p / d;
      const Complex sn = q / d;
      rot[static_cast<std::size_t>(i - l)] = {cs, sn};
      for (int j = i; j <= en; ++j) {
        const Complex u = h(i, j);
        const Complex v = h(i + 1, j);
        h(i, j) = std::conj(cs) * u + std::conj(sn) * v;
        h(i + 1, j) = -sn * u + cs * v;
      }
      h(i + 1, i) = Complex(0.0);
    }
    // RQ: apply the conjugated rotations on the right
    for (int i = l; i < en; ++i) {
      const auto [cs, sn] = rot[static_cast<std::size_t>(i - l)];
      for (int j = l; j <= std::min(i + 1, en); ++j) {
        const Complex u = h(j, i);
        const Complex v = h(j, i + 1);
        h(j, i) = cs * u + sn * v;
        h(j, i + 1) = -std::conj(sn) * u + std::conj(cs) * v;
      }
    }
    for (int i = l; i <= en; ++i) h(i, i) += shift;
    ++sweeps;
    ++local_its;
  }
  return true;
}

}  // namespace detail

// All eigenvalues of a dense complex matrix: balance, Hessenberg reduction,
// then shifted QR.  The sweep cap is sweep_cap_factor * n in total.
inline EigenResult eigenvalues(CMatrix a, int sweep_cap_factor = 100) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigenvalues: matrix must be square");
  const int n = a.rows();
  EigenResult result;
  if (n == 0) {
    result.converged = true;
    return result;
  }

  int lo = 0, hi = n - 1;
  detail::balance(a, lo, hi);
  for (int i = 0; i < lo; ++i) result.values.push_back(a(i, i));
  for (int i = hi + 1; i < n; ++i) result.values.push_back(a(i, i));

  if (lo <= hi) {
    detail::hessenberg(a, lo, hi);
    int sweeps = 0;
    const bool ok = detail::qr_eigenvalues(a, lo, hi, result.values, sweep_cap_factor * n, sweeps);
    result.iterations = sweeps;
    if (!ok) {
      result.converged = false;
      return result;
    }
  }
  result.converged = true;
  return result;
}

}  // namespace cascadelab
