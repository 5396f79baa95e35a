#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "cascadelab/laurent.hpp"
#include "cascadelab/numfmt.hpp"

namespace cascadelab {

inline constexpr int kLevelCap = 24;

struct LevelCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Piecewise-constant function on the dyadic grid 2^{-m} Z, supported inside
// the integer window [lo, hi).  Cell i holds the value on
// [lo + i 2^{-m}, lo + (i+1) 2^{-m}); all integrals are exact sums.
class DyadicStepFunction {
 public:
  DyadicStepFunction(int level, long lo, long hi, std::vector<Complex> values)
      : level_(level), lo_(lo), hi_(hi), v_(std::move(values)) {
    if (level < 0 || level > kLevelCap) throw LevelCapError("DyadicStepFunction: level out of range");
    if (hi <= lo) throw std::invalid_argument("DyadicStepFunction: window must be nonempty");
    if (v_.size() != static_cast<std::size_t>((hi - lo) * (1L << level))) {
      throw std::invalid_argument("DyadicStepFunction: value count must be (hi-lo)*2^level");
    }
  }

  // Indicator of [0, 1) carried on the window [0, window_hi).
  static DyadicStepFunction haar(long window_hi = 1) {
    if (window_hi < 1) throw std::invalid_argument("haar: window must contain [0,1)");
    std::vector<Complex> v(static_cast<std::size_t>(window_hi), Complex(0.0));
    v[0] = Complex(1.0);
    return DyadicStepFunction(0, 0, window_hi, std::move(v));
  }

  int level() const { return level_; }
  long lo() const { return lo_; }
  long hi() const { return hi_; }
  const std::vector<Complex>& values() const { return v_; }
  std::size_t size() const { return v_.size(); }
  double dx() const { return std::ldexp(1.0, -level_); }

  long first_index() const { return lo_ * (1L << level_); }  // absolute grid index of cell 0

  Complex at_index(long abs_index) const {
    const long i = abs_index - first_index();
    if (i < 0 || i >= static_cast<long>(v_.size())) return Complex(0.0);
    return v_[static_cast<std::size_t>(i)];
  }

  Complex& cell(std::size_t i) { return v_[i]; }

  double x_left(std::size_t i) const {
    return static_cast<double>(lo_) + static_cast<double>(i) * dx();
  }

  double l2_norm() const {
    double acc = 0.0;
    for (const Complex& z : v_) acc += std::norm(z);
    return std::sqrt(std::ldexp(acc, -level_));
  }

  // Value duplication onto a finer grid; exact for step functions.
  DyadicStepFunction refined(int target_level) const {
    if (target_level < level_) throw std::invalid_argument("refined: target level is coarser");
    if (target_level == level_) return *this;
    if (target_level > kLevelCap) throw LevelCapError("refined: level cap exceeded");
    const long factor = 1L << (target_level - level_);
    std::vector<Complex> v(v_.size() * static_cast<std::size_t>(factor));
    for (std::size_t i = 0; i < v_.size(); ++i) {
      std::fill_n(v.begin() + static_cast<long>(i) * factor, factor, v_[i]);
    }
    return DyadicStepFunction(target_level, lo_, hi_, std::move(v));
  }

  // Pad the carrying window with zero cells; values are unchanged.
  DyadicStepFunction widened(long new_lo, long new_hi) const {
    if (new_lo > lo_ || new_hi < hi_) throw std::invalid_argument("widened: window must grow");
    std::vector<Complex> v(static_cast<std::size_t>((new_hi - new_lo) * (1L << level_)), Complex(0.0));
    const long off = (lo_ - new_lo) * (1L << level_);
    std::copy(v_.begin(), v_.end(), v.begin() + off);
    return DyadicStepFunction(level_, new_lo, new_hi, std::move(v));
  }

  // x -> x - k for integer k (support moves right by k).
  DyadicStepFunction shifted(long k) const {
    return DyadicStepFunction(level_, lo_ + k, hi_ + k, v_);
  }

  // Exact Fourier transform integral of psi against e^{-itx}: each cell
  // contributes v * h * e^{-it(x+h/2)} * sinc(t h / 2).
  Complex fourier(double t) const {
    const double h = dx();
    const double u = 0.5 * t * h;
    const double sinc = (u == 0.0) ? 1.0 : std::sin(u) / u;
    Complex acc(0.0);
    for (std::size_t i = 0; i < v_.size(); ++i) {
      if (v_[i] == Complex(0.0)) continue;
      acc += v_[i] * std::polar(1.0, -t * (x_left(i) + 0.5 * h));
    }
    return acc * (h * sinc);
  }

 private:
  int level_;
  long lo_, hi_;
  std::vector<Complex> v_;
};

namespace detail {

inline std::pair<DyadicStepFunction, DyadicStepFunction> aligned(const DyadicStepFunction& a,
                                                                 const DyadicStepFunction& b) {
  const int level = std::max(a.level(), b.level());
  const long lo = std::min(a.lo(), b.lo());
  const long hi = std::max(a.hi(), b.hi());
  return {a.refined(level).widened(lo, hi), b.refined(level).widened(lo, hi)};
}

}  // namespace detail

// Exact integral of conj(a) * b.
inline Complex l2_inner(const DyadicStepFunction& a, const DyadicStepFunction& b) {
  auto [fa, fb] = detail::aligned(a, b);
  Complex acc(0.0);
  for (std::size_t i = 0; i < fa.size(); ++i) acc += std::conj(fa.values()[i]) * fb.values()[i];
  return Complex(std::ldexp(acc.real(), -fa.level()), std::ldexp(acc.imag(), -fa.level()));
}

inline double l2_distance(const DyadicStepFunction& a, const DyadicStepFunction& b) {
  auto [fa, fb] = detail::aligned(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) acc += std::norm(fa.values()[i] - fb.values()[i]);
  return std::sqrt(std::ldexp(acc, -fa.level()));
}

// max over grid cells of |sum_k psi(x + k) - 1| (partition of unity test).
inline double strang_fix_residual(const DyadicStepFunction& psi) {
  const long cells = 1L << psi.level();
  std::vector<Complex> sums(static_cast<std::size_t>(cells), Complex(0.0));
  const long first = psi.first_index();
  for (std::size_t i = 0; i < psi.size(); ++i) {
    long r = (first + static_cast<long>(i)) % cells;
    if (r < 0) r += cells;
    sums[static_cast<std::size_t>(r)] += psi.values()[i];
  }
  double res = 0.0;
  for (const Complex& s : sums) res = std::max(res, std::abs(s - Complex(1.0)));
  return res;
}

// One row per cell left endpoint, shortest round-trip floats.
inline void write_csv(std::ostream& os, const DyadicStepFunction& psi) {
  os << "x,re,im\n";
  for (std::size_t i = 0; i < psi.size(); ++i) {
    os << format_double(psi.x_left(i)) << ',' << format_double(psi.values()[i].real()) << ','
       << format_double(psi.values()[i].imag()) << '\n';
  }
}

}  // namespace cascadelab
