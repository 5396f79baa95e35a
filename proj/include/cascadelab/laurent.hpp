#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace cascadelab {

using Complex = std::complex<double>;

inline constexpr double kTrimTol = 1e-13;

// Trigonometric polynomial sum_k x_k z^k on the unit circle, with the
// convention z = e^{-it}.  Coefficients are stored densely for the index
// range [lo, hi].
class LaurentPolynomial {
 public:
  LaurentPolynomial() : lo_(0), coeffs_{Complex(0.0)} {}

  LaurentPolynomial(long lo, std::vector<Complex> coeffs)
      : lo_(lo), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("LaurentPolynomial: empty coefficient list");
  }

  static LaurentPolynomial one() { return LaurentPolynomial(0, {Complex(1.0)}); }

  static LaurentPolynomial monomial(long k, Complex c = Complex(1.0)) {
    return LaurentPolynomial(k, {c});
  }

  long lo() const { return lo_; }
  long hi() const { return lo_ + static_cast<long>(coeffs_.size()) - 1; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  Complex coeff(long k) const {
    if (k < lo_ || k > hi()) return Complex(0.0);
    return coeffs_[static_cast<std::size_t>(k - lo_)];
  }

  // sum_k x_k e^{-ikt}
  Complex evaluate(double t) const {
    Complex acc(0.0);
    for (long k = lo_; k <= hi(); ++k) {
      acc += coeff(k) * std::polar(1.0, -static_cast<double>(k) * t);
    }
    return acc;
  }

  Complex coeff_sum() const {  // value at z = 1
    Complex acc(0.0);
    for (const Complex& c : coeffs_) acc += c;
    return acc;
  }

  double sum_abs2() const {
    double acc = 0.0;
    for (const Complex& c : coeffs_) acc += std::norm(c);
    return acc;
  }

  // xi(z) -> xi(z^{-1}): index-reversed coefficients.
  LaurentPolynomial flip() const {
    std::vector<Complex> rev(coeffs_.rbegin(), coeffs_.rend());
    return LaurentPolynomial(-hi(), std::move(rev));
  }

  LaurentPolynomial conjugated() const {
    std::vector<Complex> c(coeffs_.size());
    std::transform(coeffs_.begin(), coeffs_.end(), c.begin(),
                   [](const Complex& z) { return std::conj(z); });
    return LaurentPolynomial(lo_, std::move(c));
  }

  // xi(z) -> xi(z^factor): coefficient at k moves to factor*k.
  LaurentPolynomial dilated(long factor) const {
    if (factor < 1) throw std::invalid_argument("LaurentPolynomial::dilated: factor must be >= 1");
    std::vector<Complex> c(static_cast<std::size_t>((hi() - lo_) * factor + 1), Complex(0.0));
    for (long k = lo_; k <= hi(); ++k) {
      c[static_cast<std::size_t>((k - lo_) * factor)] = coeff(k);
    }
    return LaurentPolynomial(lo_ * factor, std::move(c));
  }

  // Drops zero fringes (|x_k| <= tol).  The zero polynomial collapses to a
  // single zero coefficient at index 0.
  LaurentPolynomial trimmed(double tol = kTrimTol) const {
    long a = lo_, b = hi();
    while (a < b && std::abs(coeff(a)) <= tol) ++a;
    while (b > a && std::abs(coeff(b)) <= tol) --b;
    if (a == b && std::abs(coeff(a)) <= tol) return LaurentPolynomial(0, {Complex(0.0)});
    std::vector<Complex> c(coeffs_.begin() + (a - lo_), coeffs_.begin() + (b - lo_ + 1));
    return LaurentPolynomial(a, std::move(c));
  }

  LaurentPolynomial& operator*=(Complex s) {
    for (Complex& c : coeffs_) c *= s;
    return *this;
  }

 private:
  long lo_;
  std::vector<Complex> coeffs_;
};

inline LaurentPolynomial operator+(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  long lo = std::min(a.lo(), b.lo());
  long hi = std::max(a.hi(), b.hi());
  std::vector<Complex> c(static_cast<std::size_t>(hi - lo + 1), Complex(0.0));
  for (long k = lo; k <= hi; ++k) c[static_cast<std::size_t>(k - lo)] = a.coeff(k) + b.coeff(k);
  return LaurentPolynomial(lo, std::move(c));
}

inline LaurentPolynomial operator-(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  long lo = std::min(a.lo(), b.lo());
  long hi = std::max(a.hi(), b.hi());
  std::vector<Complex> c(static_cast<std::size_t>(hi - lo + 1), Complex(0.0));
  for (long k = lo; k <= hi; ++k) c[static_cast<std::size_t>(k - lo)] = a.coeff(k) - b.coeff(k);
  return LaurentPolynomial(lo, std::move(c));
}

inline LaurentPolynomial operator*(Complex s, const LaurentPolynomial& a) {
  LaurentPolynomial r = a;
  r *= s;
  return r;
}

// Coefficient convolution.
inline LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  long lo = a.lo() + b.lo();
  long hi = a.hi() + b.hi();
  std::vector<Complex> c(static_cast<std::size_t>(hi - lo + 1), Complex(0.0));
  for (long i = a.lo(); i <= a.hi(); ++i) {
    const Complex ai = a.coeff(i);
    if (ai == Complex(0.0)) continue;
    for (long j = b.lo(); j <= b.hi(); ++j) {
      c[static_cast<std::size_t>(i + j - lo)] += ai * b.coeff(j);
    }
  }
  return LaurentPolynomial(lo, std::move(c));
}

// max_k |a_k - b_k| over the union of the index ranges.
inline double max_coeff_diff(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  long lo = std::min(a.lo(), b.lo());
  long hi = std::max(a.hi(), b.hi());
  double m = 0.0;
  for (long k = lo; k <= hi; ++k) m = std::max(m, std::abs(a.coeff(k) - b.coeff(k)));
  return m;
}

inline bool exact_equal(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  return a.lo() == b.lo() && a.coeffs() == b.coeffs();
}

// Equality up to zero fringes, coefficientwise within tol.
inline bool canonical_equal(const LaurentPolynomial& a, const LaurentPolynomial& b,
                            double tol = kTrimTol) {
  LaurentPolynomial ta = a.trimmed(tol);
  LaurentPolynomial tb = b.trimmed(tol);
  if (ta.lo() != tb.lo() || ta.hi() != tb.hi()) return false;
  return max_coeff_diff(ta, tb) <= tol;
}

// Debug dump: one "index,re,im" row per coefficient.
inline void write_csv(std::ostream& os, const LaurentPolynomial& p) {
  os << "index,re,im\n";
  for (long k = p.lo(); k <= p.hi(); ++k) {
    os << k << ',' << p.coeff(k).real() << ',' << p.coeff(k).imag() << '\n';
  }
}

}  // namespace cascadelab
