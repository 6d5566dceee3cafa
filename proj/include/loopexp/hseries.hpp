#pragma once

#include <string>
#include <vector>

#include "loopexp/rational.hpp"

namespace loopexp {

/// Truncated formal power series in h with exact rational coefficients.
/// Coefficients of h^0 .. h^order are stored; arithmetic saturates at the
/// smaller order of the operands.
class HSeries {
 public:
  HSeries() : coeffs_(1) {}
  explicit HSeries(int order) : coeffs_(order + 1) {}
  HSeries(int order, const Rational& c0) : coeffs_(order + 1) { coeffs_[0] = c0; }

  static HSeries constant(const Rational& c, int order) { return HSeries(order, c); }
  // h^k at the given order (zero series if k > order).
  static HSeries h_power(int k, int order);
  // exp(k h) truncated.
  static HSeries exp_h(long k, int order);

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Rational& coeff(int k) const { return coeffs_.at(k); }
  void set(int k, const Rational& c) { coeffs_.at(k) = c; }

  bool is_zero() const;
  // Index of the lowest nonzero coefficient, or -1 for the zero series.
  int valuation() const;

  HSeries truncated(int order) const;

  HSeries operator-() const;
  friend HSeries operator+(const HSeries& a, const HSeries& b);
  friend HSeries operator-(const HSeries& a, const HSeries& b);
  friend HSeries operator*(const HSeries& a, const HSeries& b);
  HSeries operator*(const Rational& c) const;
  HSeries& operator+=(const HSeries& o) { return *this = *this + o; }
  HSeries& operator*=(const HSeries& o) { return *this = *this * o; }

  // Equal iff orders agree and all coefficients agree.
  friend bool operator==(const HSeries& a, const HSeries& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const HSeries& a, const HSeries& b) { return !(a == b); }

  // Multiplicative inverse at the stored order; throws std::domain_error
  // ("NonUnit") when the constant term is zero.
  HSeries invert() const;

  // h -> -h
  HSeries parity_flip() const;

  // exp of a series with zero constant term.
  HSeries exp() const;
  // log of a series with constant term 1.
  HSeries log() const;

  std::string json() const;  // {"order": N, "coeffs": ["num/den", ...]}
  static HSeries from_json(const std::string& json_text);

  std::string str() const;
  std::string key() const;

 private:
  std::vector<Rational> coeffs_;
};

inline HSeries operator*(const Rational& c, const HSeries& s) { return s * c; }

}  // namespace loopexp
