#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loopexp/rational.hpp"

namespace loopexp {

class HSeries;

/// Laurent polynomial in t with exact rational coefficients.
/// No zero coefficients are ever stored.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  explicit LaurentPoly(const Rational& c) { set(0, c); }

  static LaurentPoly t_power(long k, const Rational& c = Rational(1)) {
    LaurentPoly p;
    p.set(k, c);
    return p;
  }
  static LaurentPoly one() { return LaurentPoly(Rational(1)); }
  // u = t + t^-1 - 2
  static LaurentPoly u_poly();
  // v = t - t^-1
  static LaurentPoly v_poly();

  bool is_zero() const { return coeffs_.empty(); }
  bool is_one() const;
  // Nonzero monomial c*t^k, if the polynomial has exactly one term.
  std::optional<std::pair<long, Rational>> monomial() const;

  const Rational& coeff(long k) const;
  void set(long k, const Rational& c) {
    if (c.is_zero()) coeffs_.erase(k);
    else coeffs_[k] = c;
  }
  void add(long k, const Rational& c) {
    auto it = coeffs_.find(k);
    if (it == coeffs_.end()) {
      if (!c.is_zero()) coeffs_[k] = c;
      return;
    }
    it->second += c;
    if (it->second.is_zero()) coeffs_.erase(it);
  }

  long min_exp() const;  // throws on zero polynomial
  long max_exp() const;

  const std::map<long, Rational>& terms() const { return coeffs_; }

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
  LaurentPoly operator*(const Rational& c) const;

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

  // f(t) -> f(t^-1)
  LaurentPoly mirror() const;
  // f(1): sum of coefficients
  Rational eval_one() const;
  bool symmetric() const { return mirror() == *this; }
  bool integer_coeffs() const;

  // Exact division; throws std::domain_error when the remainder is nonzero.
  LaurentPoly divide_exact(const LaurentPoly& divisor) const;
  // Division with remainder (on the underlying ordinary polynomials after
  // clearing the t-shift). Returns {quotient, remainder}.
  std::pair<LaurentPoly, LaurentPoly> divmod(const LaurentPoly& divisor) const;

  // f(e^h) truncated at order N.
  HSeries exp_substitute(int order) const;

  // Sorted [exponent, "num/den"] pairs; parse accepts the same shape.
  std::string json() const;
  static LaurentPoly from_json(const std::string& json_text);

  // Human-readable, e.g. "t^-1 - 2 + t".
  std::string str() const;

  // Deterministic key for hashing/ordering.
  std::string key() const;

 private:
  std::map<long, Rational> coeffs_;
};

inline LaurentPoly operator*(const Rational& c, const LaurentPoly& p) { return p * c; }

bool is_in_Z(const LaurentPoly& f);

}  // namespace loopexp
