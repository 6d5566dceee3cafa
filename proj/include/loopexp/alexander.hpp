#pragma once

#include <stdexcept>
#include <vector>

#include "loopexp/laurent.hpp"

namespace loopexp {

struct NotInZ : std::domain_error {
  using std::domain_error::domain_error;
};

/// Element of Z = { f in Z[t^±1] : f(1)=1, f(t)=f(t^-1) }, carried together
/// with its exact rewrite f = 1 + sum a_j u^j in the basis u = t + t^-1 - 2.
class AlexanderPoly {
 public:
  // Throws NotInZ unless f satisfies both defining conditions.
  explicit AlexanderPoly(const LaurentPoly& f);

  // 1 + a*u for integer a (the genus-1 family).
  static AlexanderPoly genus1(long a);

  const LaurentPoly& poly() const { return poly_; }
  // a_1 .. a_m; empty for f = 1.
  const std::vector<Rational>& u_coeffs() const { return u_coeffs_; }
  // deg f := m, the top u-exponent (0 for f = 1).
  int deg() const { return static_cast<int>(u_coeffs_.size()); }

 private:
  LaurentPoly poly_;
  std::vector<Rational> u_coeffs_;
};

int deg_Z(const AlexanderPoly& f);

}  // namespace loopexp
