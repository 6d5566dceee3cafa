#include "loopexp/alexander.hpp"

namespace loopexp {

AlexanderPoly::AlexanderPoly(const LaurentPoly& f) : poly_(f) {
  if (!is_in_Z(f)) throw NotInZ("AlexanderPoly: not in Z (need f(1)=1, f(t)=f(t^-1), integer coefficients)");
  // Peel top u-powers: the coefficient of t^m in f equals a_m because
  // u^m = t^m + (lower breadth).
  LaurentPoly rem = f;
  const LaurentPoly u = LaurentPoly::u_poly();
  std::vector<Rational> rev;
  while (!rem.is_zero() && rem.max_exp() > 0) {
    long m = rem.max_exp();
    Rational am = rem.coeff(m);
    rev.resize(std::max<size_t>(rev.size(), m));
    rev[m - 1] = am;
    LaurentPoly upow = LaurentPoly::one();
    for (long i = 0; i < m; ++i) upow *= u;
    rem -= upow * am;
  }
  // What is left must be the constant 1.
  if (!(rem == LaurentPoly::one()))
    throw NotInZ("AlexanderPoly: u-basis rewrite did not terminate at 1");
  u_coeffs_ = std::move(rev);
  while (!u_coeffs_.empty() && u_coeffs_.back().is_zero()) u_coeffs_.pop_back();
}

AlexanderPoly AlexanderPoly::genus1(long a) {
  LaurentPoly f = LaurentPoly::one() + LaurentPoly::u_poly() * Rational(a);
  return AlexanderPoly(f);
}

int deg_Z(const AlexanderPoly& f) { return f.deg(); }

}  // namespace loopexp
