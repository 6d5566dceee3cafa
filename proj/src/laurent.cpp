#include "loopexp/laurent.hpp"

#include <sstream>

#include "json.hpp"
#include "loopexp/hseries.hpp"

namespace loopexp {



LaurentPoly LaurentPoly::u_poly() {
  LaurentPoly p;
  p.set(1, Rational(1));
  p.set(-1, Rational(1));
  p.set(0, Rational(-2));
  return p;
}

LaurentPoly LaurentPoly::v_poly() {
  LaurentPoly p;
  p.set(1, Rational(1));
  p.set(-1, Rational(-1));
  return p;
}

bool LaurentPoly::is_one() const {
  return coeffs_.size() == 1 && coeffs_.count(0) && coeffs_.at(0).is_one();
}

std::optional<std::pair<long, Rational>> LaurentPoly::monomial() const {
  if (coeffs_.size() != 1) return std::nullopt;
  return std::make_pair(coeffs_.begin()->first, coeffs_.begin()->second);
}

const Rational& LaurentPoly::coeff(long k) const {
  static const Rational kZero(0);
  auto it = coeffs_.find(k);
  return it == coeffs_.end() ? kZero : it->second;
}

long LaurentPoly::min_exp() const {
  if (coeffs_.empty()) throw std::domain_error("LaurentPoly: zero polynomial has no support");
  return coeffs_.begin()->first;
}

long LaurentPoly::max_exp() const {
  if (coeffs_.empty()) throw std::domain_error("LaurentPoly: zero polynomial has no support");
  return coeffs_.rbegin()->first;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r;
  for (const auto& [k, c] : coeffs_) r.coeffs_[k] = -c;
  return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  for (const auto& [k, c] : o.coeffs_) add(k, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  for (const auto& [k, c] : o.coeffs_) add(k, -c);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly r;
  for (const auto& [ka, ca] : a.coeffs_)
    for (const auto& [kb, cb] : b.coeffs_) r.add(ka + kb, ca * cb);
  return r;
}

LaurentPoly LaurentPoly::operator*(const Rational& c) const {
  LaurentPoly r;
  if (c.is_zero()) return r;
  for (const auto& [k, v] : coeffs_) r.coeffs_[k] = v * c;
  return r;
}

LaurentPoly LaurentPoly::mirror() const {
  LaurentPoly r;
  for (const auto& [k, c] : coeffs_) r.coeffs_[-k] = c;
  return r;
}

Rational LaurentPoly::eval_one() const {
  Rational s(0);
  for (const auto& [k, c] : coeffs_) s += c;
  return s;
}

bool LaurentPoly::integer_coeffs() const {
  for (const auto& [k, c] : coeffs_)
    if (!c.is_integer()) return false;
  return true;
}

std::pair<LaurentPoly, LaurentPoly> LaurentPoly::divmod(const LaurentPoly& divisor) const {
  if (divisor.is_zero()) throw std::domain_error("LaurentPoly: division by zero");
  if (is_zero()) return {LaurentPoly(), LaurentPoly()};
  // Long division top-down; terminates because the dividend's breadth
  // (max_exp - min_exp) cannot grow and each step kills the top term.
  const long breadth_b = divisor.max_exp() - divisor.min_exp();
  const long db = divisor.max_exp();
  const Rational lead = divisor.coeff(db);
  LaurentPoly rem = *this;
  LaurentPoly quot;
  while (!rem.is_zero() && rem.max_exp() - rem.min_exp() >= breadth_b) {
    Rational q = rem.coeff(rem.max_exp()) / lead;
    LaurentPoly term = LaurentPoly::t_power(rem.max_exp() - db, q);
    quot += term;
    rem -= term * divisor;
  }
  return {quot, rem};
}

LaurentPoly LaurentPoly::divide_exact(const LaurentPoly& divisor) const {
  auto [q, r] = divmod(divisor);
  if (!r.is_zero()) throw std::domain_error("LaurentPoly: inexact division");
  return q;
}

HSeries LaurentPoly::exp_substitute(int order) const {
  HSeries s(order);
  for (const auto& [k, c] : coeffs_) s += HSeries::exp_h(k, order) * c;
  return s;
}

std::string LaurentPoly::json() const {
  auto arr = nlohmann::json::array();
  for (const auto& [k, c] : coeffs_) arr.push_back({k, c.str()});
  return arr.dump();
}

LaurentPoly LaurentPoly::from_json(const std::string& json_text) {
  auto arr = nlohmann::json::parse(json_text);
  LaurentPoly p;
  for (const auto& item : arr) {
    long k = item.at(0).get<long>();
    Rational c = item.at(1).is_string() ? Rational::parse(item.at(1).get<std::string>())
                                        : Rational(item.at(1).get<long>());
    p.add(k, c);
  }
  return p;
}

std::string LaurentPoly::str() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : coeffs_) {
    Rational a = c;
    if (first) {
      if (a.sign() < 0) { os << "-"; a = -a; }
    } else {
      os << (a.sign() < 0 ? " - " : " + ");
      if (a.sign() < 0) a = -a;
    }
    first = false;
    if (k == 0) {
      os << a.str();
    } else {
      if (!a.is_one()) os << a.str() << "*";
      os << "t";
      if (k != 1) os << "^" << k;
    }
  }
  return os.str();
}

std::string LaurentPoly::key() const {
  std::ostringstream os;
  for (const auto& [k, c] : coeffs_) os << k << ":" << c.str() << ";";
  return os.str();
}

bool is_in_Z(const LaurentPoly& f) {
  return f.integer_coeffs() && f.eval_one().is_one() && f.symmetric();
}

}  // namespace loopexp
