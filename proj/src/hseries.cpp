#include "loopexp/hseries.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace loopexp {

using nlohmann::json;

HSeries HSeries::h_power(int k, int order) {
  HSeries s(order);
  if (k >= 0 && k <= order) s.coeffs_[k] = Rational(1);
  return s;
}

HSeries HSeries::exp_h(long k, int order) {
  HSeries s(order);
  Rational term(1);
  s.coeffs_[0] = term;
  for (int i = 1; i <= order; ++i) {
    term *= Rational(k, i);
    s.coeffs_[i] = term;
  }
  return s;
}

bool HSeries::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const Rational& c) { return c.is_zero(); });
}

int HSeries::valuation() const {
  for (int i = 0; i < static_cast<int>(coeffs_.size()); ++i)
    if (!coeffs_[i].is_zero()) return i;
  return -1;
}

HSeries HSeries::truncated(int order) const {
  HSeries r(order);
  for (int i = 0; i <= std::min(order, this->order()); ++i) r.coeffs_[i] = coeffs_[i];
  return r;
}

HSeries HSeries::operator-() const {
  HSeries r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

HSeries operator+(const HSeries& a, const HSeries& b) {
  int n = std::min(a.order(), b.order());
  HSeries r(n);
  for (int i = 0; i <= n; ++i) r.coeffs_[i] = a.coeffs_[i] + b.coeffs_[i];
  return r;
}

HSeries operator-(const HSeries& a, const HSeries& b) {
  int n = std::min(a.order(), b.order());
  HSeries r(n);
  for (int i = 0; i <= n; ++i) r.coeffs_[i] = a.coeffs_[i] - b.coeffs_[i];
  return r;
}

HSeries operator*(const HSeries& a, const HSeries& b) {
  int n = std::min(a.order(), b.order());
  HSeries r(n);
  for (int i = 0; i <= n; ++i) {
    if (a.coeffs_[i].is_zero()) continue;
    for (int j = 0; i + j <= n; ++j) {
      if (b.coeffs_[j].is_zero()) continue;
      r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return r;
}

HSeries HSeries::operator*(const Rational& c) const {
  HSeries r = *this;
  for (auto& x : r.coeffs_) x *= c;
  return r;
}

HSeries HSeries::invert() const {
  if (coeffs_[0].is_zero()) throw std::domain_error("NonUnit: constant term is zero");
  int n = order();
  HSeries r(n);
  Rational inv0 = coeffs_[0].inverse();
  r.coeffs_[0] = inv0;
  for (int k = 1; k <= n; ++k) {
    Rational acc(0);
    for (int i = 1; i <= k; ++i) acc += coeffs_[i] * r.coeffs_[k - i];
    r.coeffs_[k] = -inv0 * acc;
  }
  return r;
}

HSeries HSeries::parity_flip() const {
  HSeries r = *this;
  for (int i = 1; i <= r.order(); i += 2) r.coeffs_[i] = -r.coeffs_[i];
  return r;
}

HSeries HSeries::exp() const {
  if (!coeffs_[0].is_zero())
    throw std::domain_error("HSeries::exp: nonzero constant term");
  int n = order();
  HSeries r(n, Rational(1));
  HSeries pw(n, Rational(1));
  Rational fact(1);
  for (int k = 1; k <= n; ++k) {
    pw = pw * *this;
    fact *= Rational(k);
    r = r + pw * fact.inverse();
    if (pw.is_zero()) break;
  }
  return r;
}

HSeries HSeries::log() const {
  if (!coeffs_[0].is_one())
    throw std::domain_error("NonUnitConstant: log needs constant term 1");
  int n = order();
  HSeries x = *this;
  x.coeffs_[0] = Rational(0);
  HSeries r(n);
  HSeries pw(n, Rational(1));
  for (int k = 1; k <= n; ++k) {
    pw = pw * x;
    r = r + pw * Rational(k % 2 ? 1 : -1, k);
    if (pw.is_zero()) break;
  }
  return r;
}

std::string HSeries::json() const {
  nlohmann::json j;
  j["order"] = order();
  auto arr = nlohmann::json::array();
  for (const auto& c : coeffs_) arr.push_back(c.str());
  j["coeffs"] = arr;
  return j.dump();
}

HSeries HSeries::from_json(const std::string& json_text) {
  auto j = nlohmann::json::parse(json_text);
  int order = j.at("order").get<int>();
  HSeries s(order);
  const auto& arr = j.at("coeffs");
  for (int i = 0; i <= order && i < static_cast<int>(arr.size()); ++i)
    s.coeffs_[i] = arr[i].is_string() ? Rational::parse(arr[i].get<std::string>())
                                      : Rational(arr[i].get<long>());
  return s;
}

std::string HSeries::str() const {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i <= order(); ++i) {
    if (coeffs_[i].is_zero()) continue;
    os << (first ? "" : " + ") << coeffs_[i].str();
    if (i > 0) os << "*h^" << i;
    first = false;
  }
  if (first) os << "0";
  os << " + O(h^" << order() + 1 << ")";
  return os.str();
}

std::string HSeries::key() const {
  std::ostringstream os;
  os << order() << "|";
  for (const auto& c : coeffs_) os << c.str() << ";";
  return os.str();
}

}  // namespace loopexp
