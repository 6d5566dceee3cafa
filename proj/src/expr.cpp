#include "loopexp/expr.hpp"

#include <cctype>

namespace loopexp {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  LaurentPoly parse() {
    LaurentPoly p = expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("trailing input", pos_);
    return p;
  }

 private:
  LaurentPoly expr() {
    LaurentPoly acc = term();
    for (;;) {
      skip_ws();
      if (eat('+')) acc += term();
      else if (eat('-')) acc -= term();
      else return acc;
    }
  }

  LaurentPoly term() {
    LaurentPoly acc = factor();
    for (;;) {
      skip_ws();
      if (eat('*')) {
        acc *= factor();
      } else if (eat('/')) {
        LaurentPoly d = factor();
        auto mono = d.monomial();
        if (!mono || mono->first != 0)
          throw ParseError("division only by nonzero constants", pos_);
        acc = acc * mono->second.inverse();
      } else {
        return acc;
      }
    }
  }

  LaurentPoly factor() {
    skip_ws();
    if (eat('-')) return -factor();
    if (eat('+')) return factor();
    LaurentPoly base = primary();
    skip_ws();
    if (eat('^')) {
      long e = integer();
      LaurentPoly acc = LaurentPoly::one();
      long n = e < 0 ? -e : e;
      LaurentPoly b = e < 0 ? inverted(base) : base;
      for (long i = 0; i < n; ++i) acc *= b;
      return acc;
    }
    return base;
  }

  // Only monomials are invertible in the Laurent ring.
  LaurentPoly inverted(const LaurentPoly& p) {
    auto mono = p.monomial();
    if (!mono) throw ParseError("negative power of a non-monomial", pos_);
    return LaurentPoly::t_power(-mono->first, mono->second.inverse());
  }

  LaurentPoly primary() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      LaurentPoly p = expr();
      skip_ws();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return p;
    }
    if (c == 't') { ++pos_; return LaurentPoly::t_power(1); }
    if (c == 'u') { ++pos_; return LaurentPoly::u_poly(); }
    if (c == 'v') { ++pos_; return LaurentPoly::v_poly(); }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      long n = integer();
      return LaurentPoly(Rational(n));
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  long integer() {
    skip_ws();
    bool neg = false;
    if (eat('-')) neg = true;
    else eat('+');
    skip_ws();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      throw ParseError("expected integer", pos_);
    long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      v = v * 10 + (s_[pos_++] - '0');
    return neg ? -v : v;
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
    return false;
  }

  const std::string& s_;
  size_t pos_ = 0;
};

}  // namespace

LaurentPoly parse_laurent(const std::string& text) { return Parser(text).parse(); }

}  // namespace loopexp
