#include "vage/expr.hpp"

#include <cctype>
#include <cstdlib>

#include "vage/errors.hpp"

namespace vage {

namespace {

// Recursive descent:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' integer)?
//   primary := number 'i'? | 'i' | 'x' integer | '(' expr ')'
class Parser {
 public:
  Parser(const std::string& s, const TruncationSpec& t) : s_(s), t_(t) {}

  Series parse() {
    Series v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression: " + what + " at position " + std::to_string(pos_) + " in \"" + s_ + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  unsigned long integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return std::stoul(s_.substr(start, pos_ - start));
  }

  Series expr() {
    Series v = term();
    for (;;) {
      if (eat('+')) {
        v = v + term();
      } else if (eat('-')) {
        v = v - term();
      } else {
        return v;
      }
    }
  }
  Series term() {
    Series v = unary();
    for (;;) {
      if (eat('*')) {
        v = v * unary();
      } else if (eat('/')) {
        v = v * invert(unary());
      } else {
        return v;
      }
    }
  }
  Series unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power_();
  }
  Series power_() {
    Series v = primary();
    if (eat('^')) {
      const auto n = integer();
      if (n > 100000) fail("exponent too large");
      v = vage::power(v, static_cast<unsigned>(n));
    }
    return v;
  }
  Series primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Series v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (c == 'x') {
      ++pos_;
      const auto k = integer();
      if (k == 0) fail("generators are numbered from 1");
      if (k > t_.max_generator) fail("generator x" + std::to_string(k) + " is outside the window");
      return t_.max_degree == 0 ? Series(t_) : monomial(MultiIndex::unit(static_cast<Generator>(k)), 1.0, t_);
    }
    if (c == 'i') {
      ++pos_;
      return Series::constant(Complex(0.0, 1.0), t_);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      if (pos_ < s_.size() && s_[pos_] == 'i') {
        ++pos_;
        return Series::constant(Complex(0.0, v), t_);
      }
      return Series::constant(v, t_);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  const std::string& s_;
  TruncationSpec t_;
  std::size_t pos_ = 0;
};

}  // namespace

Generator max_generator_in(const std::string& expr) {
  Generator m = 0;
  for (std::size_t i = 0; i < expr.size(); ++i) {
    if (expr[i] != 'x') continue;
    std::size_t j = i + 1;
    while (j < expr.size() && std::isdigit(static_cast<unsigned char>(expr[j]))) ++j;
    if (j > i + 1 && j - i - 1 < 10) m = std::max<Generator>(m, std::stoul(expr.substr(i + 1, j - i - 1)));
  }
  return m;
}

Series parse_series_expr(const std::string& expr, const TruncationSpec& window) {
  return Parser(expr, window).parse();
}

Complex parse_complex(const std::string& expr) {
  if (max_generator_in(expr) > 0) throw ParseError("expected a constant, got \"" + expr + "\"");
  return expectation(Parser(expr, {1, 0}).parse());
}

}  // namespace vage
