#include "bvgraph/cli/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "bvgraph/error.hpp"

namespace bvgraph::cli {

namespace {

using Fn = std::function<double(double, double)>;

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Fn parse() {
    Fn f = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::parse_error, "expression column " + std::to_string(pos_ + 1) + ": " + msg);
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

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  Fn sum() {
    Fn lhs = product();
    for (;;) {
      if (eat('+')) {
        lhs = [a = lhs, b = product()](double x, double y) { return a(x, y) + b(x, y); };
      } else if (eat('-')) {
        lhs = [a = lhs, b = product()](double x, double y) { return a(x, y) - b(x, y); };
      } else {
        return lhs;
      }
    }
  }

  Fn product() {
    Fn lhs = unary();
    for (;;) {
      if (eat('*')) {
        lhs = [a = lhs, b = unary()](double x, double y) { return a(x, y) * b(x, y); };
      } else if (eat('/')) {
        lhs = [a = lhs, b = unary()](double x, double y) { return a(x, y) / b(x, y); };
      } else {
        return lhs;
      }
    }
  }

  Fn unary() {
    if (eat('-')) return [a = unary()](double x, double y) { return -a(x, y); };
    return power();
  }

  // right associative; binds tighter than unary minus on its left
  Fn power() {
    Fn base = atom();
    if (eat('^')) return [a = base, b = unary()](double x, double y) { return std::pow(a(x, y), b(x, y)); };
    return base;
  }

  Fn atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    if (eat('(')) {
      Fn inner = sum();
      expect(')');
      return inner;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Fn number() {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc{}) fail("malformed number");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return [v](double, double) { return v; };
  }

  Fn name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string id(s_.substr(start, pos_ - start));
    if (id == "x") return [](double x, double) { return x; };
    if (id == "y") return [](double, double y) { return y; };
    if (id == "r") return [](double x, double y) { return std::hypot(x - 0.5, y - 0.5); };
    if (id == "pi") return [](double, double) { return std::numbers::pi; };

    using Unary = double (*)(double);
    Unary f1 = nullptr;
    if (id == "abs") f1 = [](double v) { return std::abs(v); };
    if (id == "sqrt") f1 = [](double v) { return std::sqrt(v); };
    if (id == "exp") f1 = [](double v) { return std::exp(v); };
    if (id == "log") f1 = [](double v) { return std::log(v); };
    if (id == "sin") f1 = [](double v) { return std::sin(v); };
    if (id == "cos") f1 = [](double v) { return std::cos(v); };
    if (f1) {
      expect('(');
      Fn arg = sum();
      expect(')');
      return [f1, arg](double x, double y) { return f1(arg(x, y)); };
    }
    if (id == "min" || id == "max") {
      expect('(');
      Fn a = sum();
      expect(',');
      Fn b = sum();
      expect(')');
      if (id == "min") return [a, b](double x, double y) { return std::min(a(x, y), b(x, y)); };
      return [a, b](double x, double y) { return std::max(a(x, y), b(x, y)); };
    }
    pos_ = start;
    fail("unknown name '" + id + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text) {
  Expression e;
  e.text_ = std::string(text);
  e.eval_ = Parser(e.text_).parse();
  return e;
}

}  // namespace bvgraph::cli
