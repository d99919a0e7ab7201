#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace bvgraph::cli {

/// Arithmetic expression in the grid coordinates x, y and r, the distance
/// to (1/2, 1/2). Supports + - * / ^, unary minus, parentheses, the
/// constant pi and abs, sqrt, exp, log, sin, cos, min, max.
class Expression {
 public:
  /// Throws Error(parse_error) naming the offending column.
  static Expression parse(std::string_view text);

  double operator()(double x, double y) const { return eval_(x, y); }
  const std::string& text() const noexcept { return text_; }

 private:
  std::string text_;
  std::function<double(double, double)> eval_;
};

}  // namespace bvgraph::cli
