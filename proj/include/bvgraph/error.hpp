#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bvgraph {

enum class Errc {
  invalid_size,
  invalid_weight,
  invalid_input,
  invalid_data,
  ill_posed,
  invalid_support,
  invalid_range,
  invalid_pair,
  invalid_probe,
  invalid_sequence,
  parse_error,
  io_error,
};

std::string_view to_string(Errc code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI) can distinguish user error from broken invariants.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace bvgraph
