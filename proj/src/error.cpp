#include "bvgraph/error.hpp"

namespace bvgraph {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_size: return "invalid-size";
    case Errc::invalid_weight: return "invalid-weight";
    case Errc::invalid_input: return "invalid-input";
    case Errc::invalid_data: return "invalid-data";
    case Errc::ill_posed: return "ill-posed-problem";
    case Errc::invalid_support: return "invalid-support";
    case Errc::invalid_range: return "invalid-range";
    case Errc::invalid_pair: return "invalid-pair";
    case Errc::invalid_probe: return "invalid-probe";
    case Errc::invalid_sequence: return "invalid-sequence";
    case Errc::parse_error: return "parse-error";
    case Errc::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace bvgraph
