#include "simdist/error.hpp"

namespace simdist {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::non_finite: return "non-finite result";
    case Errc::empty_input: return "empty input";
    case Errc::io: return "i/o error";
    case Errc::parse: return "parse error";
    case Errc::schema: return "schema error";
    case Errc::dangling_reference: return "dangling reference";
    case Errc::config: return "configuration error";
  }
  return "unknown error";
}

}  // namespace simdist
