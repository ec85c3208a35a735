#pragma once

#include <stdexcept>
#include <string>

namespace simdist {

enum class Errc {
  invalid_argument,  // precondition violated by a caller-supplied value
  non_finite,        // arithmetic produced inf/nan
  empty_input,       // an operation that needs data got none
  io,                // file could not be read or written
  parse,             // malformed JSON
  schema,            // well-formed JSON with the wrong shape
  dangling_reference,
  config,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

  // Data errors map to a different CLI exit code than config errors.
  bool is_data_error() const noexcept {
    return code_ == Errc::io || code_ == Errc::parse || code_ == Errc::schema ||
           code_ == Errc::dangling_reference || code_ == Errc::empty_input;
  }

 private:
  Errc code_;
};

}  // namespace simdist
