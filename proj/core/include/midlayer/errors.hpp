#pragma once

#include <stdexcept>
#include <string>

namespace midlayer {

// Stable error classes. The CLI maps these to process exit codes:
//   0 success, 2 parse, 3 scale, 4 shape, 5 invariant failure.
enum class errc : int {
  parse = 2,
  scale = 3,
  shape = 4,
  invariant = 5,
};

class error : public std::runtime_error {
public:
  error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  errc code() const noexcept { return code_; }
  virtual const char* label() const noexcept { return "error"; }

private:
  errc code_;
};

// Malformed or out-of-range input.
struct parse_error : error {
  explicit parse_error(const std::string& msg) : error(errc::parse, msg) {}
  const char* label() const noexcept override { return "parse"; }
};

// Requested computation exceeds the configured enumeration limits.
struct scale_error : error {
  explicit scale_error(const std::string& msg) : error(errc::scale, msg) {}
  const char* label() const noexcept override { return "scale"; }
};

// Graph is not the middle-two-layers case required by the polymer machinery.
struct shape_error : error {
  explicit shape_error(const std::string& msg) : error(errc::shape, msg) {}
  const char* label() const noexcept override { return "shape"; }
};

struct invariant_error : error {
  explicit invariant_error(const std::string& msg) : error(errc::invariant, msg) {}
  const char* label() const noexcept override { return "invariant"; }
};

// A persisted cache file failed validation. Parse-class exit code, but kept
// distinct so callers can tell a corrupt cache from bad user input.
struct cache_error : error {
  explicit cache_error(const std::string& msg) : error(errc::parse, msg) {}
  const char* label() const noexcept override { return "cache"; }
};

}  // namespace midlayer
