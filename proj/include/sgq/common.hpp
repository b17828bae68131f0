#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sgq {

using VertexId = uint32_t;
using LabelId = uint32_t;

enum class Dir : uint8_t { Forward = 0, Backward = 1 };

inline Dir reverse(Dir d) { return d == Dir::Forward ? Dir::Backward : Dir::Forward; }
inline const char* to_string(Dir d) { return d == Dir::Forward ? "fwd" : "bwd"; }

enum class Semantics : uint8_t { Homomorphic, Injective };

// Error hierarchy; the CLI maps these onto exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : Error {
  using Error::Error;
};

// Malformed input rows, bad query text, referential problems.
struct ValidationError : Error {
  using Error::Error;
};

struct ParseError : ValidationError {
  ParseError(const std::string& msg, size_t position)
      : ValidationError(msg + " (at " + std::to_string(position) + ")"), position(position) {}
  size_t position;  // 1-based line number or character offset
};

// Refusal to run an exponential enumeration without --force.
struct GuardError : Error {
  using Error::Error;
};

}  // namespace sgq
