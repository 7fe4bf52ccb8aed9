#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tubal {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands have incompatible shapes.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A transform result that was required to be real has an imaginary
/// residue above tolerance.
class NonRealResult : public Error {
 public:
  using Error::Error;
};

/// The dense SVD backend failed to converge on a frontal slice.
class SvdFailure : public Error {
 public:
  using Error::Error;
};

/// A rank target N is outside [0, min(n1,n2)] or the per-slice vector
/// has the wrong length.
class InvalidRankTarget : public Error {
 public:
  using Error::Error;
};

/// Requested factor rank is outside [1, min(n1,n2)].
class InvalidRank : public Error {
 public:
  using Error::Error;
};

/// Solver configuration or solver input is unusable.
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

/// Reference tensor of a relative metric is identically zero.
class ZeroReference : public Error {
 public:
  using Error::Error;
};

/// Malformed or truncated file; carries the offending byte offset.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::uint64_t byte_offset)
      : Error(what + " (byte offset " + std::to_string(byte_offset) + ")"),
        offset_(byte_offset) {}
  std::uint64_t byte_offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

/// Images in a stack do not all share the same dimensions.
class InconsistentStack : public Error {
 public:
  using Error::Error;
};

}  // namespace tubal
