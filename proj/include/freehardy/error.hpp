#pragma once

#include <stdexcept>
#include <string>

namespace freehardy {

enum class ErrorKind {
  InvalidInput,
  Capacity,
  Parse,
  NotInvertible,
  NotSchur,
  InvalidMoments,
  Inconsistency,
  NumericalSingularity,
  CeObstruction,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, long position = -1);

  ErrorKind kind() const noexcept { return kind_; }
  // Character offset into parser input, or -1.
  long position() const noexcept { return position_; }

 private:
  ErrorKind kind_;
  long position_;
};

}  // namespace freehardy
