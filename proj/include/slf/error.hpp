#pragma once

#include <stdexcept>
#include <string>

namespace slf {

// Stable failure categories; the C API maps these 1:1 onto slf_status codes.
enum class Status {
  Ok = 0,
  InvalidArgument = 1,
  Shape = 2,
  Parse = 3,
  Schema = 4,
  Singular = 5,
  DegenerateScale = 6,
  InsufficientData = 7,
  Divergence = 8,
  Io = 9,
  Format = 10,
  Mismatch = 11,
  Internal = 12,
};

const char* status_name(Status s);

class Error : public std::runtime_error {
 public:
  Error(Status status, const std::string& what)
      : std::runtime_error(what), status_(status) {}

  Status status() const { return status_; }

 private:
  Status status_;
};

[[noreturn]] inline void fail(Status s, const std::string& msg) {
  throw Error(s, msg);
}

inline void require(bool cond, Status s, const std::string& msg) {
  if (!cond) fail(s, msg);
}

}  // namespace slf
