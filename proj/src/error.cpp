#include "slf/error.hpp"

namespace slf {

const char* status_name(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::InvalidArgument: return "invalid-argument";
    case Status::Shape: return "shape-error";
    case Status::Parse: return "parse-error";
    case Status::Schema: return "schema-error";
    case Status::Singular: return "singularity-error";
    case Status::DegenerateScale: return "degenerate-scale-error";
    case Status::InsufficientData: return "insufficient-data-error";
    case Status::Divergence: return "training-divergence-error";
    case Status::Io: return "io-error";
    case Status::Format: return "format-error";
    case Status::Mismatch: return "mismatch-error";
    case Status::Internal: return "internal-error";
  }
  return "unknown";
}

}  // namespace slf
