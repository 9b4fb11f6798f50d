#include "pdsphere/error.hpp"

namespace pdsphere {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kParameter: return "parameter";
    case ErrorKind::kLength: return "length";
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kRange: return "range";
    case ErrorKind::kStructural: return "structural";
    case ErrorKind::kEmptyDiagram: return "empty-diagram";
    case ErrorKind::kConfiguration: return "configuration";
    case ErrorKind::kFileNotFound: return "file-not-found";
    case ErrorKind::kParse: return "parse";
  }
  return "unknown";
}

}  // namespace pdsphere
