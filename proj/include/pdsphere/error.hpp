#pragma once

#include <stdexcept>
#include <string>

namespace pdsphere {

enum class ErrorKind {
  kParameter,
  kLength,
  kShape,
  kRange,
  kStructural,
  kEmptyDiagram,
  kConfiguration,
  kFileNotFound,
  kParse,
};

const char* to_string(ErrorKind kind) noexcept;

// Base of every exception thrown by the library. The kind drives the CLI
// exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define PDSPHERE_DEFINE_ERROR(Name, Kind)                                   \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

PDSPHERE_DEFINE_ERROR(ParameterError, kParameter)
PDSPHERE_DEFINE_ERROR(LengthError, kLength)
PDSPHERE_DEFINE_ERROR(ShapeError, kShape)
PDSPHERE_DEFINE_ERROR(RangeError, kRange)
PDSPHERE_DEFINE_ERROR(StructuralError, kStructural)
PDSPHERE_DEFINE_ERROR(EmptyDiagramError, kEmptyDiagram)
PDSPHERE_DEFINE_ERROR(ConfigurationError, kConfiguration)
PDSPHERE_DEFINE_ERROR(FileNotFoundError, kFileNotFound)
PDSPHERE_DEFINE_ERROR(ParseError, kParse)

#undef PDSPHERE_DEFINE_ERROR

}  // namespace pdsphere
