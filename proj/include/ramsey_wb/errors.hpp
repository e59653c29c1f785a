#pragma once

#include <stdexcept>
#include <string>

namespace ramsey_wb {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define RAMSEY_WB_ERROR(Name)            \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

RAMSEY_WB_ERROR(DimensionError);
RAMSEY_WB_ERROR(DomainError);
RAMSEY_WB_ERROR(RangeError);
RAMSEY_WB_ERROR(GeometryError);
RAMSEY_WB_ERROR(ConcentricError);
RAMSEY_WB_ERROR(PreconditionError);
RAMSEY_WB_ERROR(BoundError);
RAMSEY_WB_ERROR(PaletteError);
RAMSEY_WB_ERROR(PatternError);
RAMSEY_WB_ERROR(InternalError);

// Search limits: these map to exit code 2 in the CLI.
RAMSEY_WB_ERROR(ResourceError);
RAMSEY_WB_ERROR(SearchExhausted);

#undef RAMSEY_WB_ERROR

// Malformed input text. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace ramsey_wb
