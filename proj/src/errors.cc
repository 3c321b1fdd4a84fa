#include "ncerec/errors.h"

namespace ncerec {

NotPositiveDefiniteError::NotPositiveDefiniteError(std::size_t pivot, double value)
    : std::runtime_error("matrix is not positive definite: pivot " + std::to_string(pivot) +
                         " is " + std::to_string(value)),
      pivot_(pivot),
      value_(value) {}

FormatError::FormatError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

}  // namespace ncerec
