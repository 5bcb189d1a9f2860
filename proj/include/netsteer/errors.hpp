#ifndef NETSTEER_ERRORS_HPP
#define NETSTEER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace netsteer {

// Shapes or index structures that do not fit together.
class StructuralError : public std::invalid_argument {
 public:
  explicit StructuralError(const std::string& what) : std::invalid_argument(what) {}
};

// Input violates a documented precondition (e.g. non-Hermitian matrix).
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// Scalar parameter outside its admissible range.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A configured size cap would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace netsteer

#endif  // NETSTEER_ERRORS_HPP
