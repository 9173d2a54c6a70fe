#ifndef REPLAN_ERRORS_HPP
#define REPLAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace replan {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NonFiniteState : public Error {
 public:
  explicit NonFiniteState(const std::string& what) : Error(what) {}
};

class NonFiniteCost : public Error {
 public:
  explicit NonFiniteCost(const std::string& what) : Error(what) {}
};

class NonFiniteEntry : public Error {
 public:
  explicit NonFiniteEntry(const std::string& what) : Error(what) {}
};

class ShapeMismatch : public Error {
 public:
  explicit ShapeMismatch(const std::string& what) : Error(what) {}
};

class IndexOutOfRange : public Error {
 public:
  explicit IndexOutOfRange(const std::string& what) : Error(what) {}
};

class DegenerateVelocity : public Error {
 public:
  explicit DegenerateVelocity(const std::string& what) : Error(what) {}
};

class LineSearchFailure : public Error {
 public:
  explicit LineSearchFailure(const std::string& what) : Error(what) {}
};

class SingularHessian : public Error {
 public:
  explicit SingularHessian(const std::string& what) : Error(what) {}
};

class NonPositiveTrace : public Error {
 public:
  explicit NonPositiveTrace(const std::string& what) : Error(what) {}
};

class DimensionTooLarge : public Error {
 public:
  explicit DimensionTooLarge(const std::string& what) : Error(what) {}
};

class EmptyImportantSet : public Error {
 public:
  explicit EmptyImportantSet(const std::string& what) : Error(what) {}
};

class OutOfGridBounds : public Error {
 public:
  explicit OutOfGridBounds(const std::string& what) : Error(what) {}
};

class MissingCorner : public Error {
 public:
  explicit MissingCorner(const std::string& what) : Error(what) {}
};

class NodeSolveFailure : public Error {
 public:
  explicit NodeSolveFailure(const std::string& what) : Error(what) {}
};

class InvalidGrid : public Error {
 public:
  explicit InvalidGrid(const std::string& what) : Error(what) {}
};

class FormatVersionMismatch : public Error {
 public:
  explicit FormatVersionMismatch(const std::string& what) : Error(what) {}
};

class ChecksumMismatch : public Error {
 public:
  explicit ChecksumMismatch(const std::string& what) : Error(what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

class OptimizationFailed : public Error {
 public:
  explicit OptimizationFailed(const std::string& what) : Error(what) {}
};

class TooManyFailedSamples : public Error {
 public:
  explicit TooManyFailedSamples(const std::string& what) : Error(what) {}
};

}  // namespace replan

#endif  // REPLAN_ERRORS_HPP
