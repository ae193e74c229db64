#pragma once

#include <stdexcept>
#include <string>

namespace trplan {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Steering asked to connect a state to itself.
struct DegenerateQuery : Error {
  using Error::Error;
};

/// Arc length outside [0, length] on a path query.
struct OutOfRange : Error {
  using Error::Error;
};

struct BadCount : Error {
  using Error::Error;
};

/// Ray cast or risk query from a point that is not in free space.
struct InsideObstacle : Error {
  using Error::Error;
};

struct SamplingStalled : Error {
  using Error::Error;
};

struct InvalidEndpoints : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

/// Invariant violation in user input; field() names the offending key path.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace trplan
