#pragma once

#include <stdexcept>
#include <string>

namespace marp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed workspace, scenario, or file contents.
class InputError : public Error {
 public:
  using Error::Error;
};

// A vertex would hold more objects than its capacity allows.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& vertex, int occupancy, int capacity)
      : Error("capacity exceeded at '" + vertex + "': " + std::to_string(occupancy) + " > " +
              std::to_string(capacity)),
        vertex_(vertex) {}

  const std::string& vertex() const { return vertex_; }

 private:
  std::string vertex_;
};

// A search exceeded its configured state budget.
class SearchLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace marp
