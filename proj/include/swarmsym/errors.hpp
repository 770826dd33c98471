#pragma once

#include <stdexcept>
#include <string>

namespace swarmsym {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data or mismatched sizes between arguments.
class InputError : public Error {
 public:
  using Error::Error;
};

// A bounded enumeration (group closure, automorphism search, lattice
// expansion) exceeded its configured cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// A protocol rule could not produce a target point for some robot.
class ProtocolError : public Error {
 public:
  ProtocolError(int robot, const std::string& what)
      : Error("robot " + std::to_string(robot + 1) + ": " + what), robot_(robot) {}

  // Zero-based robot index.
  int robot() const { return robot_; }

 private:
  int robot_;
};

// A theorem-level invariant (no symmetry loss, gain classification) failed
// during a simulation. Always indicates a bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace swarmsym
