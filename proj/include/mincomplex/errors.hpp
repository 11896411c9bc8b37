#pragma once

#include <stdexcept>
#include <string>

namespace mincomplex {

/// Malformed or geometrically invalid input (bad fan file, overlapping cones, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// New module generators showed up in the guard zone at the top of the degree
/// window, so the windowed result cannot be trusted.
class WindowExhausted : public std::runtime_error {
 public:
  WindowExhausted(int cone, int degree, const std::string& what)
      : std::runtime_error(what + " (cone " + std::to_string(cone) + ", degree " +
                           std::to_string(degree) + ")"),
        cone_(cone),
        degree_(degree) {}

  int cone() const { return cone_; }
  int degree() const { return degree_; }

 private:
  int cone_;
  int degree_;
};

/// A property that the theory guarantees did not hold; always an implementation
/// or window fault.
class CertificateFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mincomplex
