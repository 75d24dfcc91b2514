#ifndef LINEXT_ERRORS_HPP
#define LINEXT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace linext {

// Bad user input: malformed documents, out-of-range ids, cycles, invalid
// parameters. The CLI maps these to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A size guard or a safety cap was hit (exact-count cap, enumeration limit,
// CFTP recursion depth). The CLI maps these to exit code 3.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace linext

#endif
