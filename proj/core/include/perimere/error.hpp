#pragma once

#include <stdexcept>
#include <string>

namespace perimere {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: bad documents, singular matrices,
/// dimension mismatches, filter violations.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A brute-force enumeration would exceed its configured point budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace perimere
