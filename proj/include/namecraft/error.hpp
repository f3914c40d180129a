#pragma once

#include <stdexcept>
#include <string>

namespace namecraft {

// Raised for invalid inputs, malformed files and unsatisfiable requests.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace namecraft
