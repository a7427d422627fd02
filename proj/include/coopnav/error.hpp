#pragma once

#include <stdexcept>
#include <string>

namespace coopnav {

// Raised for malformed inputs and violated preconditions. Messages are
// one-line and suitable for printing directly from the command line tool.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace coopnav
