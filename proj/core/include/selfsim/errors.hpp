#pragma once

#include <stdexcept>
#include <string>

namespace selfsim {

/// Bad user input: malformed files, mismatched sample spaces, invalid words.
class InvalidInputError : public std::runtime_error {
public:
  explicit InvalidInputError(const std::string& what) : std::runtime_error(what) {}
};

/// A configured cap (cell count, pair budget, search depth) was exceeded.
/// The message names the cap that would have been required.
class ResourceLimitError : public std::runtime_error {
public:
  explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

/// A postcondition of an earlier step was violated downstream.
class InternalError : public std::runtime_error {
public:
  explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace selfsim
