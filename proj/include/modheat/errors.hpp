#pragma once

#include <stdexcept>
#include <string>

namespace modheat {

/// Thrown when an enumeration would exceed its configured vertex budget.
class ResourceLimitError : public std::runtime_error {
public:
    explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an iterative numerical procedure fails to converge.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace modheat
