#pragma once

#include <stdexcept>
#include <string>

namespace chainlat {

// Precondition violations on otherwise well-formed inputs (mismatched ground
// size, invalid level index, profiles with unequal totals, ...).
struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Requests outside the sizes this implementation handles (n too large for an
// exhaustive mode, family over the memory guard, too many variables, ...).
struct CapabilityError : std::runtime_error {
    explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

// Violation of an internal invariant that the theory guarantees; reaching one
// of these indicates an implementation bug, not bad input.
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

} // namespace chainlat
