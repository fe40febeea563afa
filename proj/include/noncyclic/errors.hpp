#pragma once

#include <stdexcept>
#include <string>

namespace noncyclic {

/// Malformed input or violated precondition.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A configured resource bound (factoring bits, enumeration size, box volume)
/// would be exceeded. Never returned as a partial result.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An identity that must hold by construction failed; indicates an arithmetic
/// bug or a counterexample to a theorem the code checks.
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace noncyclic
