#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace crrd {

// Precondition violations (bad shapes, out-of-range parameters) are reported
// as std::invalid_argument. The two types below carry solver verdicts that
// callers usually want to branch on.

/// No channel satisfies the distortion budgets.
class InfeasibleBudget : public std::runtime_error {
public:
    explicit InfeasibleBudget(const std::string& what) : std::runtime_error(what) {}
};

/// An enumeration would exceed its configured size limit.
class GuardExceeded : public std::runtime_error {
public:
    GuardExceeded(const std::string& what, std::uint64_t requested, std::uint64_t guard)
        : std::runtime_error(what + " (requested " + std::to_string(requested) + ", guard " +
                             std::to_string(guard) + ")"),
          requested_(requested), guard_(guard) {}

    std::uint64_t requested() const noexcept { return requested_; }
    std::uint64_t guard() const noexcept { return guard_; }

private:
    std::uint64_t requested_;
    std::uint64_t guard_;
};

} // namespace crrd
