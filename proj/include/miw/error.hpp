#pragma once

#include <stdexcept>
#include <string>

namespace miw {

/// Input outside an operation's domain (bad k, odd N, x = 0 where a kernel diverges, ...).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure failed to deliver: non-bracketing root search,
/// iteration limit, singular recursion sum, overflow.
class numerical_error : public std::runtime_error {
public:
    numerical_error(std::string cause, const std::string& what)
        : std::runtime_error(what), cause_(std::move(cause)) {}

    /// Short machine-readable tag: "bracket", "iteration-limit", "singular-sum", ...
    [[nodiscard]] const std::string& cause() const noexcept { return cause_; }

private:
    std::string cause_;
};

}  // namespace miw
