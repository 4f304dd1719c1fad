#pragma once

#include <stdexcept>
#include <string>

namespace dualq {

// Failure categories. The CLI maps them onto exit codes 2..5.
enum class ErrorKind {
    Input,      // malformed arguments, schema errors, precondition failures
    Dimension,  // mismatched ambient dimensions
    Refusal,    // a decision procedure declined (verdict attached by caller)
    Invariant,  // an internal invariant did not hold
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail_input(const std::string& msg) {
    throw Error(ErrorKind::Input, msg);
}

[[noreturn]] inline void fail_dimension(const std::string& msg) {
    throw Error(ErrorKind::Dimension, msg);
}

[[noreturn]] inline void fail_invariant(const std::string& msg) {
    throw Error(ErrorKind::Invariant, msg);
}

inline void require_same_dim(int a, int b, const char* what) {
    if (a != b) {
        fail_dimension(std::string(what) + ": dimension " + std::to_string(a) +
                       " vs " + std::to_string(b));
    }
}

}  // namespace dualq
