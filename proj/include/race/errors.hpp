#pragma once

#include <stdexcept>
#include <string>

namespace race {

// Violated operation precondition or malformed input. CLI exit code 2.
struct contract_error : std::invalid_argument {
    explicit contract_error(const std::string& what) : std::invalid_argument(what) {}
};

// Iterative solve did not reach tolerance. CLI exit code 3.
struct convergence_error : std::runtime_error {
    double residual;
    convergence_error(const std::string& what, double res)
        : std::runtime_error(what), residual(res) {}
};

// Internal consistency check failed. CLI exit code 4.
struct invariant_error : std::logic_error {
    explicit invariant_error(const std::string& what) : std::logic_error(what) {}
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw contract_error(what);
}

}  // namespace race
