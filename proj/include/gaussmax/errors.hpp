#pragma once

#include <stdexcept>
#include <string>

namespace gaussmax {

/// A bound's validity condition (gate) is not satisfied by the inputs.
class gate_error : public std::runtime_error {
public:
    explicit gate_error(const std::string& what) : std::runtime_error(what) {}
};

/// A matrix failed positive-definiteness during triangular factorization.
/// pivot() is the position (within the requested ordering) of the failing pivot.
class decomposition_error : public std::runtime_error {
public:
    decomposition_error(const std::string& what, int pivot)
        : std::runtime_error(what), pivot_(pivot) {}
    int pivot() const noexcept { return pivot_; }

private:
    int pivot_;
};

/// An internal numeric computation failed to converge or lost precision.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// A requested computation exceeds the configured size caps.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gaussmax
