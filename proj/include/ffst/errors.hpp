#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ffst {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// non-finite drive sample or state
struct IntegrationError : std::runtime_error {
    IntegrationError(const std::string& what, std::size_t index)
        : std::runtime_error(what + " (index " + std::to_string(index) + ")"), index(index) {}
    std::size_t index;
};

struct SynthesisError : std::runtime_error {
    SynthesisError(const std::string& what, double time)
        : std::runtime_error(what + " (t = " + std::to_string(time) + ")"), time(time) {}
    double time;
};

struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OptimizerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ffst
