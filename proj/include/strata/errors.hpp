#pragma once

#include <stdexcept>
#include <string>

namespace strata {

struct ConstraintError : std::runtime_error {
    explicit ConstraintError(const std::string& what) : std::runtime_error(what) {}
};

// vacuum guard: inverse-enthalpy argument left the admissible interval
struct VacuumError : std::runtime_error {
    explicit VacuumError(const std::string& what) : std::runtime_error(what) {}
};

struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

struct ConstitutiveError : std::runtime_error {
    explicit ConstitutiveError(const std::string& what) : std::runtime_error(what) {}
};

struct SolveError : std::runtime_error {
    explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct CheckpointError : std::runtime_error {
    explicit CheckpointError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace strata
