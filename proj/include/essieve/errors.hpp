#pragma once

#include <stdexcept>
#include <string>

namespace ess {

struct NotInvertible : std::domain_error {
    using std::domain_error::domain_error;
};

struct DegenerateSplit : std::domain_error {
    using std::domain_error::domain_error;
};

struct InvalidQuadruple : std::domain_error {
    using std::domain_error::domain_error;
};

struct DuplicateDenominators : std::domain_error {
    using std::domain_error::domain_error;
};

struct InvalidModulus : std::domain_error {
    using std::domain_error::domain_error;
};

struct EvenModulus : std::domain_error {
    using std::domain_error::domain_error;
};

struct PolicyModulusInvalid : std::domain_error {
    using std::domain_error::domain_error;
};

struct EmptyWheel : std::domain_error {
    using std::domain_error::domain_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckpointCorrupt : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ess
