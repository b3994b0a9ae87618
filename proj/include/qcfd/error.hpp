#pragma once

#include <stdexcept>
#include <string>

namespace qcfd {

// Error hierarchy shared by the whole library. The CLI maps these onto
// process exit codes: validation/index -> 2, numerical -> 3, capacity -> 4.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Violated preconditions: bad arguments, mismatched sizes, non-unitary gates.
class validation_error : public error {
public:
    using error::error;
};

// Qubit or element index out of range.
class index_error : public validation_error {
public:
    using validation_error::validation_error;
};

// Requests that exceed what fits in memory (e.g. too many qubits).
class capacity_error : public error {
public:
    using error::error;
};

// Numerically unusable inputs: singular matrices, poles, non-finite values.
class numerical_error : public error {
public:
    using error::error;
};

}  // namespace qcfd
