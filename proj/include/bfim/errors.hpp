#pragma once

#include <stdexcept>
#include <string>

namespace bfim {

// Raised when an internal consistency check fails in a way that indicates a
// bug in the numerics rather than bad input: imaginary residue on a Hermitian
// expectation, an eigenvalue of a PSD matrix far below zero, a missing zero
// mode, and similar.
class numerical_integrity_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Requested problem size exceeds a hard implementation cap.
class capacity_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The free-fermion sector analysis covers anti-parallel boundary fields only.
class unsupported_sector_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shot estimation requires observables that split into a Z-diagonal group and
// an X-diagonal group.
class unsupported_grouping_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bfim
