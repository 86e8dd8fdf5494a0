#pragma once

#include <stdexcept>
#include <string>

namespace lzopt {

/// Numerical tolerances used across the library. One record so that the
/// CLI (and the QOC_LZ_TOL environment variable) can override them in one place.
struct Tolerances {
    double unitarity = 1e-12;        // U^dagger U = 1 entrywise
    double decompose_unitarity = 1e-8;  // euler_decompose input check
    double series_switch = 1e-8;     // s*t below which expm_pauli uses the series branch
    double clamp = 1e-12;            // allowed excursion of arcsin/arccos arguments
    double normalization = 1e-12;
    double integration_abs = 1e-10;
    double integration_rel = 1e-10;
    double singularity = 1e-6;       // |cos tau1| guard for the Euler-angle system
    int ramp_substeps = 64;
};

/// Process-wide defaults. Reads QOC_LZ_TOL once (overrides integration tolerances).
const Tolerances& default_tolerances();

/// Invalid input: non-finite numbers, non-positive frequencies, non-unitary matrices.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical integration could not complete.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The Euler-angle chart hit |cos tau1| ~ 0.
class SingularityError : public IntegrationError {
public:
    using IntegrationError::IntegrationError;
};

/// Protocol requested for the wrong control regime.
class RegimeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An internal solve that must succeed did not; indicates a bug.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

void require_finite(double value, const std::string& what);
void require_positive(double value, const std::string& what);

}  // namespace lzopt
