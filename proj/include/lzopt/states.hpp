#pragma once

#include "lzopt/su2.hpp"

#include <optional>

namespace lzopt {

/// Normalized pure state c0|0> + c1|1> with sigma3|0> = +|0>, sigma3|1> = -|1>.
class QubitState {
public:
    QubitState() = default;

    /// Normalizes the amplitudes. Throws DomainError for a zero or non-finite vector.
    QubitState(cplx c0, cplx c1);

    static QubitState zero() { return {1.0, 0.0}; }
    static QubitState one() { return {0.0, 1.0}; }

    cplx c0() const { return amp_[0]; }
    cplx c1() const { return amp_[1]; }
    const Spinor& amplitudes() const { return amp_; }

private:
    Spinor amp_{cplx{1.0, 0.0}, cplx{0.0, 0.0}};
};

/// True when |c0|^2 + |c1|^2 is within tol of 1.
bool is_normalized(cplx c0, cplx c1, double tol);

/// Drive parameters for H = Gamma sigma3 + omega sigma1. All in angular frequency.
struct LzParams {
    double gamma = 0.0;
    double omega = 1.0;
    std::optional<double> c;          // bound |Gamma(t)| <= c
    std::optional<double> omega_max;  // bound |omega(t)| <= omega_max

    /// Throws DomainError unless omega > 0 and the optional bounds are > 0.
    void validate() const;

    /// Coupling to use in the minimal-time formula: omega_max when omega(t) is a control.
    double effective_omega() const { return omega_max.value_or(omega); }
};

enum class Level { ground, excited };

/// Eigenvector of gamma sigma3 + omega sigma1, with positive real first component.
/// The ground-state eigenvalue is -sqrt(gamma^2 + omega^2).
QubitState lz_eigenstate(double gamma, double omega, Level level);

/// <a|b>, antilinear in a.
cplx overlap(const QubitState& a, const QubitState& b);

/// |<target|achieved>|, or its square when squared is set.
double fidelity(const QubitState& achieved, const QubitState& target, bool squared = false);

/// 1 - fidelity computed from the orthogonal component, accurate when tiny.
double infidelity(const QubitState& achieved, const QubitState& target, bool squared = false);

/// Components in the sigma1 eigenbasis {(|0>+|1>)/sqrt2, (|0>-|1>)/sqrt2}.
QubitState to_sigma1_basis(const QubitState& s);

QubitState apply(const Unitary2& u, const QubitState& s);

}  // namespace lzopt
