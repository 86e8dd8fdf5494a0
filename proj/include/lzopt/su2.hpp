#pragma once

#include <array>
#include <complex>

namespace lzopt {

using cplx = std::complex<double>;

/// Column vector of two complex amplitudes.
using Spinor = std::array<cplx, 2>;

enum class Pauli { x, y, z };

/// 2x2 complex matrix [[a, b], [c, d]], used for SU(2) propagators.
struct Unitary2 {
    cplx a{1.0, 0.0};
    cplx b{0.0, 0.0};
    cplx c{0.0, 0.0};
    cplx d{1.0, 0.0};

    static Unitary2 identity() { return {}; }

    Unitary2 adjoint() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }
    cplx det() const { return a * d - b * c; }
    cplx trace() const { return a + d; }

    Spinor apply(const Spinor& v) const { return {a * v[0] + b * v[1], c * v[0] + d * v[1]}; }

    friend Unitary2 operator*(const Unitary2& l, const Unitary2& r) {
        return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c,
                l.c * r.b + l.d * r.d};
    }
    friend Unitary2 operator-(const Unitary2& l, const Unitary2& r) {
        return {l.a - r.a, l.b - r.b, l.c - r.c, l.d - r.d};
    }
};

/// Largest entry modulus of l - r.
double max_entry_diff(const Unitary2& l, const Unitary2& r);

/// Spectral norm of a general 2x2 matrix.
double operator_norm(const Unitary2& m);

/// max |(U^dagger U - 1)_ij|
double unitarity_defect(const Unitary2& u);

/// e^{-i (a sigma3 + b sigma1) t}, in closed form.
///
/// Uses cos(st) 1 - i sin(st)/s (a sigma3 + b sigma1) with s = sqrt(a^2 + b^2);
/// below s*t = series_switch the sinc factor is taken from its Taylor series so
/// that s -> 0 returns the identity without a 0/0. Any finite t is accepted
/// (negative t gives the inverse).
Unitary2 expm_pauli(double a, double b, double t);

/// e^{-i phi sigma_axis}
Unitary2 expm_axis(Pauli axis, double phi);

/// Angles of U = e^{-i sigma3 tau3/2} e^{-i sigma1 tau1/2} e^{-i sigma2 tau2/2}.
struct EulerAngles {
    double tau3 = 0.0;
    double tau1 = 0.0;
    double tau2 = 0.0;
};

Unitary2 euler_compose(const EulerAngles& angles);

/// Inverse of euler_compose on SU(2).
///
/// Canonical branch: tau1 in [-pi/2, pi/2], tau2 in (-pi, pi], tau3 in (-2pi, 2pi].
/// At the chart singularity cos(tau1) = 0 the sigma3 and sigma2 factors act on
/// the same axis; tau2 = 0 is returned there.
/// Throws DomainError if u is not special-unitary to decompose_unitarity.
EulerAngles euler_decompose(const Unitary2& u);

}  // namespace lzopt
