#include "lzopt/su2.hpp"

#include "lzopt/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lzopt {

double max_entry_diff(const Unitary2& l, const Unitary2& r) {
    const Unitary2 m = l - r;
    return std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
}

double operator_norm(const Unitary2& m) {
    // Largest eigenvalue of the Hermitian matrix m^dagger m.
    const Unitary2 h = m.adjoint() * m;
    const double tr = h.a.real() + h.d.real();
    const double det = h.det().real();
    const double disc = std::max(0.0, tr * tr / 4.0 - det);
    return std::sqrt(std::max(0.0, tr / 2.0 + std::sqrt(disc)));
}

double unitarity_defect(const Unitary2& u) {
    return max_entry_diff(u.adjoint() * u, Unitary2::identity());
}

Unitary2 expm_pauli(double a, double b, double t) {
    require_finite(a, "sigma3 coefficient");
    require_finite(b, "sigma1 coefficient");
    require_finite(t, "duration");

    const double s = std::hypot(a, b);
    const double x = s * t;
    double cos_x;
    double sin_over_s;  // sin(s t) / s
    if (std::abs(x) < default_tolerances().series_switch) {
        cos_x = 1.0 - x * x / 2.0;
        sin_over_s = t * (1.0 - x * x / 6.0);
    } else {
        cos_x = std::cos(x);
        sin_over_s = std::sin(x) / s;
    }
    const cplx mi{0.0, -sin_over_s};
    return {cos_x + mi * a, mi * b, mi * b, cos_x - mi * a};
}

Unitary2 expm_axis(Pauli axis, double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    switch (axis) {
        case Pauli::x:
            return {c, {0.0, -s}, {0.0, -s}, c};
        case Pauli::y:
            return {c, -s, s, c};
        case Pauli::z:
            return {{c, -s}, 0.0, 0.0, {c, s}};
    }
    return Unitary2::identity();
}

Unitary2 euler_compose(const EulerAngles& angles) {
    require_finite(angles.tau3, "tau3");
    require_finite(angles.tau1, "tau1");
    require_finite(angles.tau2, "tau2");
    return expm_axis(Pauli::z, angles.tau3 / 2.0) * expm_axis(Pauli::x, angles.tau1 / 2.0) *
           expm_axis(Pauli::y, angles.tau2 / 2.0);
}

EulerAngles euler_decompose(const Unitary2& u) {
    const double tol = default_tolerances().decompose_unitarity;
    if (unitarity_defect(u) > tol || std::abs(u.det() - 1.0) > tol) {
        throw DomainError("euler_decompose: matrix is not special-unitary");
    }
    // U = [[p, -conj(q)], [q, conj(p)]]. With c1 = cos(tau1/2) etc. one has
    //   p q         = (cos tau1 sin tau2 - i sin tau1) / 2
    //   |p|^2-|q|^2 = cos tau1 cos tau2
    // which fixes tau1 and tau2 without reference to tau3.
    const cplx p = u.a;
    const cplx q = u.c;
    const cplx pq = p * q;
    const double sin1 = -2.0 * pq.imag();
    const double cos1_sin2 = 2.0 * pq.real();
    const double cos1_cos2 = std::norm(p) - std::norm(q);
    const double cos1 = std::hypot(cos1_sin2, cos1_cos2);

    EulerAngles out;
    out.tau1 = std::atan2(sin1, cos1);
    out.tau2 = cos1 > 1e-14 ? std::atan2(cos1_sin2, cos1_cos2) : 0.0;
    if (out.tau2 <= -std::numbers::pi) {
        out.tau2 += 2.0 * std::numbers::pi;
    }

    // Recover tau3 from whichever of p, q carries the larger weight.
    const double c1 = std::cos(out.tau1 / 2.0);
    const double s1 = std::sin(out.tau1 / 2.0);
    const double c2 = std::cos(out.tau2 / 2.0);
    const double s2 = std::sin(out.tau2 / 2.0);
    const cplx p_core{c1 * c2, -s1 * s2};  // p = e^{-i tau3/2} p_core
    const cplx q_core{c1 * s2, -s1 * c2};  // q = e^{+i tau3/2} q_core
    double half;
    if (std::abs(p_core) >= std::abs(q_core)) {
        half = -std::arg(p * std::conj(p_core));
    } else {
        half = std::arg(q * std::conj(q_core));
    }
    out.tau3 = 2.0 * half;
    return out;
}

}  // namespace lzopt
