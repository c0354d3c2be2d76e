#include "ringlaser/couplings.hpp"

#include <cmath>

#include "ringlaser/error.hpp"

namespace ringlaser {

namespace {

constexpr double min_separation = 1e-12;
constexpr double far_field_radius = 10.0;

} // namespace

CVec3 greens_dot_dipole(const Vec3& separation, const Vec3& dipole) {
    const double r = separation.norm();
    if (r < min_separation) {
        fail(ErrorKind::singular_evaluation, "Green's tensor evaluated at zero separation");
    }
    const Vec3 rhat = separation / r;
    const double x = k0 * r;
    const cplx prefactor = std::exp(cplx(0.0, x)) / (4.0 * pi * r);
    const cplx near = cplx(1.0 / (x * x), -1.0 / x);

    const Vec3 transverse = rhat.cross(dipole).cross(rhat);
    const Vec3 longitudinal = 3.0 * rhat * rhat.dot(dipole) - dipole;
    return prefactor * (transverse.cast<cplx>() + near * longitudinal.cast<cplx>());
}

CouplingMatrices coupling_matrices(const AtomArray& array) {
    const auto n = static_cast<Eigen::Index>(array.atom_count());
    CouplingMatrices c{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};

    for (Eigen::Index i = 0; i < n; ++i) {
        c.gamma(i, i) = gamma0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const Vec3 sep = array.positions[i] - array.positions[j];
            if (sep.norm() < min_separation) {
                fail(ErrorKind::invalid_geometry, "coincident atom positions");
            }
            const cplx overlap = array.dipoles[i].cast<cplx>().dot(
                greens_dot_dipole(sep, array.dipoles[j]));
            // dot() conjugates its first argument; dipoles are real anyway.
            const double om = -3.0 * pi * gamma0 / k0 * overlap.real();
            const double ga = 6.0 * pi * gamma0 / k0 * overlap.imag();
            c.omega(i, j) = c.omega(j, i) = om;
            c.gamma(i, j) = c.gamma(j, i) = ga;
        }
    }
    return c;
}

cplx far_field_factor(const Vec3& observation) {
    const double r = observation.norm();
    if (r < far_field_radius) {
        fail(ErrorKind::not_in_far_field,
             "far-field factor needs |r| >= 10 lambda0, got " + std::to_string(r));
    }
    const double x = k0 * r;
    return std::exp(cplx(0.0, x)) / (4.0 * pi * r) * cplx(1.0 - 1.0 / (x * x), 1.0 / x);
}

} // namespace ringlaser
