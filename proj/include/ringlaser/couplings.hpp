// vacuum Green's tensor and dipole-dipole coupling matrices

#pragma once

#include <complex>

#include <Eigen/Dense>

#include "ringlaser/geometry.hpp"

namespace ringlaser {

using cplx = std::complex<double>;
using CVec3 = Eigen::Vector3cd;

// Rates in units of the single-atom decay rate Gamma0 (== 1).
inline constexpr double gamma0 = 1.0;

struct CouplingMatrices {
    Eigen::MatrixXd omega; // dispersive, zero diagonal
    Eigen::MatrixXd gamma; // dissipative, gamma0 on the diagonal

    Eigen::Index size() const { return omega.rows(); }
};

// G(r, omega0) . mu for a dipole at the origin observed at `separation`.
// Throws singular_evaluation for |separation| == 0.
CVec3 greens_dot_dipole(const Vec3& separation, const Vec3& dipole);

CouplingMatrices coupling_matrices(const AtomArray& array);

// Common far-field factor multiplying z for observation perpendicular to
// z-polarized dipoles; requires |observation| >= 10 lambda0.
cplx far_field_factor(const Vec3& observation);

} // namespace ringlaser
