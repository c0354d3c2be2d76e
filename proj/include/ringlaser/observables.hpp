// emitted-field observables of the atomic state

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ringlaser/couplings.hpp"
#include "ringlaser/geometry.hpp"
#include "ringlaser/hilbert.hpp"

namespace ringlaser {

// C(i, j) = <sigma_i^+ sigma_j^->
Eigen::MatrixXcd correlation_matrix(const DensityMatrix& rho);

// I_out = sum_ij Gamma_ij <sigma_i^+ sigma_j^->, in units of Gamma0.
double output_intensity(const DensityMatrix& rho, const CouplingMatrices& couplings);

// Position-free second-order correlation at zero delay (all atoms summed).
double g2_zero(const DensityMatrix& rho);

// <psi_sym, g| rho |psi_sym, g>; ring atoms are 0..n-2.
double symmetric_population(const DensityMatrix& rho);

// <E^-(r) E^+(r)> with the constant prefactor |mu|^2 k0^4 / eps0^2 dropped.
double intensity_at(const Vec3& point, const DensityMatrix& rho, const AtomArray& array);

// Second-order correlation of the full field at `point`. With a polarization
// the field is projected on it first; otherwise all components are summed.
double field_g2(const Vec3& point, const DensityMatrix& rho, const AtomArray& array,
                std::optional<Vec3> polarization = std::nullopt);

enum class PlaneNormal { x, y, z };

struct PlaneSpec {
    PlaneNormal normal{PlaneNormal::z};
    double offset{0.0};      // coordinate along the normal
    double half_extent{2.0}; // grid covers [-half_extent, half_extent]^2
    std::size_t resolution{101};
};

struct IntensityMap {
    PlaneSpec plane;
    std::vector<double> u; // first in-plane axis (x, or y for an x-normal)
    std::vector<double> v; // second in-plane axis
    Eigen::MatrixXd values; // values(iu, iv)

    Vec3 point(std::size_t iu, std::size_t iv) const;
};

IntensityMap intensity_map(const PlaneSpec& plane, const DensityMatrix& rho,
                           const AtomArray& array);

} // namespace ringlaser
