// ring of emitters with a gain atom at its center

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace ringlaser {

// All lengths are in units of the transition wavelength lambda0.
using Vec3 = Eigen::Vector3d;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double k0 = 2.0 * pi; // wavenumber in 1/lambda0

struct AtomArray {
    std::vector<Vec3> positions; // ring atoms 0..N-1, then the center atom
    std::vector<Vec3> dipoles;   // unit vectors
    std::size_t ring_count{0};
    std::size_t center_index{0}; // always == ring_count

    std::size_t atom_count() const { return positions.size(); }
    double ring_radius() const;
};

// Ring of n_ring atoms in the xy-plane, nearest-neighbour chord `spacing`,
// atom 0 on the +x axis, all dipoles along +z. The gain atom sits at the origin.
AtomArray build_ring_with_center(std::size_t n_ring, double spacing);

// Radius of a regular n-gon with side `spacing`.
double ring_radius_for(std::size_t n_ring, double spacing);

} // namespace ringlaser
