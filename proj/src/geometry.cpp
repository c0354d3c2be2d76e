#include "ringlaser/geometry.hpp"

#include <cmath>
#include <string>

#include "ringlaser/error.hpp"

namespace ringlaser {

double ring_radius_for(std::size_t n_ring, double spacing) {
    return spacing / (2.0 * std::sin(pi / static_cast<double>(n_ring)));
}

double AtomArray::ring_radius() const {
    return ring_count == 0 ? 0.0 : positions.front().norm();
}

AtomArray build_ring_with_center(std::size_t n_ring, double spacing) {
    if (n_ring < 3) {
        fail(ErrorKind::invalid_geometry,
             "ring needs at least 3 atoms, got " + std::to_string(n_ring));
    }
    if (!(spacing > 0.0)) {
        fail(ErrorKind::invalid_parameter, "spacing must be positive");
    }

    AtomArray array;
    array.ring_count = n_ring;
    array.center_index = n_ring;
    array.positions.reserve(n_ring + 1);
    array.dipoles.assign(n_ring + 1, Vec3::UnitZ());

    const double radius = ring_radius_for(n_ring, spacing);
    const double step = 2.0 * pi / static_cast<double>(n_ring);
    for (std::size_t k = 0; k < n_ring; ++k) {
        const double phi = step * static_cast<double>(k);
        array.positions.emplace_back(radius * std::cos(phi), radius * std::sin(phi), 0.0);
    }
    array.positions.emplace_back(Vec3::Zero());
    return array;
}

} // namespace ringlaser
