#include "ringlaser/observables.hpp"

#include <cmath>
#include <string>

#include "ringlaser/error.hpp"

namespace ringlaser {

namespace {

constexpr double undefined_threshold = 1e-14;

std::vector<std::size_t> all_atoms(const Basis& basis) {
    std::vector<std::size_t> atoms(basis.atom_count());
    for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i] = i;
    return atoms;
}

// Tr[A rho A^dagger]
cplx sandwich_trace(const SparseOp& a, const Eigen::MatrixXcd& rho) {
    const Eigen::MatrixXcd ar = a * rho;
    cplx acc = 0.0;
    for (Eigen::Index col = 0; col < a.outerSize(); ++col) {
        for (SparseOp::InnerIterator it(a, col); it; ++it) {
            // (A rho A^dagger)(r, r) = sum_c (A rho)(r, c) conj(A(r, c))
            acc += ar(it.row(), col) * std::conj(it.value());
        }
    }
    return acc;
}

std::vector<CVec3> field_modes(const Vec3& point, const AtomArray& array) {
    std::vector<CVec3> modes;
    modes.reserve(array.atom_count());
    for (std::size_t i = 0; i < array.atom_count(); ++i) {
        modes.push_back(greens_dot_dipole(point - array.positions[i], array.dipoles[i]));
    }
    return modes;
}

void require_match(const DensityMatrix& rho, const AtomArray& array) {
    if (rho.basis->atom_count() != array.atom_count()) {
        fail(ErrorKind::invalid_parameter, "density matrix and atom array sizes differ");
    }
}

} // namespace

Eigen::MatrixXcd correlation_matrix(const DensityMatrix& rho) {
    const Basis& basis = *rho.basis;
    const auto n = static_cast<Eigen::Index>(basis.atom_count());
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
    // <s+_i s-_j> = sum_c rho(c, a) with a = c - j + i
    for (std::size_t col = 0; col < basis.dimension(); ++col) {
        const std::uint32_t mask = basis.state(col);
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!(mask & (1u << j))) continue;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (i != j && (mask & (1u << i))) continue;
                const std::uint32_t target = (mask & ~(1u << j)) | (1u << i);
                c(i, j) += rho.matrix(col, basis.index_of(target));
            }
        }
    }
    return c;
}

double output_intensity(const DensityMatrix& rho, const CouplingMatrices& couplings) {
    const Eigen::MatrixXcd c = correlation_matrix(rho);
    if (c.rows() != couplings.size()) {
        fail(ErrorKind::invalid_parameter, "coupling matrices do not match the state");
    }
    const cplx total = (couplings.gamma.cast<cplx>().cwiseProduct(c)).sum();
    return total.real();
}

double g2_zero(const DensityMatrix& rho) {
    const BasisPtr& basis = rho.basis;
    // a full basis of one atom is fine (g2 = 0); a cut below two excitations is not
    if (basis->truncated() && basis->max_excitations() < 2) {
        fail(ErrorKind::invalid_parameter, "g2 needs a basis holding two excitations");
    }
    const Operator lower = collective_lowering(all_atoms(*basis), basis);
    const SparseOp two = lower.matrix * lower.matrix;
    const double numerator = sandwich_trace(two, rho.matrix).real();
    const double denominator = std::norm(correlation_matrix(rho).sum());
    if (denominator < undefined_threshold) {
        fail(ErrorKind::undefined_statistics, "no excitation present, g2(0) undefined");
    }
    return numerator / denominator;
}

double symmetric_population(const DensityMatrix& rho) {
    const Basis& basis = *rho.basis;
    const Eigen::VectorXcd psi = symmetric_ring_state(basis, basis.atom_count() - 1);
    return psi.dot(rho.matrix * psi).real();
}

double intensity_at(const Vec3& point, const DensityMatrix& rho, const AtomArray& array) {
    require_match(rho, array);
    const auto modes = field_modes(point, array);
    const Eigen::MatrixXcd c = correlation_matrix(rho);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        for (std::size_t j = 0; j < modes.size(); ++j) {
            acc += modes[i].dot(modes[j]) * c(i, j);
        }
    }
    return acc.real();
}

double field_g2(const Vec3& point, const DensityMatrix& rho, const AtomArray& array,
                std::optional<Vec3> polarization) {
    require_match(rho, array);
    const BasisPtr& basis = rho.basis;
    // a full basis of one atom is fine (g2 = 0); a cut below two excitations is not
    if (basis->truncated() && basis->max_excitations() < 2) {
        fail(ErrorKind::invalid_parameter, "g2 needs a basis holding two excitations");
    }
    const auto modes = field_modes(point, array);

    // One lowering field operator per detected polarization component.
    std::vector<SparseOp> components;
    auto field_operator = [&](const CVec3& e) {
        const auto dim = static_cast<Eigen::Index>(basis->dimension());
        SparseOp op(dim, dim);
        for (std::size_t i = 0; i < modes.size(); ++i) {
            op += e.dot(modes[i]) * sigma_minus(i, basis).matrix;
        }
        return op;
    };
    if (polarization) {
        components.push_back(field_operator(polarization->normalized().cast<cplx>()));
    } else {
        for (int a = 0; a < 3; ++a) components.push_back(field_operator(Vec3::Unit(a).cast<cplx>()));
    }

    double intensity = 0.0;
    double numerator = 0.0;
    for (const auto& ea : components) {
        intensity += sandwich_trace(ea, rho.matrix).real();
        for (const auto& eb : components) {
            const SparseOp pair = eb * ea;
            numerator += sandwich_trace(pair, rho.matrix).real();
        }
    }
    if (!(intensity > 0.0)) {
        fail(ErrorKind::undefined_statistics, "no field intensity at the detection point");
    }
    return numerator / (intensity * intensity);
}

Vec3 IntensityMap::point(std::size_t iu, std::size_t iv) const {
    switch (plane.normal) {
    case PlaneNormal::x: return {plane.offset, u[iu], v[iv]};
    case PlaneNormal::y: return {u[iu], plane.offset, v[iv]};
    case PlaneNormal::z: break;
    }
    return {u[iu], v[iv], plane.offset};
}

IntensityMap intensity_map(const PlaneSpec& plane, const DensityMatrix& rho,
                           const AtomArray& array) {
    require_match(rho, array);
    if (plane.resolution < 2 || !(plane.half_extent > 0.0)) {
        fail(ErrorKind::invalid_parameter, "intensity map needs resolution >= 2 and extent > 0");
    }
    IntensityMap map;
    map.plane = plane;
    const std::size_t res = plane.resolution;
    for (std::size_t k = 0; k < res; ++k) {
        const double s = -plane.half_extent +
                         2.0 * plane.half_extent * static_cast<double>(k) / static_cast<double>(res - 1);
        map.u.push_back(s);
        map.v.push_back(s);
    }
    map.values.resize(static_cast<Eigen::Index>(res), static_cast<Eigen::Index>(res));

    const Eigen::MatrixXcd c = correlation_matrix(rho);
    for (std::size_t iu = 0; iu < res; ++iu) {
        for (std::size_t iv = 0; iv < res; ++iv) {
            const auto modes = field_modes(map.point(iu, iv), array);
            cplx acc = 0.0;
            for (std::size_t i = 0; i < modes.size(); ++i) {
                for (std::size_t j = 0; j < modes.size(); ++j) {
                    acc += modes[i].dot(modes[j]) * c(i, j);
                }
            }
            map.values(iu, iv) = acc.real();
        }
    }
    return map;
}

} // namespace ringlaser
