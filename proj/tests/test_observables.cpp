#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "ringlaser/couplings.hpp"
#include "ringlaser/dynamics.hpp"
#include "ringlaser/error.hpp"
#include "ringlaser/observables.hpp"

using namespace ringlaser;

namespace {

// oracle matrix back from library order to mask order
Eigen::MatrixXcd to_mask_order(const oracle::DenseModel& m, const Eigen::MatrixXcd& x,
                               const Basis& basis) {
    Eigen::MatrixXcd out(m.dim(), m.dim());
    for (Eigen::Index a = 0; a < m.dim(); ++a) {
        for (Eigen::Index b = 0; b < m.dim(); ++b) {
            out(a, b) = x(basis.index_of(m.masks[a]), basis.index_of(m.masks[b]));
        }
    }
    return out;
}

AtomArray lone_atom() {
    AtomArray a;
    a.positions = {Vec3::Zero()};
    a.dipoles = {Vec3::UnitZ()};
    return a;
}

DensityMatrix excited_lone_atom(double p) {
    const BasisPtr b = build_basis(1, Truncation::full());
    DensityMatrix rho = DensityMatrix::ground(b);
    rho.matrix(0, 0) = 1.0 - p;
    rho.matrix(1, 1) = p;
    return rho;
}

struct Solved {
    AtomArray array;
    CouplingMatrices couplings;
    Liouvillian l;
    DensityMatrix rho;
};

Solved solve_ring(std::size_t n, double d, double nu, Truncation t) {
    AtomArray a = build_ring_with_center(n, d);
    CouplingMatrices c = coupling_matrices(a);
    const BasisPtr b = build_basis(n + 1, t);
    Liouvillian l = build_liouvillian(build_hamiltonian(c, b), c, nu);
    DensityMatrix rho = steady_state(l);
    return {std::move(a), std::move(c), std::move(l), std::move(rho)};
}

} // namespace

TEST_SUITE("observables") {

TEST_CASE("single atom output intensity") {
    const CouplingMatrices c{Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Identity(1, 1)};
    for (double nu : {0.1, 1.0, 4.0}) {
        const DensityMatrix rho = excited_lone_atom(oracle::single_atom_population(nu));
        CHECK(output_intensity(rho, c) == doctest::Approx(nu / (nu + 1.0)).epsilon(1e-14));
    }
    CHECK(output_intensity(excited_lone_atom(0.0), c) == 0.0);
}

TEST_CASE("ground state emits nothing") {
    const AtomArray a = build_ring_with_center(5, 0.5);
    const CouplingMatrices c = coupling_matrices(a);
    const DensityMatrix g = DensityMatrix::ground(build_basis(6, Truncation::at(2)));
    CHECK(output_intensity(g, c) == 0.0);
    CHECK(correlation_matrix(g).norm() == 0.0);
    CHECK(intensity_at(Vec3(0.3, 0.2, 1.0), g, a) == 0.0);
    try {
        g2_zero(g);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::undefined_statistics);
    }
}

TEST_CASE("observables against the dense oracle") {
    for (int m : {4, 2}) {
        const Truncation t = m >= 4 ? Truncation::full() : Truncation::at(m);
        const Solved s = solve_ring(3, 0.55, 0.6, t);
        const oracle::DenseModel model(4, m);
        const Eigen::MatrixXcd rho = to_mask_order(model, s.rho.matrix, *s.rho.basis);

        cplx iout = 0.0;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                const cplx cij = (rho * model.raise_full(i) * model.lower[j]).trace();
                iout += s.couplings.gamma(i, j) * cij;
                CHECK(std::abs(correlation_matrix(s.rho)(i, j) - cij) < 1e-14);
            }
        }
        CHECK(output_intensity(s.rho, s.couplings) == doctest::Approx(iout.real()).epsilon(1e-12));
        CHECK(g2_zero(s.rho) == doctest::Approx(model.g2(rho)).epsilon(1e-10));

        // symmetric ring state, center in the ground state
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(model.dim());
        for (Eigen::Index k = 0; k < model.dim(); ++k) {
            const auto mask = model.masks[k];
            if (mask == 1u || mask == 2u || mask == 4u) psi(k) = 1.0 / std::sqrt(3.0);
        }
        CHECK(symmetric_population(s.rho) ==
              doctest::Approx(psi.dot(rho * psi).real()).epsilon(1e-12));
    }
}

TEST_CASE("g2 needs two excitations") {
    // a single atom on its full basis cannot emit two photons at once
    CHECK(g2_zero(excited_lone_atom(0.3)) == 0.0);

    const Solved s = solve_ring(3, 0.5, 0.5, Truncation::at(1));
    try {
        g2_zero(s.rho);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_parameter);
    }
    CHECK_THROWS_AS(field_g2(Vec3(30.0, 0.0, 0.0), s.rho, s.array), Error);
}

TEST_CASE("intensity of a single dipole") {
    const AtomArray a = lone_atom();
    const double p = 0.37;
    const DensityMatrix rho = excited_lone_atom(p);
    for (double r : {0.05, 0.3, 1.0, 4.2, 50.0}) {
        const double x = k0 * r;
        const double scale = 1.0 / (16.0 * pi * pi * r * r);
        // along the dipole only the near-field terms survive
        const double axial = scale * 4.0 * (1.0 / std::pow(x, 4) + 1.0 / (x * x));
        const double side = scale * (std::pow(1.0 - 1.0 / (x * x), 2) + 1.0 / (x * x));
        CHECK(intensity_at(Vec3(0.0, 0.0, r), rho, a) == doctest::Approx(p * axial).epsilon(1e-12));
        CHECK(intensity_at(Vec3(0.0, -r, 0.0), rho, a) == doctest::Approx(p * side).epsilon(1e-12));
    }
    try {
        intensity_at(Vec3::Zero(), rho, a);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::singular_evaluation);
    }
    CHECK_THROWS_AS(intensity_at(Vec3(1, 0, 0), rho, build_ring_with_center(3, 0.5)), Error);
}

TEST_CASE("far-field g2 of the projected field") {
    const Solved s = solve_ring(3, 0.5, 0.5, Truncation::full());
    const oracle::DenseModel model(4, 4);
    const Eigen::MatrixXcd rho = to_mask_order(model, s.rho.matrix, *s.rho.basis);
    const double r = 1e6;
    for (double phi : {0.0, 0.4, 1.3}) {
        const Vec3 dir(std::cos(phi), std::sin(phi), 0.0);
        // plane-wave phases exp(-i k0 dir . r_j)
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(model.dim(), model.dim());
        for (int j = 0; j < 4; ++j) {
            a += std::exp(cplx(0.0, -k0 * dir.dot(s.array.positions[j]))) * model.lower[j];
        }
        const double n1 = (rho * a.adjoint() * a).trace().real();
        const double n2 = (rho * a.adjoint() * a.adjoint() * a * a).trace().real();
        const double expected = n2 / (n1 * n1);
        // phase error of the plane-wave form is about k0 R^2 / (2 r)
        CHECK(field_g2(r * dir, s.rho, s.array, Vec3::UnitZ()) == doctest::Approx(expected).epsilon(1e-5));
        CHECK(field_g2(r * dir, s.rho, s.array) == doctest::Approx(expected).epsilon(1e-5));
    }
}

TEST_CASE("field g2 on the ring axis") {
    // ring atoms are equidistant from an axis point but the center atom is
    // closer, so the z-polarized field approaches the collective operator as 1/z
    const Solved s = solve_ring(5, 0.5, 0.5, Truncation::full());
    const double g2 = g2_zero(s.rho);
    auto gap = [&](double z, std::optional<Vec3> pol) {
        return std::abs(field_g2(Vec3(0.0, 0.0, z), s.rho, s.array, pol) / g2 - 1.0);
    };
    CHECK(gap(500.0, Vec3::UnitZ()) < 1e-3);
    CHECK(gap(5e3, Vec3::UnitZ()) == doctest::Approx(0.1 * gap(500.0, Vec3::UnitZ())).epsilon(0.05));
    CHECK(gap(5e5, Vec3::UnitZ()) < 1e-6);
    // the transverse in-plane components differ per atom and do not fade
    CHECK(gap(5e5, std::nullopt) > 1e-3);
}

TEST_CASE("intensity maps respect the ring symmetry") {
    {
        const Solved s = solve_ring(4, 0.45, 0.3, Truncation::full());
        PlaneSpec plane;
        plane.normal = PlaneNormal::z;
        plane.offset = 0.7;
        plane.half_extent = 1.5;
        plane.resolution = 41;
        const IntensityMap m = intensity_map(plane, s.rho, s.array);
        CHECK(m.values.minCoeff() >= 0.0);
        const auto res = static_cast<Eigen::Index>(plane.resolution);
        double worst = 0.0;
        for (Eigen::Index i = 0; i < res; ++i) {
            for (Eigen::Index j = 0; j < res; ++j) {
                // a quarter turn maps (u, v) to (-v, u)
                const double a = m.values(i, j);
                const double b = m.values(res - 1 - j, i);
                worst = std::max(worst, std::abs(a - b) / std::max(a, 1e-300));
            }
        }
        CHECK(worst < 1e-8);
        CHECK(m.point(0, 0) == Vec3(-1.5, -1.5, 0.7));
    }
    {
        const Solved s = solve_ring(11, 0.2, 0.1, Truncation::at(2));
        const double angle = 2.0 * pi / 11.0;
        const Eigen::Matrix3d rot = Eigen::AngleAxisd(angle, Vec3::UnitZ()).toRotationMatrix();
        for (const Vec3& p : {Vec3(0.3, 0.1, 2.5), Vec3(1.1, -0.4, 0.5), Vec3(-2.0, 0.7, 1.0)}) {
            const double a = intensity_at(p, s.rho, s.array);
            CHECK(a > 0.0);
            CHECK(intensity_at(rot * p, s.rho, s.array) == doctest::Approx(a).epsilon(1e-9));
        }
    }
    PlaneSpec bad;
    bad.resolution = 1;
    const Solved s = solve_ring(3, 0.5, 0.5, Truncation::at(2));
    CHECK_THROWS_AS(intensity_map(bad, s.rho, s.array), Error);
}

}
