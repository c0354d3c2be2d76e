#include "ringlaser/hilbert.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "ringlaser/error.hpp"

namespace ringlaser {

Basis::Basis(std::size_t atom_count, Truncation truncation) : atom_count_(atom_count) {
    if (atom_count < 1 || atom_count > max_atom_count) {
        fail(ErrorKind::invalid_parameter,
             "atom count must be in [1, " + std::to_string(max_atom_count) + "], got " +
                 std::to_string(atom_count));
    }
    max_excitations_ = truncation.max_excitations.value_or(atom_count);
    if (max_excitations_ > atom_count) {
        fail(ErrorKind::invalid_parameter, "max_excitations " + std::to_string(max_excitations_) +
                                               " exceeds atom count " + std::to_string(atom_count));
    }

    const std::uint32_t n_masks = 1u << atom_count;
    lookup_.assign(n_masks, -1);
    offsets_.assign(max_excitations_ + 2, 0);
    for (std::size_t k = 0; k <= max_excitations_; ++k) {
        offsets_[k] = states_.size();
        for (std::uint32_t mask = 0; mask < n_masks; ++mask) {
            if (static_cast<std::size_t>(std::popcount(mask)) == k) {
                lookup_[mask] = static_cast<long>(states_.size());
                states_.push_back(mask);
                excitations_.push_back(static_cast<int>(k));
            }
        }
    }
    offsets_[max_excitations_ + 1] = states_.size();
}

BasisPtr build_basis(std::size_t atom_count, Truncation truncation) {
    return std::make_shared<const Basis>(atom_count, truncation);
}

namespace {

void require_same_basis(const BasisPtr& a, const BasisPtr& b) {
    if (a != b && !(*a == *b)) {
        fail(ErrorKind::invalid_parameter, "operators live on different bases");
    }
}

void require_atom(std::size_t atom_index, const Basis& basis) {
    if (atom_index >= basis.atom_count()) {
        fail(ErrorKind::invalid_parameter, "atom index " + std::to_string(atom_index) +
                                               " out of range for " +
                                               std::to_string(basis.atom_count()) + " atoms");
    }
}

} // namespace

Operator Operator::adjoint() const {
    return {basis, SparseOp(matrix.adjoint())};
}

Operator operator*(const Operator& a, const Operator& b) {
    require_same_basis(a.basis, b.basis);
    return {a.basis, SparseOp(a.matrix * b.matrix)};
}

Operator operator+(const Operator& a, const Operator& b) {
    require_same_basis(a.basis, b.basis);
    return {a.basis, SparseOp(a.matrix + b.matrix)};
}

Operator operator*(cplx s, const Operator& a) {
    return {a.basis, SparseOp(s * a.matrix)};
}

DensityMatrix DensityMatrix::ground(BasisPtr basis) {
    const auto dim = static_cast<Eigen::Index>(basis->dimension());
    DensityMatrix rho{std::move(basis), Eigen::MatrixXcd::Zero(dim, dim)};
    rho.matrix(0, 0) = 1.0;
    return rho;
}

DensityMatrix DensityMatrix::pure(BasisPtr basis, const Eigen::VectorXcd& state) {
    if (state.size() != static_cast<Eigen::Index>(basis->dimension())) {
        fail(ErrorKind::invalid_parameter, "state vector does not match basis dimension");
    }
    const Eigen::VectorXcd psi = state.normalized();
    return {std::move(basis), psi * psi.adjoint()};
}

cplx DensityMatrix::expectation(const Operator& op) const {
    require_same_basis(basis, op.basis);
    // Tr[rho A] = sum_{a,c} rho(c,a) A(a,c)
    cplx acc = 0.0;
    for (Eigen::Index col = 0; col < op.matrix.outerSize(); ++col) {
        for (SparseOp::InnerIterator it(op.matrix, col); it; ++it) {
            acc += matrix(col, it.row()) * it.value();
        }
    }
    return acc;
}

DensityDiagnostics diagnose(const DensityMatrix& rho) {
    DensityDiagnostics d{};
    d.hermiticity_error = (rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff();
    d.trace_error = std::abs(rho.trace() - 1.0);
    const Eigen::MatrixXcd herm = 0.5 * (rho.matrix + rho.matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = solver.eigenvalues().minCoeff();
    return d;
}

void check_density(const DensityMatrix& rho) {
    const auto d = diagnose(rho);
    if (d.hermiticity_error > 1e-10 || d.trace_error > 1e-10 || d.min_eigenvalue < -1e-8) {
        fail(ErrorKind::invalid_parameter,
             "density matrix invariants violated: hermiticity " +
                 std::to_string(d.hermiticity_error) + ", trace " +
                 std::to_string(d.trace_error) + ", min eigenvalue " +
                 std::to_string(d.min_eigenvalue));
    }
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    require_same_basis(a.basis, b.basis);
    const Eigen::MatrixXcd diff = a.matrix - b.matrix;
    const Eigen::MatrixXcd herm = 0.5 * (diff + diff.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

Operator sigma_minus(std::size_t atom_index, BasisPtr basis) {
    require_atom(atom_index, *basis);
    const std::uint32_t bit = 1u << atom_index;
    const auto dim = static_cast<Eigen::Index>(basis->dimension());
    std::vector<Eigen::Triplet<cplx>> triplets;
    for (std::size_t col = 0; col < basis->dimension(); ++col) {
        const std::uint32_t mask = basis->state(col);
        if (mask & bit) {
            triplets.emplace_back(basis->index_of(mask & ~bit), col, 1.0);
        }
    }
    SparseOp m(dim, dim);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return {std::move(basis), std::move(m)};
}

Operator sigma_plus_truncated(std::size_t atom_index, BasisPtr basis) {
    require_atom(atom_index, *basis);
    const std::uint32_t bit = 1u << atom_index;
    const auto dim = static_cast<Eigen::Index>(basis->dimension());
    std::vector<Eigen::Triplet<cplx>> triplets;
    for (std::size_t col = 0; col < basis->dimension(); ++col) {
        const std::uint32_t mask = basis->state(col);
        if (mask & bit) continue;
        const long row = basis->index_of(mask | bit);
        if (row >= 0) triplets.emplace_back(row, col, 1.0);
    }
    SparseOp m(dim, dim);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return {std::move(basis), std::move(m)};
}

Operator collective_lowering(const std::vector<std::size_t>& atoms, BasisPtr basis) {
    const auto dim = static_cast<Eigen::Index>(basis->dimension());
    Operator sum{basis, SparseOp(dim, dim)};
    for (auto i : atoms) sum = sum + sigma_minus(i, basis);
    return sum;
}

Eigen::VectorXcd product_state(const Basis& basis, std::uint32_t mask) {
    const long idx = basis.index_of(mask);
    if (idx < 0) fail(ErrorKind::invalid_parameter, "product state outside the basis");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dimension()));
    v(idx) = 1.0;
    return v;
}

Eigen::VectorXcd symmetric_ring_state(const Basis& basis, std::size_t ring_count) {
    if (ring_count == 0 || ring_count > basis.atom_count() || basis.max_excitations() < 1) {
        fail(ErrorKind::invalid_parameter, "basis cannot hold the symmetric ring state");
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dimension()));
    const double amp = 1.0 / std::sqrt(static_cast<double>(ring_count));
    for (std::size_t j = 0; j < ring_count; ++j) {
        v(basis.index_of(1u << j)) = amp;
    }
    return v;
}

} // namespace ringlaser
