// many-body bases of two-level atoms and the operators on them

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace ringlaser {

using cplx = std::complex<double>;
using SparseOp = Eigen::SparseMatrix<cplx>;

struct Truncation {
    std::optional<std::size_t> max_excitations; // empty = full basis

    static Truncation full() { return {}; }
    static Truncation at(std::size_t m) { return {m}; }
};

// Product states |e/g>^(n) stored as bitmasks (bit i set = atom i excited),
// ordered by excitation number, then by bitmask.
class Basis {
public:
    Basis(std::size_t atom_count, Truncation truncation);

    std::size_t atom_count() const { return atom_count_; }
    std::size_t dimension() const { return states_.size(); }
    std::size_t max_excitations() const { return max_excitations_; }
    bool truncated() const { return max_excitations_ < atom_count_; }

    std::uint32_t state(std::size_t index) const { return states_[index]; }
    const std::vector<std::uint32_t>& states() const { return states_; }
    int excitations(std::size_t index) const { return excitations_[index]; }

    // -1 when the bitmask lies outside the (truncated) basis.
    long index_of(std::uint32_t mask) const { return lookup_[mask]; }

    // Index range [begin, end) of states with exactly k excitations.
    std::size_t block_begin(std::size_t k) const { return offsets_[k]; }
    std::size_t block_end(std::size_t k) const { return offsets_[k + 1]; }

    bool operator==(const Basis& other) const {
        return atom_count_ == other.atom_count_ && max_excitations_ == other.max_excitations_;
    }

private:
    std::size_t atom_count_;
    std::size_t max_excitations_;
    std::vector<std::uint32_t> states_;
    std::vector<int> excitations_;
    std::vector<long> lookup_;
    std::vector<std::size_t> offsets_;
};

using BasisPtr = std::shared_ptr<const Basis>;

inline constexpr std::size_t max_atom_count = 20;
inline constexpr std::size_t dense_dimension_limit = 1024;

BasisPtr build_basis(std::size_t atom_count, Truncation truncation);

struct Operator {
    BasisPtr basis;
    SparseOp matrix;

    Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(matrix); }
    Operator adjoint() const;
};

Operator operator*(const Operator& a, const Operator& b);
Operator operator+(const Operator& a, const Operator& b);
Operator operator*(cplx s, const Operator& a);

struct DensityMatrix {
    BasisPtr basis;
    Eigen::MatrixXcd matrix;

    static DensityMatrix ground(BasisPtr basis);
    static DensityMatrix pure(BasisPtr basis, const Eigen::VectorXcd& state);

    cplx trace() const { return matrix.trace(); }
    // Tr[rho * op]
    cplx expectation(const Operator& op) const;
};

struct DensityDiagnostics {
    double hermiticity_error; // max |rho - rho^dagger|
    double trace_error;       // |Tr rho - 1|
    double min_eigenvalue;
};

DensityDiagnostics diagnose(const DensityMatrix& rho);

// Throws invalid_parameter if the invariants are violated beyond
// hermiticity 1e-10, trace 1e-10, eigenvalues >= -1e-8.
void check_density(const DensityMatrix& rho);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

Operator sigma_minus(std::size_t atom_index, BasisPtr basis);

// Raising operator projected back onto the basis: transitions that would
// exceed the truncation are dropped. On a full basis this is sigma_minus^dagger.
Operator sigma_plus_truncated(std::size_t atom_index, BasisPtr basis);

// Sum of lowering operators over the listed atoms.
Operator collective_lowering(const std::vector<std::size_t>& atoms, BasisPtr basis);

// Basis vector of a single product state.
Eigen::VectorXcd product_state(const Basis& basis, std::uint32_t mask);

// (1/sqrt(N)) sum_j sigma_j^+ |g...g>, ring atoms 0..ring_count-1, others in |g>.
Eigen::VectorXcd symmetric_ring_state(const Basis& basis, std::size_t ring_count);

} // namespace ringlaser
