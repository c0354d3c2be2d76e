// Hamiltonian, Lindblad generator, time evolution and steady state

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "ringlaser/couplings.hpp"
#include "ringlaser/hilbert.hpp"
#include "ringlaser/krylov.hpp"

namespace ringlaser {

// H = sum_{i != j} Omega_ij sigma_i^+ sigma_j^-
Operator build_hamiltonian(const CouplingMatrices& couplings, BasisPtr basis);

// Subset of density-matrix elements (ket, bra) closed under the generator.
// The master equation conserves exc(ket) - exc(bra), so each offset is an
// invariant sector; `all` covers every element (column-major vec order).
class Sector {
public:
    static Sector with_offset(const Basis& basis, int offset);
    static Sector all(const Basis& basis);

    std::optional<int> offset() const { return offset_; }
    std::size_t size() const { return elements_.size(); }
    const std::vector<std::pair<long, long>>& elements() const { return elements_; }

    // position of element (ket, bra) or -1
    long position(long ket, long bra) const { return lookup_[bra * dim_ + ket]; }

    Eigen::VectorXcd pack(const Eigen::MatrixXcd& m) const;
    Eigen::MatrixXcd unpack(const Eigen::VectorXcd& v) const;
    // adds the unpacked vector onto `m`
    void scatter_add(const Eigen::VectorXcd& v, Eigen::MatrixXcd& m) const;

private:
    Sector(const Basis& basis, std::optional<int> offset);

    std::optional<int> offset_;
    long dim_;
    std::vector<std::pair<long, long>> elements_;
    std::vector<long> lookup_;
};

// Orbits of a sector's elements under atom permutations applied to ket and
// bra together. Vectors that are constant on orbits (states invariant under
// the permutations) are represented by one value per orbit.
class OrbitReduction {
public:
    OrbitReduction(const Sector& sector, const Basis& basis,
                   const std::vector<std::vector<std::size_t>>& perms);

    std::size_t size() const { return representative_.size(); }
    long orbit_of(long element) const { return orbit_[element]; }
    long representative(long orbit) const { return representative_[orbit]; }
    long orbit_size(long orbit) const { return orbit_size_[orbit]; }

    // Action of `full` (sector generator) on orbit-constant vectors.
    Eigen::SparseMatrix<cplx> reduce(const Eigen::SparseMatrix<cplx>& full) const;
    Eigen::VectorXcd restrict(const Eigen::VectorXcd& full) const;
    Eigen::VectorXcd expand(const Eigen::VectorXcd& reduced) const;
    // Sum of entries per orbit (for linear functionals).
    Eigen::VectorXcd sum_over_orbits(const Eigen::VectorXcd& full) const;
    bool is_invariant(const Eigen::VectorXcd& full, double tol = 1e-13) const;

private:
    std::vector<long> orbit_;
    std::vector<long> representative_;
    std::vector<long> orbit_size_;
};

// Generator of d(rho)/dt = i[rho, H] + L_Gamma[rho] + L_nu[rho]; the pump
// raises `pump_atom` (projector-truncated on truncated bases).
class Liouvillian {
public:
    Liouvillian(Operator hamiltonian, CouplingMatrices couplings, double pump_rate,
                std::size_t pump_atom);

    const BasisPtr& basis() const { return hamiltonian_.basis; }
    const Operator& hamiltonian() const { return hamiltonian_; }
    const CouplingMatrices& couplings() const { return couplings_; }
    double pump_rate() const { return pump_rate_; }
    std::size_t pump_atom() const { return pump_atom_; }

    // L(x) for any operator x given as a dense matrix
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& x) const;

    // Vectorized generator restricted to `sector` (rows and columns in
    // sector order). Optionally replaces one row by the trace functional.
    Eigen::SparseMatrix<cplx> generator(const Sector& sector,
                                        std::optional<long> trace_row = std::nullopt) const;

private:
    Operator hamiltonian_;
    CouplingMatrices couplings_;
    double pump_rate_;
    std::size_t pump_atom_;
    SparseOp effective_;               // H - i/2 sum Gamma_ij s+_i s-_j - i/2 nu s-_p s+_p
    std::vector<SparseOp> lowering_;   // sigma_i^-
    std::vector<SparseOp> raising_;    // truncated sigma_i^+
};

// Pump on the last atom of the basis (the center atom of a ring array).
Liouvillian build_liouvillian(const Operator& h, const CouplingMatrices& couplings,
                              double pump_rate);

struct EvolveOptions {
    double rtol{1e-8};
    double atol{1e-10};
    bool use_ring_symmetry{true}; // propagate symmetric states in orbit space
};

// rho(t) for each requested time (ascending, t >= 0).
std::vector<DensityMatrix> evolve(const Liouvillian& l, const DensityMatrix& rho0,
                                  const std::vector<double>& times,
                                  const EvolveOptions& options = {});

struct SteadyStateOptions {
    // Problems up to this size use a dense SVD null-space solve (with a
    // degeneracy check), larger ones a sparse LU with a trace-normalization row.
    std::size_t svd_limit{1200};
    double degeneracy_ratio{1e-10};
    // Solve in the subspace invariant under the ring's rotations and
    // reflections when the couplings have that symmetry. The degeneracy
    // check then only covers that subspace.
    bool use_ring_symmetry{true};
};

// Atom permutations (ring rotation by one site, ring reflection; last atom
// fixed) under which the couplings are invariant to 1e-12. Empty if none.
std::vector<std::vector<std::size_t>> ring_symmetries(const CouplingMatrices& couplings);

// Symmetries of the whole generator: ring symmetries of the couplings, if the
// pump acts on the fixed (last) atom.
std::vector<std::vector<std::size_t>> generator_symmetries(const Liouvillian& l);

DensityMatrix steady_state(const Liouvillian& l, const SteadyStateOptions& options = {});

// max |L(rho)| entry
double stationarity_residual(const Liouvillian& l, const DensityMatrix& rho);

struct EigenstateDecomposition {
    Eigen::VectorXd energies;        // single-excitation eigenvalues of H
    Eigen::MatrixXcd states;         // columns, embedded in the full basis
    Eigen::VectorXd populations;     // <Psi|rho|Psi>
    Eigen::VectorXd overlaps_sym;    // |<psi_sym, g|Psi>|^2
    Eigen::VectorXd overlaps_center; // |<g..g, e|Psi>|^2
    std::array<Eigen::Index, 2> dominant{0, 0};
    std::array<cplx, 2> a{};         // center-excited amplitude of the dominant pair
    std::array<cplx, 2> b{};         // symmetric-ring amplitude of the dominant pair
    bool ansatz_valid{false};        // both dominant overlaps exceed 0.5
    double ground_population{0.0};
    double higher_population{0.0};   // two or more excitations
    Eigen::VectorXd higher_eigen_populations; // eigenstates with two or more excitations
};

// Diagonalizes H in the single-excitation manifold; ring atoms are 0..n-2 and
// the center atom is n-1.
EigenstateDecomposition eigenstate_populations(const Operator& h, const DensityMatrix& rho);

} // namespace ringlaser
