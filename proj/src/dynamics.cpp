#include "ringlaser/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/SparseLU>

#include "ringlaser/error.hpp"

namespace ringlaser {

Operator build_hamiltonian(const CouplingMatrices& couplings, BasisPtr basis) {
    const auto n = static_cast<Eigen::Index>(basis->atom_count());
    if (couplings.size() != n) {
        fail(ErrorKind::invalid_parameter,
             "coupling matrices have size " + std::to_string(couplings.size()) +
                 " but the basis has " + std::to_string(n) + " atoms");
    }
    const auto dim = static_cast<Eigen::Index>(basis->dimension());
    std::vector<Eigen::Triplet<cplx>> triplets;
    // <a| s+_i s-_j |c> = 1 when j in c, i not in c and a = c - j + i
    for (std::size_t col = 0; col < basis->dimension(); ++col) {
        const std::uint32_t mask = basis->state(col);
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!(mask & (1u << j))) continue;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (i == j || (mask & (1u << i))) continue;
                const double om = couplings.omega(i, j);
                if (om == 0.0) continue;
                const std::uint32_t target = (mask & ~(1u << j)) | (1u << i);
                triplets.emplace_back(basis->index_of(target), col, om);
            }
        }
    }
    SparseOp h(dim, dim);
    h.setFromTriplets(triplets.begin(), triplets.end());
    return {std::move(basis), std::move(h)};
}

// ---------------------------------------------------------------------------

Sector::Sector(const Basis& basis, std::optional<int> offset)
    : offset_(offset), dim_(static_cast<long>(basis.dimension())) {
    lookup_.assign(static_cast<std::size_t>(dim_ * dim_), -1);
    for (long bra = 0; bra < dim_; ++bra) {
        for (long ket = 0; ket < dim_; ++ket) {
            if (offset && basis.excitations(ket) - basis.excitations(bra) != *offset) continue;
            lookup_[bra * dim_ + ket] = static_cast<long>(elements_.size());
            elements_.emplace_back(ket, bra);
        }
    }
}

Sector Sector::with_offset(const Basis& basis, int offset) { return Sector(basis, offset); }

Sector Sector::all(const Basis& basis) { return Sector(basis, std::nullopt); }

Eigen::VectorXcd Sector::pack(const Eigen::MatrixXcd& m) const {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(elements_.size()));
    for (std::size_t k = 0; k < elements_.size(); ++k) {
        v(k) = m(elements_[k].first, elements_[k].second);
    }
    return v;
}

Eigen::MatrixXcd Sector::unpack(const Eigen::VectorXcd& v) const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim_, dim_);
    scatter_add(v, m);
    return m;
}

void Sector::scatter_add(const Eigen::VectorXcd& v, Eigen::MatrixXcd& m) const {
    for (std::size_t k = 0; k < elements_.size(); ++k) {
        m(elements_[k].first, elements_[k].second) += v(k);
    }
}

// ---------------------------------------------------------------------------

Liouvillian::Liouvillian(Operator hamiltonian, CouplingMatrices couplings, double pump_rate,
                         std::size_t pump_atom)
    : hamiltonian_(std::move(hamiltonian)),
      couplings_(std::move(couplings)),
      pump_rate_(pump_rate),
      pump_atom_(pump_atom) {
    const BasisPtr& b = hamiltonian_.basis;
    const std::size_t n = b->atom_count();
    if (!(pump_rate >= 0.0)) {
        fail(ErrorKind::invalid_parameter, "pump rate must be non-negative");
    }
    if (pump_atom >= n) fail(ErrorKind::invalid_parameter, "pump atom out of range");
    if (couplings_.size() != static_cast<Eigen::Index>(n)) {
        fail(ErrorKind::invalid_parameter, "coupling matrices do not match the basis");
    }

    for (std::size_t i = 0; i < n; ++i) {
        lowering_.push_back(sigma_minus(i, b).matrix);
        raising_.push_back(sigma_plus_truncated(i, b).matrix);
    }

    SparseOp decay(hamiltonian_.matrix.rows(), hamiltonian_.matrix.cols());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double g = couplings_.gamma(i, j);
            if (g != 0.0) decay += g * (raising_[i] * lowering_[j]);
        }
    }
    SparseOp pump = lowering_[pump_atom] * raising_[pump_atom];
    effective_ = hamiltonian_.matrix - cplx(0.0, 0.5) * decay - cplx(0.0, 0.5 * pump_rate) * pump;
    effective_.makeCompressed();
}

Eigen::MatrixXcd Liouvillian::apply(const Eigen::MatrixXcd& x) const {
    const cplx i1(0.0, 1.0);
    Eigen::MatrixXcd out = -i1 * (effective_ * x) + i1 * (x * SparseOp(effective_.adjoint()));
    const std::size_t n = lowering_.size();
    for (std::size_t j = 0; j < n; ++j) {
        const Eigen::MatrixXcd xr = x * raising_[j];
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(x.rows(), x.cols());
        for (std::size_t i = 0; i < n; ++i) {
            const double g = couplings_.gamma(i, j);
            if (g != 0.0) acc += g * (lowering_[i] * xr);
        }
        out += acc;
    }
    if (pump_rate_ != 0.0) {
        out += pump_rate_ * (raising_[pump_atom_] * x * lowering_[pump_atom_]);
    }
    return out;
}

Eigen::SparseMatrix<cplx> Liouvillian::generator(const Sector& sector,
                                                 std::optional<long> trace_row) const {
    const Basis& b = *basis();
    const auto n = static_cast<Eigen::Index>(b.atom_count());
    const std::uint32_t pump_bit = 1u << pump_atom_;
    const cplx i1(0.0, 1.0);

    std::vector<Eigen::Triplet<cplx>> triplets;
    triplets.reserve(sector.size() * 16);
    auto add = [&](long ket, long bra, long col, cplx value) {
        const long row = sector.position(ket, bra);
        if (row < 0) fail(ErrorKind::invalid_parameter, "sector not closed under the generator");
        if (trace_row && row == *trace_row) return;
        triplets.emplace_back(row, col, value);
    };

    const auto& elements = sector.elements();
    for (std::size_t k = 0; k < elements.size(); ++k) {
        const long col = static_cast<long>(k);
        const auto [ket, bra] = elements[k];

        // -i Heff rho
        for (SparseOp::InnerIterator it(effective_, ket); it; ++it) {
            add(it.row(), bra, col, -i1 * it.value());
        }
        // +i rho Heff^dagger
        for (SparseOp::InnerIterator it(effective_, bra); it; ++it) {
            add(ket, it.row(), col, i1 * std::conj(it.value()));
        }
        // sum_ij Gamma_ij s-_i rho s+_j
        const std::uint32_t ket_mask = b.state(ket);
        const std::uint32_t bra_mask = b.state(bra);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!(ket_mask & (1u << i))) continue;
            const long ket_to = b.index_of(ket_mask & ~(1u << i));
            for (Eigen::Index j = 0; j < n; ++j) {
                if (!(bra_mask & (1u << j))) continue;
                const double g = couplings_.gamma(i, j);
                if (g == 0.0) continue;
                add(ket_to, b.index_of(bra_mask & ~(1u << j)), col, g);
            }
        }
        // nu s+_p rho s-_p
        if (pump_rate_ != 0.0 && !(ket_mask & pump_bit) && !(bra_mask & pump_bit)) {
            const long ket_to = b.index_of(ket_mask | pump_bit);
            const long bra_to = b.index_of(bra_mask | pump_bit);
            if (ket_to >= 0 && bra_to >= 0) add(ket_to, bra_to, col, pump_rate_);
        }
    }
    if (trace_row) {
        for (std::size_t k = 0; k < elements.size(); ++k) {
            if (elements[k].first == elements[k].second) {
                triplets.emplace_back(*trace_row, static_cast<long>(k), 1.0);
            }
        }
    }

    const auto size = static_cast<Eigen::Index>(sector.size());
    Eigen::SparseMatrix<cplx> g(size, size);
    g.setFromTriplets(triplets.begin(), triplets.end());
    g.makeCompressed();
    return g;
}

Liouvillian build_liouvillian(const Operator& h, const CouplingMatrices& couplings,
                              double pump_rate) {
    return Liouvillian(h, couplings, pump_rate, h.basis->atom_count() - 1);
}

// ---------------------------------------------------------------------------

std::vector<DensityMatrix> evolve(const Liouvillian& l, const DensityMatrix& rho0,
                                  const std::vector<double>& times,
                                  const EvolveOptions& options) {
    const BasisPtr& basis = l.basis();
    if (!(*rho0.basis == *basis)) {
        fail(ErrorKind::invalid_parameter, "initial state lives on a different basis");
    }
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < 0.0 || (k > 0 && times[k] < times[k - 1])) {
            fail(ErrorKind::invalid_parameter, "evolution times must be ascending and >= 0");
        }
    }

    std::set<int> offsets;
    for (Eigen::Index bra = 0; bra < rho0.matrix.cols(); ++bra) {
        for (Eigen::Index ket = 0; ket < rho0.matrix.rows(); ++ket) {
            if (rho0.matrix(ket, bra) != cplx(0.0)) {
                offsets.insert(basis->excitations(ket) - basis->excitations(bra));
            }
        }
    }

    const auto dim = static_cast<Eigen::Index>(basis->dimension());
    std::vector<DensityMatrix> out;
    out.reserve(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        out.push_back({basis, Eigen::MatrixXcd::Zero(dim, dim)});
    }

    KrylovOptions kopt;
    kopt.rtol = options.rtol;
    kopt.atol = options.atol;
    const auto perms = options.use_ring_symmetry ? generator_symmetries(l)
                                                 : std::vector<std::vector<std::size_t>>{};
    for (int offset : offsets) {
        const Sector sector = Sector::with_offset(*basis, offset);
        const Eigen::VectorXcd start = sector.pack(rho0.matrix);
        std::optional<OrbitReduction> orbits;
        if (!perms.empty()) {
            orbits.emplace(sector, *basis, perms);
            if (!orbits->is_invariant(start)) orbits.reset();
        }
        const auto gen = orbits ? orbits->reduce(l.generator(sector)) : l.generator(sector);
        Eigen::VectorXcd v = orbits ? orbits->restrict(start) : start;
        double t_prev = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            v = krylov_expv(times[k] - t_prev, gen, v, kopt);
            t_prev = times[k];
            sector.scatter_add(orbits ? orbits->expand(v) : v, out[k].matrix);
        }
    }
    return out;
}

std::vector<std::vector<std::size_t>> ring_symmetries(const CouplingMatrices& couplings) {
    const auto n = static_cast<std::size_t>(couplings.size());
    if (n < 4) return {};
    const std::size_t ring = n - 1;
    std::vector<std::size_t> rotate(n);
    std::vector<std::size_t> reflect(n);
    for (std::size_t i = 0; i < ring; ++i) {
        rotate[i] = (i + 1) % ring;
        reflect[i] = (ring - i) % ring;
    }
    rotate[ring] = reflect[ring] = ring;

    const double scale = std::max(couplings.omega.cwiseAbs().maxCoeff(),
                                  couplings.gamma.cwiseAbs().maxCoeff());
    auto invariant = [&](const std::vector<std::size_t>& perm) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const auto pi = static_cast<Eigen::Index>(perm[i]);
                const auto pj = static_cast<Eigen::Index>(perm[j]);
                const auto ii = static_cast<Eigen::Index>(i);
                const auto jj = static_cast<Eigen::Index>(j);
                if (std::abs(couplings.omega(pi, pj) - couplings.omega(ii, jj)) > 1e-12 * scale ||
                    std::abs(couplings.gamma(pi, pj) - couplings.gamma(ii, jj)) > 1e-12 * scale) {
                    return false;
                }
            }
        }
        return true;
    };
    std::vector<std::vector<std::size_t>> out;
    if (invariant(rotate)) out.push_back(rotate);
    if (invariant(reflect)) out.push_back(reflect);
    return out;
}

std::vector<std::vector<std::size_t>> generator_symmetries(const Liouvillian& l) {
    if (l.pump_atom() + 1 != l.basis()->atom_count()) return {};
    return ring_symmetries(l.couplings());
}

namespace {

std::uint32_t permute_mask(std::uint32_t mask, const std::vector<std::size_t>& perm) {
    std::uint32_t out = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (mask & (1u << i)) out |= 1u << perm[i];
    }
    return out;
}

} // namespace

OrbitReduction::OrbitReduction(const Sector& sector, const Basis& basis,
                               const std::vector<std::vector<std::size_t>>& perms) {
    const auto size = static_cast<long>(sector.size());
    orbit_.assign(static_cast<std::size_t>(size), -1);
    std::vector<long> stack;
    for (long e = 0; e < size; ++e) {
        if (orbit_[e] >= 0) continue;
        const long id = static_cast<long>(representative_.size());
        representative_.push_back(e);
        orbit_size_.push_back(0);
        orbit_[e] = id;
        stack.push_back(e);
        while (!stack.empty()) {
            const long cur = stack.back();
            stack.pop_back();
            ++orbit_size_[id];
            const auto [ket, bra] = sector.elements()[cur];
            for (const auto& perm : perms) {
                const long pk = basis.index_of(permute_mask(basis.state(ket), perm));
                const long pb = basis.index_of(permute_mask(basis.state(bra), perm));
                const long next = sector.position(pk, pb);
                if (next < 0) fail(ErrorKind::invalid_parameter, "permutation leaves the sector");
                if (orbit_[next] < 0) {
                    orbit_[next] = id;
                    stack.push_back(next);
                }
            }
        }
    }
}

Eigen::SparseMatrix<cplx> OrbitReduction::reduce(const Eigen::SparseMatrix<cplx>& full) const {
    // (G x)_rep(r) = sum_e G(rep(r), e) x_orbit(e)
    std::vector<char> is_rep(orbit_.size(), 0);
    for (long r : representative_) is_rep[r] = 1;
    std::vector<Eigen::Triplet<cplx>> triplets;
    for (Eigen::Index col = 0; col < full.outerSize(); ++col) {
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(full, col); it; ++it) {
            if (!is_rep[it.row()]) continue;
            triplets.emplace_back(orbit_[it.row()], orbit_[col], it.value());
        }
    }
    const auto count = static_cast<Eigen::Index>(size());
    Eigen::SparseMatrix<cplx> reduced(count, count);
    reduced.setFromTriplets(triplets.begin(), triplets.end());
    reduced.makeCompressed();
    return reduced;
}

Eigen::VectorXcd OrbitReduction::restrict(const Eigen::VectorXcd& full) const {
    Eigen::VectorXcd x(static_cast<Eigen::Index>(size()));
    for (std::size_t o = 0; o < representative_.size(); ++o) x(o) = full(representative_[o]);
    return x;
}

Eigen::VectorXcd OrbitReduction::expand(const Eigen::VectorXcd& reduced) const {
    Eigen::VectorXcd out(static_cast<Eigen::Index>(orbit_.size()));
    for (std::size_t e = 0; e < orbit_.size(); ++e) out(e) = reduced(orbit_[e]);
    return out;
}

Eigen::VectorXcd OrbitReduction::sum_over_orbits(const Eigen::VectorXcd& full) const {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(size()));
    for (std::size_t e = 0; e < orbit_.size(); ++e) x(orbit_[e]) += full(e);
    return x;
}

bool OrbitReduction::is_invariant(const Eigen::VectorXcd& full, double tol) const {
    const double scale = std::max(1.0, full.cwiseAbs().maxCoeff());
    for (std::size_t e = 0; e < orbit_.size(); ++e) {
        if (std::abs(full(e) - full(representative_[orbit_[e]])) > tol * scale) return false;
    }
    return true;
}

DensityMatrix steady_state(const Liouvillian& l, const SteadyStateOptions& options) {
    const BasisPtr& basis = l.basis();
    // Without pump and with every collective mode decaying, nothing but the
    // ground state survives; return it exactly instead of a numerical null vector.
    if (l.pump_rate() == 0.0 &&
        Eigen::LLT<Eigen::MatrixXd>(l.couplings().gamma).info() == Eigen::Success) {
        return DensityMatrix::ground(basis);
    }
    const Sector sector = Sector::with_offset(*basis, 0);

    // The generator commutes with the ring permutations and the steady state
    // is unique, so it lies in the span of orbit indicator vectors.
    std::optional<OrbitReduction> orbits;
    if (options.use_ring_symmetry) {
        if (const auto perms = generator_symmetries(l); !perms.empty()) {
            orbits.emplace(sector, *basis, perms);
        }
    }
    Eigen::SparseMatrix<cplx> g = l.generator(sector);
    if (orbits) g = orbits->reduce(g);

    Eigen::VectorXcd x;
    if (static_cast<std::size_t>(g.rows()) <= options.svd_limit) {
        const Eigen::MatrixXcd dense(g);
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(dense, Eigen::ComputeFullV);
        const Eigen::VectorXd& sv = svd.singularValues();
        const Eigen::Index last = sv.size() - 1;
        if (last >= 1 && sv(last - 1) < options.degeneracy_ratio * sv(0)) {
            fail(ErrorKind::degenerate_steady_state,
                 "null space of the generator is degenerate (second-smallest singular value " +
                     std::to_string(sv(last - 1)) + ")");
        }
        x = svd.matrixV().col(last);
    } else {
        // replace the ground-population row by the trace functional
        const long full_row = sector.position(0, 0);
        const long row = orbits ? orbits->orbit_of(full_row) : full_row;
        g.prune([&](Eigen::Index r, Eigen::Index, const cplx&) { return r != row; });
        std::vector<Eigen::Triplet<cplx>> trace;
        for (Eigen::Index k = 0; k < g.cols(); ++k) {
            const long e = orbits ? orbits->representative(static_cast<long>(k)) : static_cast<long>(k);
            const auto [ket, bra] = sector.elements()[e];
            if (ket != bra) continue;
            trace.emplace_back(row, k, orbits ? double(orbits->orbit_size(static_cast<long>(k))) : 1.0);
        }
        Eigen::SparseMatrix<cplx> trace_row(g.rows(), g.cols());
        trace_row.setFromTriplets(trace.begin(), trace.end());
        g += trace_row;
        g.makeCompressed();

        Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>> lu;
        lu.analyzePattern(g);
        lu.factorize(g);
        if (lu.info() != Eigen::Success) {
            fail(ErrorKind::degenerate_steady_state,
                 "trace-constrained generator is singular: " + lu.lastErrorMessage());
        }
        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(g.rows());
        rhs(row) = 1.0;
        x = lu.solve(rhs);
        if (lu.info() != Eigen::Success || !x.allFinite()) {
            fail(ErrorKind::degenerate_steady_state, "steady-state solve failed");
        }
    }
    const Eigen::VectorXcd null_vector = orbits ? orbits->expand(x) : x;

    Eigen::MatrixXcd rho = sector.unpack(null_vector);
    rho /= rho.trace();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return {basis, std::move(rho)};
}

double stationarity_residual(const Liouvillian& l, const DensityMatrix& rho) {
    return l.apply(rho.matrix).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------

EigenstateDecomposition eigenstate_populations(const Operator& h, const DensityMatrix& rho) {
    const Basis& basis = *h.basis;
    if (!(*rho.basis == basis)) {
        fail(ErrorKind::invalid_parameter, "density matrix and Hamiltonian bases differ");
    }
    if (basis.max_excitations() < 1 || basis.atom_count() < 2) {
        fail(ErrorKind::invalid_parameter, "basis has no single-excitation manifold");
    }

    const auto begin = static_cast<Eigen::Index>(basis.block_begin(1));
    const auto count = static_cast<Eigen::Index>(basis.block_end(1) - basis.block_begin(1));
    const Eigen::MatrixXcd block = h.dense().block(begin, begin, count, count);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(block);

    const auto dim = static_cast<Eigen::Index>(basis.dimension());
    const std::size_t n = basis.atom_count();
    const Eigen::VectorXcd sym = symmetric_ring_state(basis, n - 1);
    const Eigen::VectorXcd center = product_state(basis, 1u << (n - 1));

    EigenstateDecomposition d;
    d.energies = solver.eigenvalues();
    d.states = Eigen::MatrixXcd::Zero(dim, count);
    d.states.middleRows(begin, count) = solver.eigenvectors();
    d.populations.resize(count);
    d.overlaps_sym.resize(count);
    d.overlaps_center.resize(count);
    for (Eigen::Index k = 0; k < count; ++k) {
        const Eigen::VectorXcd psi = d.states.col(k);
        d.populations(k) = psi.dot(rho.matrix * psi).real();
        d.overlaps_sym(k) = std::norm(sym.dot(psi));
        d.overlaps_center(k) = std::norm(center.dot(psi));
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(count));
    for (Eigen::Index k = 0; k < count; ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        const double ox = d.overlaps_sym(x) + d.overlaps_center(x);
        const double oy = d.overlaps_sym(y) + d.overlaps_center(y);
        if (std::abs(ox - oy) > 1e-12) return ox > oy;
        return d.overlaps_sym(x) > d.overlaps_sym(y);
    });
    d.ansatz_valid = count >= 2;
    for (int p = 0; p < 2 && p < count; ++p) {
        const Eigen::Index k = order[p];
        d.dominant[p] = k;
        const Eigen::VectorXcd psi = d.states.col(k);
        d.a[p] = center.dot(psi);
        d.b[p] = sym.dot(psi);
        if (d.overlaps_sym(k) + d.overlaps_center(k) <= 0.5) d.ansatz_valid = false;
    }

    d.ground_population = rho.matrix(0, 0).real();
    double higher = 0.0;
    for (Eigen::Index k = static_cast<Eigen::Index>(basis.block_end(1)); k < dim; ++k) {
        higher += rho.matrix(k, k).real();
    }
    d.higher_population = higher;

    // H conserves the excitation number, so each manifold is diagonalized alone
    std::vector<double> multi;
    const Eigen::MatrixXcd hd = h.dense();
    for (std::size_t m = 2; m <= basis.max_excitations(); ++m) {
        const auto b0 = static_cast<Eigen::Index>(basis.block_begin(m));
        const auto bn = static_cast<Eigen::Index>(basis.block_end(m)) - b0;
        if (bn == 0) continue;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hd.block(b0, b0, bn, bn));
        const Eigen::MatrixXcd r = rho.matrix.block(b0, b0, bn, bn);
        for (Eigen::Index k = 0; k < bn; ++k) {
            const Eigen::VectorXcd psi = es.eigenvectors().col(k);
            multi.push_back(psi.dot(r * psi).real());
        }
    }
    d.higher_eigen_populations = Eigen::Map<Eigen::VectorXd>(multi.data(), static_cast<Eigen::Index>(multi.size()));
    return d;
}

} // namespace ringlaser
