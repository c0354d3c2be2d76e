#include "ringlaser/reduced.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "ringlaser/error.hpp"

namespace ringlaser {

namespace {

constexpr double circulant_tolerance = 1e-10;

// Dense vectorized Lindblad generator (column-major vec) for small systems:
// -i[H, rho] + sum_xy R_xy (X rho Y^dag - 1/2 {Y^dag X, rho})
Eigen::MatrixXcd small_generator(const Eigen::MatrixXcd& h,
                                 const std::vector<Eigen::MatrixXcd>& jumps,
                                 const Eigen::MatrixXd& rates) {
    const Eigen::Index d = h.rows();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    auto kron = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
        Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            for (Eigen::Index j = 0; j < a.cols(); ++j) {
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
            }
        }
        return out;
    };
    const cplx i1(0.0, 1.0);
    // vec(A X B) = (B^T kron A) vec(X)
    Eigen::MatrixXcd g = -i1 * kron(id, h) + i1 * kron(h.transpose(), id);
    for (std::size_t x = 0; x < jumps.size(); ++x) {
        for (std::size_t y = 0; y < jumps.size(); ++y) {
            const double r = rates(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
            if (r == 0.0) continue;
            const Eigen::MatrixXcd& a = jumps[x];
            const Eigen::MatrixXcd yd = jumps[y].adjoint();
            const Eigen::MatrixXcd ya = yd * a;
            g += r * (kron(yd.transpose(), a) - 0.5 * kron(id, ya) - 0.5 * kron(ya.transpose(), id));
        }
    }
    return g;
}

double relative_gap(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    double worst = 0.0;
    for (int k = 0; k < 2; ++k) {
        if (b[k] > 0.0) worst = std::max(worst, std::abs(a[k] - b[k]) / b[k]);
    }
    return worst;
}

} // namespace

ReducedModel reduce(const CouplingMatrices& couplings, const AtomArray& array) {
    const std::size_t n = array.ring_count;
    const auto p = static_cast<Eigen::Index>(array.center_index);
    if (couplings.size() != static_cast<Eigen::Index>(array.atom_count()) || n < 1) {
        fail(ErrorKind::invalid_parameter, "couplings do not match the atom array");
    }
    const Eigen::MatrixXd& om = couplings.omega;
    const Eigen::MatrixXd& ga = couplings.gamma;
    const auto ni = static_cast<Eigen::Index>(n);
    for (Eigen::Index i = 0; i < ni; ++i) {
        for (Eigen::Index j = 0; j < ni; ++j) {
            const Eigen::Index k = ((j - i) % ni + ni) % ni;
            if (std::abs(om(i, j) - om(0, k)) > circulant_tolerance ||
                std::abs(ga(i, j) - ga(0, k)) > circulant_tolerance) {
                fail(ErrorKind::broken_symmetry, "ring coupling block is not circulant");
            }
        }
        if (std::abs(om(p, i) - om(p, 0)) > circulant_tolerance ||
            std::abs(ga(p, i) - ga(p, 0)) > circulant_tolerance) {
            fail(ErrorKind::broken_symmetry, "center atom couples unequally to the ring");
        }
    }

    ReducedModel m;
    m.n_ring = n;
    m.gamma_sym = ga(0, 0);
    for (Eigen::Index j = 1; j < ni; ++j) {
        m.omega_sym += om(0, j);
        m.gamma_sym += ga(0, j);
    }
    m.omega_p = om(p, 0);
    m.gamma_p = ga(p, 0);
    m.cooperativity = static_cast<double>(n) * m.omega_p * m.omega_p / (gamma0 * m.gamma_sym);
    return m;
}

double gamma_sym_at(std::size_t n_ring, double spacing) {
    const AtomArray array = build_ring_with_center(n_ring, spacing);
    return reduce(coupling_matrices(array), array).gamma_sym;
}

SubradiantMinimum find_subradiant_distance(std::size_t n_ring, std::pair<double, double> d_range,
                                           double grid_step) {
    const auto [lo, hi] = d_range;
    if (n_ring < 3) fail(ErrorKind::invalid_geometry, "ring needs at least 3 atoms");
    if (!(lo >= 0.05 && hi <= 1.5 && lo < hi)) {
        fail(ErrorKind::invalid_parameter, "distance range must lie within [0.05, 1.5] lambda0");
    }
    if (!(grid_step > 0.0 && grid_step <= 0.002)) {
        fail(ErrorKind::invalid_parameter, "grid step must be in (0, 0.002] lambda0");
    }

    const auto steps = static_cast<std::size_t>(std::ceil((hi - lo) / grid_step));
    const double h = (hi - lo) / static_cast<double>(steps);
    std::size_t best = 0;
    double best_value = gamma_sym_at(n_ring, lo);
    for (std::size_t k = 1; k <= steps; ++k) {
        const double v = gamma_sym_at(n_ring, lo + h * static_cast<double>(k));
        if (v < best_value) {
            best_value = v;
            best = k;
        }
    }
    if (best == 0 || best == steps) {
        return {lo + h * static_cast<double>(best), best_value, true};
    }

    // golden-section search on the bracketing interval
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo + h * static_cast<double>(best - 1);
    double b = lo + h * static_cast<double>(best + 1);
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = gamma_sym_at(n_ring, c);
    double fd = gamma_sym_at(n_ring, d);
    while (b - a > 1e-10) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = gamma_sym_at(n_ring, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = gamma_sym_at(n_ring, d);
        }
    }
    const double d_star = 0.5 * (a + b);
    return {d_star, gamma_sym_at(n_ring, d_star), false};
}

std::array<double, 3> reduced_steady_populations(const ReducedModel& model, double pump_rate,
                                                 bool include_gamma_p) {
    if (!(pump_rate >= 0.0)) fail(ErrorKind::invalid_parameter, "pump rate must be non-negative");
    const double sqrt_n = std::sqrt(static_cast<double>(model.n_ring));

    // states: 0 = |psi_sym, g>, 1 = |g..g, e>, 2 = ground
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(3, 3);
    h(0, 0) = model.omega_sym;
    h(0, 1) = h(1, 0) = sqrt_n * model.omega_p;

    Eigen::MatrixXcd lower_sym = Eigen::MatrixXcd::Zero(3, 3);
    lower_sym(2, 0) = 1.0;
    Eigen::MatrixXcd lower_p = Eigen::MatrixXcd::Zero(3, 3);
    lower_p(2, 1) = 1.0;
    Eigen::MatrixXcd raise_p = Eigen::MatrixXcd::Zero(3, 3);
    raise_p(1, 2) = 1.0;

    const double cross = include_gamma_p ? sqrt_n * model.gamma_p : 0.0;
    Eigen::MatrixXd rates = Eigen::MatrixXd::Zero(3, 3);
    rates(0, 0) = model.gamma_sym;
    rates(1, 1) = gamma0;
    rates(0, 1) = rates(1, 0) = cross;
    rates(2, 2) = pump_rate;

    const Eigen::MatrixXcd g = small_generator(h, {lower_sym, lower_p, raise_p}, rates);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(g, Eigen::ComputeFullV);
    const Eigen::VectorXcd v = svd.matrixV().col(8);
    const cplx tr = v(0) + v(4) + v(8);
    return {(v(0) / tr).real(), (v(4) / tr).real(), (v(8) / tr).real()};
}

ReducedCheck reduced_dynamics_check(const DensityMatrix& full_steady, const ReducedModel& model,
                                    double pump_rate) {
    const Basis& basis = *full_steady.basis;
    if (basis.max_excitations() < 1 || basis.atom_count() != model.n_ring + 1) {
        fail(ErrorKind::invalid_parameter, "full state does not match the reduced model");
    }
    const Eigen::VectorXcd sym = symmetric_ring_state(basis, model.n_ring);
    const Eigen::VectorXcd center = product_state(basis, 1u << model.n_ring);

    ReducedCheck c;
    c.full_populations = {sym.dot(full_steady.matrix * sym).real(),
                          center.dot(full_steady.matrix * center).real(),
                          full_steady.matrix(0, 0).real()};
    c.reduced_populations = reduced_steady_populations(model, pump_rate, true);
    c.reduced_no_gamma_p = reduced_steady_populations(model, pump_rate, false);
    c.deviation = relative_gap(c.reduced_populations, c.full_populations);
    c.gamma_p_effect = relative_gap(c.reduced_no_gamma_p, c.reduced_populations);
    return c;
}

} // namespace ringlaser
