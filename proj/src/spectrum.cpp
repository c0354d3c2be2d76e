#include "ringlaser/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>
#include <unsupported/Eigen/NonLinearOptimization>

#include "ringlaser/error.hpp"

namespace ringlaser {

namespace {

constexpr double stationarity_tolerance = 1e-8;
constexpr Eigen::Index dense_propagator_limit = 1200;

// Lorentzian A / (1 + ((w - w0) / (fwhm / 2))^2)
struct LorentzianFunctor {
    using Scalar = double;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;

    const std::vector<double>& omega;
    const std::vector<double>& s;

    int inputs() const { return 3; }
    int values() const { return static_cast<int>(omega.size()); }

    int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
        for (std::size_t k = 0; k < omega.size(); ++k) {
            const double x = (omega[k] - p(1)) / (0.5 * p(2));
            r(k) = p(0) / (1.0 + x * x) - s[k];
        }
        return 0;
    }

    int df(const Eigen::VectorXd& p, Eigen::MatrixXd& j) const {
        for (std::size_t k = 0; k < omega.size(); ++k) {
            const double half = 0.5 * p(2);
            const double x = (omega[k] - p(1)) / half;
            const double den = 1.0 + x * x;
            j(k, 0) = 1.0 / den;
            j(k, 1) = p(0) * 2.0 * x / (den * den) / half;
            j(k, 2) = p(0) * 2.0 * x * x / (den * den) / p(2);
        }
        return 0;
    }
};

struct Crossings {
    double fwhm;
    double peak;
    bool found;
};

Crossings half_maximum(const std::vector<double>& omega, const std::vector<double>& s) {
    const auto top = std::max_element(s.begin(), s.end());
    const auto k0 = static_cast<std::size_t>(top - s.begin());
    const double half = 0.5 * *top;

    std::optional<double> left;
    for (std::size_t k = k0; k > 0; --k) {
        if (s[k - 1] < half) {
            const double f = (half - s[k - 1]) / (s[k] - s[k - 1]);
            left = omega[k - 1] + f * (omega[k] - omega[k - 1]);
            break;
        }
    }
    std::optional<double> right;
    for (std::size_t k = k0; k + 1 < s.size(); ++k) {
        if (s[k + 1] < half) {
            const double f = (s[k] - half) / (s[k] - s[k + 1]);
            right = omega[k] + f * (omega[k + 1] - omega[k]);
            break;
        }
    }
    if (!left || !right) return {0.0, omega[k0], false};
    return {*right - *left, omega[k0], true};
}

// 1/e decay time of |g1|, linearly interpolated.
double decay_time(const std::vector<cplx>& g, double step) {
    const double target = std::abs(g.front()) / std::exp(1.0);
    for (std::size_t k = 1; k < g.size(); ++k) {
        const double a = std::abs(g[k - 1]);
        const double b = std::abs(g[k]);
        if (b < target) {
            const double f = (a - target) / (a - b);
            return step * (static_cast<double>(k - 1) + f);
        }
    }
    return step * static_cast<double>(g.size() - 1);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    }
    return out;
}

} // namespace

std::vector<cplx> g1(const Liouvillian& l, const DensityMatrix& rho_ss,
                     const std::vector<double>& tau_grid, const EvolveOptions& options) {
    const BasisPtr& basis = l.basis();
    if (!(*rho_ss.basis == *basis)) {
        fail(ErrorKind::invalid_parameter, "steady state lives on a different basis");
    }
    const double residual = stationarity_residual(l, rho_ss);
    if (residual > stationarity_tolerance) {
        fail(ErrorKind::stale_steady_state,
             "state is not stationary under the generator (residual " + std::to_string(residual) +
                 ")");
    }

    std::vector<std::size_t> atoms(basis->atom_count());
    for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i] = i;
    const Operator lower = collective_lowering(atoms, basis);

    // S^- rho has exc(ket) = exc(bra) - 1
    const Sector sector = Sector::with_offset(*basis, -1);
    Eigen::VectorXcd x = sector.pack(lower.matrix * rho_ss.matrix);
    // Tr[S^+ X] = sum_{a,c} S^-(a, c) X(a, c)
    Eigen::VectorXcd weights = sector.pack(lower.dense());

    // S^- rho_ss inherits the ring symmetry; propagate one value per orbit
    std::optional<OrbitReduction> orbits;
    if (options.use_ring_symmetry) {
        if (const auto perms = generator_symmetries(l); !perms.empty()) {
            orbits.emplace(sector, *basis, perms);
            if (!orbits->is_invariant(x, 1e-10)) orbits.reset();
        }
    }
    Eigen::SparseMatrix<cplx> gen = l.generator(sector);
    if (orbits) {
        gen = orbits->reduce(gen);
        x = orbits->restrict(x);
        weights = orbits->sum_over_orbits(weights);
    }

    bool uniform = tau_grid.size() > 2 && tau_grid.front() == 0.0;
    const double h = uniform ? tau_grid[1] : 0.0;
    for (std::size_t k = 1; uniform && k < tau_grid.size(); ++k) {
        const double step = tau_grid[k] - tau_grid[k - 1];
        uniform = std::abs(step - h) <= 1e-12 * std::max(1.0, h) && h > 0.0;
    }

    std::vector<cplx> out;
    out.reserve(tau_grid.size());
    if (uniform && gen.rows() <= dense_propagator_limit) {
        // one-step propagator, reused for every sample
        const Eigen::MatrixXcd step_matrix = (Eigen::MatrixXcd(gen) * h).exp();
        for (std::size_t k = 0; k < tau_grid.size(); ++k) {
            if (k > 0) x = step_matrix * x;
            out.push_back((weights.array() * x.array()).sum());
        }
        return out;
    }

    KrylovOptions kopt;
    kopt.rtol = options.rtol;
    kopt.atol = options.atol;
    double t_prev = 0.0;
    for (double tau : tau_grid) {
        if (tau < t_prev) fail(ErrorKind::invalid_parameter, "tau grid must be ascending from 0");
        x = krylov_expv(tau - t_prev, gen, x, kopt);
        t_prev = tau;
        out.push_back((weights.array() * x.array()).sum());
    }
    return out;
}

std::vector<double> half_range_transform(const std::vector<cplx>& g, double h,
                                         const std::vector<double>& omegas) {
    std::vector<double> out;
    out.reserve(omegas.size());
    const std::size_t n = g.size();
    const cplx i1(0.0, 1.0);
    for (double w : omegas) {
        const double theta = w * h;
        double interior;
        cplx first;
        cplx last;
        if (std::abs(theta) < 1e-3) {
            const double t2 = theta * theta;
            interior = 1.0 - t2 / 12.0;
            first = cplx(0.5 - t2 / 24.0, -theta / 6.0);
            last = cplx(0.5 - t2 / 24.0, theta / 6.0);
        } else {
            const double t2 = theta * theta;
            interior = 2.0 * (1.0 - std::cos(theta)) / t2;
            first = -i1 / theta + (1.0 - std::exp(-i1 * theta)) / t2;
            last = i1 / theta + (1.0 - std::exp(i1 * theta)) / t2;
        }
        const cplx rot = std::exp(-i1 * theta);
        cplx phase = 1.0;
        cplx acc = first * g[0];
        for (std::size_t k = 1; k + 1 < n; ++k) {
            phase *= rot;
            acc += interior * g[k] * phase;
        }
        phase *= rot;
        acc += last * g[n - 1] * phase;
        out.push_back(2.0 * (h * acc).real());
    }
    return out;
}

SpectrumResult wiener_khinchin(const std::vector<cplx>& g1_values,
                               const std::vector<double>& tau_grid,
                               const TransformOptions& options) {
    if (g1_values.size() != tau_grid.size() || tau_grid.size() < 3) {
        fail(ErrorKind::invalid_parameter, "g1 samples and tau grid must match (>= 3 points)");
    }
    const double h = tau_grid[1] - tau_grid[0];
    for (std::size_t k = 1; k < tau_grid.size(); ++k) {
        if (std::abs((tau_grid[k] - tau_grid[k - 1]) - h) > 1e-9 * std::max(1.0, h)) {
            fail(ErrorKind::invalid_parameter, "tau grid must be uniform");
        }
    }
    const double g0 = std::abs(g1_values.front());
    if (!(g0 > 0.0)) fail(ErrorKind::undefined_statistics, "g1(0) vanishes, no emission");
    if (std::abs(g1_values.back()) > options.decay_threshold * g0) {
        fail(ErrorKind::window_truncation,
             "g1 has only decayed to " + std::to_string(std::abs(g1_values.back()) / g0) +
                 " of its initial value at tau_max = " + std::to_string(tau_grid.back()) +
                 "; increase tau_max");
    }

    SpectrumResult r;
    r.tau_grid = tau_grid;
    r.g1_values = g1_values;

    // Locate the peak on a coarse grid spanning the sampling bandwidth.
    const double nyquist = 3.14159265358979323846 / h;
    const auto coarse_grid = linspace(-nyquist, nyquist, 4001);
    const auto coarse = half_range_transform(g1_values, h, coarse_grid);
    const auto top = std::max_element(coarse.begin(), coarse.end()) - coarse.begin();
    double centre = coarse_grid[static_cast<std::size_t>(top)];

    const double expected = 2.0 / decay_time(g1_values, h);
    double span = options.width_span * expected;
    Crossings cross{};
    for (int attempt = 0; attempt < 6; ++attempt) {
        r.omega_grid = linspace(centre - span, centre + span, options.omega_points);
        r.s_values = half_range_transform(g1_values, h, r.omega_grid);
        cross = half_maximum(r.omega_grid, r.s_values);
        if (cross.found) break;
        span *= 2.0;
    }
    if (!cross.found) {
        fail(ErrorKind::window_truncation, "half-maximum crossings not found in frequency window");
    }
    // Re-centre on the actual peak so the window is symmetric about it.
    if (std::abs(cross.peak - centre) > 0.05 * span) {
        centre = cross.peak;
        r.omega_grid = linspace(centre - span, centre + span, options.omega_points);
        r.s_values = half_range_transform(g1_values, h, r.omega_grid);
        cross = half_maximum(r.omega_grid, r.s_values);
    }
    r.fwhm = cross.fwhm;
    r.peak = cross.peak;

    LorentzianFunctor functor{r.omega_grid, r.s_values};
    Eigen::VectorXd p(3);
    p << *std::max_element(r.s_values.begin(), r.s_values.end()), r.peak, r.fwhm;
    Eigen::LevenbergMarquardt<LorentzianFunctor> lm(functor);
    lm.minimize(p);
    Eigen::VectorXd residual(functor.values());
    functor(p, residual);
    const double smax = *std::max_element(r.s_values.begin(), r.s_values.end());
    r.fwhm_fit = std::abs(p(2));
    r.fit_residual = std::sqrt(residual.squaredNorm() / static_cast<double>(residual.size())) / smax;
    r.lorentzian = r.fit_residual < 0.02 && std::abs(r.fwhm_fit - r.fwhm) <= 0.05 * r.fwhm;
    return r;
}

double default_tau_max(double gamma_sym, double pump_rate) {
    double slowest = std::min(gamma_sym, gamma0);
    if (pump_rate > 0.0) slowest = std::min(slowest, pump_rate);
    if (!(slowest > 0.0)) fail(ErrorKind::invalid_parameter, "relaxation rates must be positive");
    return 30.0 / slowest;
}

SpectrumResult compute_spectrum(const Liouvillian& l, const DensityMatrix& rho_ss,
                                const SpectrumOptions& options) {
    double tau_max = 0.0;
    if (options.tau_max) {
        tau_max = *options.tau_max;
    } else {
        const Eigen::MatrixXd& g = l.couplings().gamma;
        const Eigen::Index ring = g.rows() - 1;
        const double gamma_sym = ring > 0 ? g.topLeftCorner(ring, ring).sum() / ring : gamma0;
        tau_max = default_tau_max(gamma_sym, l.pump_rate());
    }
    if (options.tau_samples < 3 || !(tau_max > 0.0)) {
        fail(ErrorKind::invalid_parameter, "spectrum needs tau_max > 0 and >= 3 samples");
    }

    std::size_t samples = options.tau_samples;
    const double step = tau_max / static_cast<double>(samples - 1);
    for (int ext = 0;; ++ext) {
        std::vector<double> taus(samples);
        for (std::size_t k = 0; k < samples; ++k) taus[k] = step * static_cast<double>(k);
        const auto values = g1(l, rho_ss, taus, options.evolve);
        try {
            return wiener_khinchin(values, taus, options.transform);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::window_truncation || ext >= options.max_extensions) throw;
        }
        samples = 2 * samples - 1;
    }
}

} // namespace ringlaser
