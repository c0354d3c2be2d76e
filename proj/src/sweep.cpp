#include "ringlaser/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "ringlaser/couplings.hpp"
#include "ringlaser/error.hpp"
#include "ringlaser/geometry.hpp"
#include "ringlaser/observables.hpp"
#include "ringlaser/reduced.hpp"

namespace ringlaser {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

void add_status(SweepRecord& r, const std::string& tag) {
    r.status = r.status == "ok" ? tag : r.status + ";" + tag;
}

double relative_deviation(double reference, double value) {
    if (std::isnan(reference) || std::isnan(value)) return nan;
    if (reference == 0.0) return value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(value - reference) / std::abs(reference);
}

} // namespace

PointOptions point_options(const SimConfig& config) {
    PointOptions o;
    o.level = config.sweep.level;
    o.truncation = config.system.truncation;
    o.steady.svd_limit = config.solver.svd_limit;
    o.spectrum.tau_max = config.spectrum.tau_max;
    o.spectrum.tau_samples = config.spectrum.tau_samples;
    o.spectrum.transform.omega_points = config.spectrum.omega_points;
    o.spectrum.evolve.rtol = config.solver.rtol;
    o.spectrum.evolve.atol = config.solver.atol;
    return o;
}

PointModel build_point_model(const SweepPoint& point, const TruncationSetting& truncation) {
    AtomArray array = build_ring_with_center(point.n_ring, point.spacing);
    CouplingMatrices couplings = coupling_matrices(array);
    const ReducedModel reduced = reduce(couplings, array);
    BasisPtr basis = build_basis(array.atom_count(), truncation.resolve(array.atom_count()));
    Liouvillian l =
        build_liouvillian(build_hamiltonian(couplings, basis), couplings, point.pump_rate);
    return {std::move(array), std::move(couplings), reduced, std::move(basis), std::move(l)};
}

double resolve_spacing(const SimConfig& config, std::size_t n_ring) {
    if (config.system.spacing) return *config.system.spacing;
    return find_subradiant_distance(n_ring, config.system.subradiant_range).d_star;
}

SweepRecord evaluate_point(const SweepPoint& point, const PointOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    SweepRecord r;
    r.n_ring = point.n_ring;
    r.spacing = point.spacing;
    r.pump_rate = point.pump_rate;
    r.gamma_sym = r.omega_sym = r.gamma_p = r.omega_p = r.cooperativity = nan;
    r.i_out = r.g2_zero = r.fwhm = r.sym_population = nan;

    try {
        if (options.level == SweepLevel::couplings) {
            const AtomArray array = build_ring_with_center(point.n_ring, point.spacing);
            const ReducedModel model = reduce(coupling_matrices(array), array);
            r.gamma_sym = model.gamma_sym;
            r.omega_sym = model.omega_sym;
            r.gamma_p = model.gamma_p;
            r.omega_p = model.omega_p;
            r.cooperativity = model.cooperativity;
        } else {
            const PointModel m = build_point_model(point, options.truncation);
            r.gamma_sym = m.reduced.gamma_sym;
            r.omega_sym = m.reduced.omega_sym;
            r.gamma_p = m.reduced.gamma_p;
            r.omega_p = m.reduced.omega_p;
            r.cooperativity = m.reduced.cooperativity;
            r.basis_dim = m.basis->dimension();
            const Liouvillian& l = m.liouvillian;
            const CouplingMatrices& couplings = m.couplings;
            const DensityMatrix rho = steady_state(l, options.steady);
            r.i_out = output_intensity(rho, couplings);
            r.sym_population = symmetric_population(rho);
            try {
                r.g2_zero = g2_zero(rho);
            } catch (const Error& e) {
                add_status(r, std::string("g2:") + std::string(to_string(e.kind())));
            }
            if (options.level == SweepLevel::spectrum) {
                try {
                    r.fwhm = compute_spectrum(l, rho, options.spectrum).fwhm;
                } catch (const Error& e) {
                    add_status(r, std::string("fwhm:") + std::string(to_string(e.kind())));
                }
            }
        }
    } catch (const Error& e) {
        add_status(r, std::string(to_string(e.kind())));
    } catch (const std::bad_alloc&) {
        add_status(r, std::string(to_string(ErrorKind::resource_limit)));
    }
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<SweepPoint> sweep_points(const SimConfig& config) {
    const auto& s = config.sweep;
    if (s.n_ring.empty() || s.pump_rate.empty() || (!s.subradiant && s.spacing.empty())) {
        fail(ErrorKind::invalid_config, "sweep axes must not be empty");
    }
    std::vector<std::size_t> ns = s.n_ring;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    std::vector<double> nus = s.pump_rate;
    std::sort(nus.begin(), nus.end());

    std::vector<SweepPoint> points;
    for (std::size_t n : ns) {
        std::vector<double> ds = s.spacing;
        if (s.subradiant) ds = {find_subradiant_distance(n, config.system.subradiant_range).d_star};
        std::sort(ds.begin(), ds.end());
        for (double d : ds) {
            for (double nu : nus) points.push_back({n, d, nu});
        }
    }
    return points;
}

std::size_t thread_count_from_env() {
    if (const char* env = std::getenv("RINGLASER_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || n < 1) {
            fail(ErrorKind::invalid_config, "RINGLASER_THREADS must be a positive integer");
        }
        return static_cast<std::size_t>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SweepRecord> run_sweep(const SimConfig& config, std::size_t threads) {
    const auto points = sweep_points(config);
    const PointOptions options = point_options(config);
    if (threads == 0) threads = thread_count_from_env();
    threads = std::min(threads, std::max<std::size_t>(points.size(), 1));

    // each worker writes only its own slots; order is fixed by `points`
    std::vector<SweepRecord> records(points.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < points.size(); k = next++) {
            records[k] = evaluate_point(points[k], options);
        }
    };
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    }
    return records;
}

CsvTable records_table(const std::vector<SweepRecord>& records) {
    CsvTable t;
    t.header = {"n_ring", "spacing", "pump_rate", "gamma_sym", "omega_sym", "gamma_p", "omega_p",
                "cooperativity", "i_out", "g2_zero", "fwhm", "sym_population", "basis_dim",
                "status"};
    for (const auto& r : records) {
        t.rows.push_back({std::to_string(r.n_ring), format_double(r.spacing),
                          format_double(r.pump_rate), format_double(r.gamma_sym),
                          format_double(r.omega_sym), format_double(r.gamma_p),
                          format_double(r.omega_p), format_double(r.cooperativity),
                          format_double(r.i_out), format_double(r.g2_zero), format_double(r.fwhm),
                          format_double(r.sym_population), std::to_string(r.basis_dim), r.status});
    }
    return t;
}

CsvTable timing_table(const std::vector<SweepRecord>& records) {
    CsvTable t;
    t.header = {"n_ring", "spacing", "pump_rate", "wall_time"};
    for (const auto& r : records) {
        t.rows.push_back({std::to_string(r.n_ring), format_double(r.spacing),
                          format_double(r.pump_rate), format_double(r.wall_time)});
    }
    return t;
}

std::vector<TruncationPair> truncation_comparison(std::size_t n_ring, double spacing,
                                                  const std::vector<double>& nu_grid,
                                                  PointOptions options) {
    if (nu_grid.empty()) fail(ErrorKind::invalid_config, "pump-rate grid must not be empty");
    if (n_ring + 1 >= 8 * sizeof(std::size_t) ||
        (std::size_t{1} << (n_ring + 1)) > truncation_check_dimension_limit) {
        fail(ErrorKind::resource_limit,
             "full basis of " + std::to_string(n_ring + 1) +
                 " atoms exceeds 2^10 states; use at most 9 ring atoms or compare truncations "
                 "with a sweep instead");
    }
    std::vector<TruncationPair> out;
    for (double nu : nu_grid) {
        TruncationPair p;
        p.pump_rate = nu;
        options.truncation.policy = TruncationSetting::Policy::full;
        p.full = evaluate_point({n_ring, spacing, nu}, options);
        options.truncation.policy = TruncationSetting::Policy::fixed;
        options.truncation.max_excitations = 2;
        p.truncated = evaluate_point({n_ring, spacing, nu}, options);
        p.i_out_deviation = relative_deviation(p.full.i_out, p.truncated.i_out);
        p.g2_deviation = relative_deviation(p.full.g2_zero, p.truncated.g2_zero);
        p.fwhm_deviation = relative_deviation(p.full.fwhm, p.truncated.fwhm);
        out.push_back(std::move(p));
    }
    return out;
}

CsvTable truncation_table(const std::vector<TruncationPair>& pairs) {
    CsvTable t;
    t.header = {"pump_rate",    "dim_full",      "dim_truncated", "i_out_full",
                "i_out_truncated", "i_out_deviation", "g2_full",   "g2_truncated",
                "g2_deviation", "fwhm_full",     "fwhm_truncated", "fwhm_deviation",
                "status_full",  "status_truncated"};
    for (const auto& p : pairs) {
        t.rows.push_back({format_double(p.pump_rate), std::to_string(p.full.basis_dim),
                          std::to_string(p.truncated.basis_dim), format_double(p.full.i_out),
                          format_double(p.truncated.i_out), format_double(p.i_out_deviation),
                          format_double(p.full.g2_zero), format_double(p.truncated.g2_zero),
                          format_double(p.g2_deviation), format_double(p.full.fwhm),
                          format_double(p.truncated.fwhm), format_double(p.fwhm_deviation),
                          p.full.status, p.truncated.status});
    }
    return t;
}

} // namespace ringlaser
