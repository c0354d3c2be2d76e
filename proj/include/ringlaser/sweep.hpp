// parameter sweeps over (N, d, nu) and the truncation comparison

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ringlaser/config.hpp"
#include "ringlaser/csv.hpp"
#include "ringlaser/dynamics.hpp"
#include "ringlaser/geometry.hpp"
#include "ringlaser/reduced.hpp"
#include "ringlaser/spectrum.hpp"

namespace ringlaser {

struct SweepPoint {
    std::size_t n_ring{0};
    double spacing{0.0};
    double pump_rate{0.0};
};

// Quantities that were not computed (level too low, or failed) are NaN and
// the reason is in `status` ("ok" or ';'-separated tags).
struct SweepRecord {
    std::size_t n_ring{0};
    double spacing{0.0};
    double pump_rate{0.0};
    double gamma_sym{0.0};
    double omega_sym{0.0};
    double gamma_p{0.0};
    double omega_p{0.0};
    double cooperativity{0.0};
    double i_out{0.0};
    double g2_zero{0.0};
    double fwhm{0.0};
    double sym_population{0.0};
    std::size_t basis_dim{0};
    double wall_time{0.0}; // seconds; written to a separate timing file
    std::string status{"ok"};
};

struct PointOptions {
    SweepLevel level{SweepLevel::steady};
    TruncationSetting truncation{};
    SteadyStateOptions steady{};
    SpectrumOptions spectrum{};
};

PointOptions point_options(const SimConfig& config);

// Everything needed to solve one parameter point.
struct PointModel {
    AtomArray array;
    CouplingMatrices couplings;
    ReducedModel reduced;
    BasisPtr basis;
    Liouvillian liouvillian;
};

PointModel build_point_model(const SweepPoint& point, const TruncationSetting& truncation);

// Resolves a configured spacing (empty: d* from the subradiant range).
double resolve_spacing(const SimConfig& config, std::size_t n_ring);

// Per-point failures are caught and recorded in `status`.
SweepRecord evaluate_point(const SweepPoint& point, const PointOptions& options);

// Grid points sorted by N, d, nu. Subradiant sweeps use d*(N) per N.
std::vector<SweepPoint> sweep_points(const SimConfig& config);

// Thread count from RINGLASER_THREADS (default: hardware concurrency).
std::size_t thread_count_from_env();

std::vector<SweepRecord> run_sweep(const SimConfig& config, std::size_t threads = 0);

CsvTable records_table(const std::vector<SweepRecord>& records);
CsvTable timing_table(const std::vector<SweepRecord>& records);

struct TruncationPair {
    double pump_rate{0.0};
    SweepRecord full;
    SweepRecord truncated;
    double i_out_deviation{0.0}; // |trunc - full| / |full|, 0 if both vanish
    double g2_deviation{0.0};
    double fwhm_deviation{0.0};
};

// Largest full basis the comparison accepts.
inline constexpr std::size_t truncation_check_dimension_limit = std::size_t{1} << 10;

// Full vs M = 2 on identical parameters. Throws resource_limit if the full
// basis would exceed truncation_check_dimension_limit.
std::vector<TruncationPair> truncation_comparison(std::size_t n_ring, double spacing,
                                                  const std::vector<double>& nu_grid,
                                                  PointOptions options = {});

CsvTable truncation_table(const std::vector<TruncationPair>& pairs);

} // namespace ringlaser
