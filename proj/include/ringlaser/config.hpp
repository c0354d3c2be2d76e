// INI-style simulation configuration

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ringlaser/hilbert.hpp"
#include "ringlaser/observables.hpp"

namespace ringlaser {

// auto: full basis up to `full_basis_atoms` atoms, M = 2 above.
struct TruncationSetting {
    enum class Policy { automatic, full, fixed };
    Policy policy{Policy::automatic};
    std::size_t max_excitations{2};
    std::size_t full_basis_atoms{6};

    Truncation resolve(std::size_t atom_count) const;
};

// What is computed per sweep point.
enum class SweepLevel { couplings, steady, spectrum };

struct SimConfig {
    struct System {
        std::size_t n_ring{5};
        std::optional<double> spacing{0.5}; // empty: subradiant distance d*
        double pump_rate{0.1};
        TruncationSetting truncation{};
        std::pair<double, double> subradiant_range{0.1, 1.2};
    } system;

    struct Solver {
        double rtol{1e-8};
        double atol{1e-10};
        std::size_t svd_limit{1200};
    } solver;

    struct Sweep {
        std::vector<std::size_t> n_ring;   // defaults to system.n_ring
        std::vector<double> spacing;       // defaults to system.spacing
        bool subradiant{false};            // spacing = d*(N) instead
        std::vector<double> pump_rate;     // defaults to system.pump_rate
        SweepLevel level{SweepLevel::steady};
    } sweep;

    struct Spectrum {
        std::optional<double> tau_max;
        std::size_t tau_samples{4096};
        std::size_t omega_points{2001};
    } spectrum;

    struct Evolve {
        double t_end{100.0};
        std::size_t steps{200};
    } evolve;

    PlaneSpec map{};

    struct TruncationCheck {
        std::vector<double> pump_rate{0.1, 0.5, 1.0};
        bool spectrum{false};
    } truncation_check;

    struct Output {
        std::string dir{"out"};
        std::string name{"ringlaser"}; // file name stem
    } output;
};

// Throws invalid_config with the offending key on any problem.
SimConfig parse_config(const std::string& text);
SimConfig load_config(const std::string& path);

// Axis syntax: "a, b, c", "lin(a, b, n)", "log(a, b, n)".
std::vector<double> parse_real_axis(const std::string& text);
// Axis syntax: "3, 5, 8" or "3..8".
std::vector<std::size_t> parse_count_axis(const std::string& text);

} // namespace ringlaser
