// first-order coherence and emission spectrum

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ringlaser/dynamics.hpp"

namespace ringlaser {

// g1(tau) = sum_ij Tr[sigma_i^+ exp(L tau)(sigma_j^- rho_ss)] (quantum regression).
// Throws stale_steady_state if rho_ss is not stationary under l.
std::vector<cplx> g1(const Liouvillian& l, const DensityMatrix& rho_ss,
                     const std::vector<double>& tau_grid, const EvolveOptions& options = {});

struct TransformOptions {
    std::size_t omega_points{2001};
    double width_span{20.0};          // half-span of the fine grid in expected widths
    double decay_threshold{1e-4};     // |g1(tau_max)| / |g1(0)| must be below this
};

struct SpectrumResult {
    std::vector<double> tau_grid;
    std::vector<cplx> g1_values;
    std::vector<double> omega_grid; // relative to omega0, units Gamma0
    std::vector<double> s_values;
    double fwhm{0.0};               // from half-maximum crossings
    double peak{0.0};               // peak position (collective shift)
    double fwhm_fit{0.0};           // Lorentzian least-squares width
    double fit_residual{0.0};       // rms residual / max(S)
    bool lorentzian{true};          // fit residual < 2% and widths within 5%
};

// S(omega) = 2 Re int_0^inf dtau exp(-i omega tau) g1(tau) on a uniform grid.
SpectrumResult wiener_khinchin(const std::vector<cplx>& g1_values,
                               const std::vector<double>& tau_grid,
                               const TransformOptions& options = {});

// Half-range transform of the sampled g1 at arbitrary frequencies, exact
// for the piecewise-linear interpolant of the samples.
std::vector<double> half_range_transform(const std::vector<cplx>& g1_values, double tau_step,
                                         const std::vector<double>& omegas);

struct SpectrumOptions {
    std::optional<double> tau_max; // default: 30 / min(slowest rate)
    std::size_t tau_samples{4096};
    int max_extensions{3};          // doublings of tau_max if g1 has not decayed
    TransformOptions transform{};
    EvolveOptions evolve{};
};

// tau_max default 30 / min(gamma_sym, nu, Gamma0); nu == 0 is ignored.
double default_tau_max(double gamma_sym, double pump_rate);

// g1 + transform. Without an explicit tau_max the symmetric-state decay is
// taken from the couplings (ring atoms 0..n-2).
SpectrumResult compute_spectrum(const Liouvillian& l, const DensityMatrix& rho_ss,
                                const SpectrumOptions& options = {});

} // namespace ringlaser
