// symmetric-subspace (Jaynes-Cummings-like) reduced model

#pragma once

#include <array>
#include <cstddef>
#include <utility>

#include "ringlaser/couplings.hpp"
#include "ringlaser/geometry.hpp"
#include "ringlaser/hilbert.hpp"

namespace ringlaser {

struct ReducedModel {
    double omega_sym{0.0};  // dipole shift of the symmetric ring state
    double gamma_sym{0.0};  // decay of the symmetric ring state (includes Gamma0)
    double omega_p{0.0};    // coherent center-ring coupling
    double gamma_p{0.0};    // dissipative center-ring coupling
    double cooperativity{0.0};
    std::size_t n_ring{0};
};

// Throws broken_symmetry if the ring block is not circulant to 1e-10.
ReducedModel reduce(const CouplingMatrices& couplings, const AtomArray& array);

// Gamma_sym of a ring with spacing d (center atom included in the array).
double gamma_sym_at(std::size_t n_ring, double spacing);

struct SubradiantMinimum {
    double d_star{0.0};
    double gamma_sym_min{0.0};
    bool boundary_minimum{false}; // the minimum sits on the scan boundary
};

// Global minimizer of Gamma_sym(d) on [d_lo, d_hi]: grid scan with step
// <= grid_step, then golden-section refinement.
SubradiantMinimum find_subradiant_distance(std::size_t n_ring, std::pair<double, double> d_range,
                                           double grid_step = 0.002);

// Three-state model on {|psi_sym,g>, |g..g,e>, |g..g,g>}.
struct ReducedCheck {
    std::array<double, 3> reduced_populations{};
    std::array<double, 3> full_populations{};  // full state projected on the same vectors
    std::array<double, 3> reduced_no_gamma_p{}; // reduced model with Gamma_p = 0
    double deviation{0.0};          // max_k |p_red - p_full| / p_full (excited states)
    double gamma_p_effect{0.0};     // same metric between reduced and reduced(Gamma_p = 0)
};

// Steady state of the three-state reduced master equation.
std::array<double, 3> reduced_steady_populations(const ReducedModel& model, double pump_rate,
                                                 bool include_gamma_p = true);

ReducedCheck reduced_dynamics_check(const DensityMatrix& full_steady, const ReducedModel& model,
                                    double pump_rate);

} // namespace ringlaser
