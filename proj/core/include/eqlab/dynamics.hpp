#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eqlab/estimate.hpp"
#include "eqlab/fields.hpp"
#include "eqlab/models.hpp"
#include "eqlab/phase_state.hpp"

namespace eqlab {

/// Hard cap on the number of steps of a single integration.
inline constexpr std::uint64_t kMaxIntegrationSteps = 1'000'000'000;

/// Number of blocks used for block-averaged error bars.
inline constexpr std::size_t kAverageBlocks = 16;

/// Step and trajectory length for orbit-based averages.
struct DynamicsConfig {
    double steps_per_period = 4000.0; ///< h = T(E) / steps_per_period
    double periods = 2000.0;          ///< t_end = periods * T(E)

    void validate() const;
};

struct OrbitRecord {
    std::string model;
    double energy = 0.0;
    double step = 0.0;
    std::vector<PhaseState> states;
    std::vector<double> times;
    double max_energy_drift = 0.0;
    bool drift_exceeded = false;
};

/// Allowed max |H(x_t) - E| along an orbit: 1e-6 (E - e_min).
double drift_budget(const HamiltonianModel& model, double energy);

/// One kick-drift-kick leapfrog step; circle coordinates are re-wrapped.
/// Requires a separable model.
PhaseState verlet_step(const HamiltonianModel& model, const PhaseState& x, double h);

/// Integrates ceil(t_end / h) steps from x0 and records every state.
OrbitRecord integrate_orbit(const HamiltonianModel& model, const PhaseState& x0, double t_end,
                            double h);

/// Mean of f over the states x_0 .. x_{N-1} of the leapfrog orbit with
/// N = ceil(t_end / h). The error bar combines the spread of kAverageBlocks
/// contiguous blocks with a step-size bias estimate from a second run at 2h.
/// Nothing is stored.
Estimate time_average(const HamiltonianModel& model, const StateFunction& f,
                      const PhaseState& x0, double t_end, double h);

/// Several observables along one orbit.
std::vector<Estimate> time_averages(const HamiltonianModel& model,
                                    const std::vector<StateFunction>& fs, const PhaseState& x0,
                                    double t_end, double h);

/// Time of the first crossing of the section q_0 = 0 in the direction of
/// motion after t = 0, by linear interpolation between steps. Throws
/// NumericalError when no crossing happens before t_max.
double first_return_time(const HamiltonianModel& model, const PhaseState& x0, double h,
                         double t_max);

// Exact one degree of freedom quantities (separable H = p^2/2m + V(q)).

/// Period of the orbit on one component of H = E, by adaptive quadrature.
double orbit_period(const HamiltonianModel& model, double energy, Component component);

/// Signed time from the reference point (0, sign * p(0)) of the orbit
/// through x to x. Oscillations return values in (-T/2, T/2].
double time_of_flight(const HamiltonianModel& model, const PhaseState& x);

/// Component of the level set on which x lies.
Component component_of(const HamiltonianModel& model, const PhaseState& x);

} // namespace eqlab
