#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eqlab/estimate.hpp"
#include "eqlab/fields.hpp"
#include "eqlab/models.hpp"

namespace eqlab {

struct McConfig {
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t seed = 0;
    double fd_step = 1e-3;                 ///< relative to max(1, E - e_min)
    std::optional<double> shell_thickness; ///< default 1e-3 max(1, |E - e_min|)
    unsigned workers = 1;                  ///< never changes results

    void validate() const;
    double fd_window(const HamiltonianModel& model, double energy) const;
    double shell_for(const HamiltonianModel& model, double energy) const;
};

/// How to evaluate a quantity that has both a Monte Carlo and an exact one
/// degree of freedom route. `automatic` picks quadrature for n = 1 away from
/// critical values.
enum class Route { automatic, monte_carlo, quadrature };

struct VolumeCurve {
    std::vector<double> energies;
    std::vector<Estimate> vol_me;
    std::vector<Estimate> vol_sigma;
    std::vector<Estimate> kT;
    /// Energy lies in the guard band of a critical value; Monte Carlo was
    /// used and quantities that do not exist there are NaN.
    std::vector<bool> guarded;
};

/// Vol(M_E) by rejection sampling in the model's bounding box.
Estimate vol_me_mc(const HamiltonianModel& model, double energy, const McConfig& cfg);

/// Vol(M_E) = 2 * integral of p_+(q) dq for one degree of freedom.
Estimate vol_me_quadrature_1dof(const HamiltonianModel& model, double energy);

/// Vol(Sigma_E) = dVol(M_E)/dE: summed component periods (quadrature) or a
/// correlated central difference of Monte Carlo volumes.
Estimate vol_sigma(const HamiltonianModel& model, double energy, const McConfig& cfg,
                   Route route = Route::automatic);

/// Gibbs temperature kT = Vol(M_E) / Vol(Sigma_E).
Estimate temperature_kT(const HamiltonianModel& model, double energy, const McConfig& cfg,
                        Route route = Route::automatic);

/// Integral of div(X) over M_E by Monte Carlo, on the same sample stream as
/// vol_me_mc.
Estimate div_integral(const HamiltonianModel& model, const VectorFieldSpec& field,
                      double energy, const McConfig& cfg);

/// Integral of div(X) over M_E by nested adaptive quadrature (n = 1).
Estimate div_integral_quadrature_1dof(const HamiltonianModel& model,
                                      const VectorFieldSpec& field, double energy);

/// Time average over one period, computed as a q-quadrature with weight
/// m/|p|. Without a component, all components at E are combined with
/// period weights.
Estimate ensemble_average_1dof(const HamiltonianModel& model, const StateFunction& f,
                               double energy,
                               std::optional<Component> component = std::nullopt);

/// Mean of f over samples with E <= H <= E + shell_thickness.
Estimate ensemble_average_mc_shell(const HamiltonianModel& model, const StateFunction& f,
                                   double energy, const McConfig& cfg);

/// Several observables over one shared shell sample.
std::vector<Estimate> ensemble_averages_mc_shell(const HamiltonianModel& model,
                                                 const std::vector<StateFunction>& fs,
                                                 double energy, const McConfig& cfg);

/// Vol(M_E), Vol(Sigma_E) and kT on a grid. Energies inside a guard band
/// fall back to Monte Carlo under Route::automatic.
VolumeCurve volume_curve(const HamiltonianModel& model, const std::vector<double>& energies,
                         const McConfig& cfg, Route route = Route::automatic);

} // namespace eqlab
