#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "eqlab/dynamics.hpp"
#include "eqlab/estimate.hpp"
#include "eqlab/fields.hpp"
#include "eqlab/microcanonical.hpp"
#include "eqlab/models.hpp"

namespace eqlab {

struct LawConfig {
    McConfig mc;
    DynamicsConfig dynamics;
    Route route = Route::automatic;
};

/// Both sides of the classical and the intrinsic law at one energy.
///
/// Residuals are absolute; divide by kT for the normalised form.
struct EquipartitionReport {
    std::string model;
    std::string field;
    double energy = 0.0;
    Estimate kT;
    Estimate lhs_time;
    Estimate lhs_ensemble;
    Estimate rhs_intrinsic;
    std::optional<double> tolman_value;
    double residual_intrinsic = 0.0;      ///< lhs_ensemble - rhs_intrinsic
    std::optional<double> residual_tolman; ///< lhs_ensemble - tolman_value
    bool field_smooth_on_ME = true;

    /// The intrinsic law is only claimed where the field is smooth on M_E.
    bool intrinsic_law_applies() const noexcept { return field_smooth_on_ME; }
    double relative_residual_intrinsic() const { return residual_intrinsic / kT.value; }
    std::optional<double> relative_residual_tolman() const;
};

/// delta^i_j kT.
double tolman_prediction(const HamiltonianModel& model, CoordinateFieldIndex index,
                         double energy, const McConfig& cfg, Route route = Route::automatic);

/// kT / Vol(M_E) * integral of div(X) over M_E. Fields with a constant
/// divergence c give exactly c * kT.
Estimate rhs_intrinsic(const HamiltonianModel& model, const VectorFieldSpec& field,
                       double energy, const McConfig& cfg, Route route = Route::automatic);

EquipartitionReport check_law(const HamiltonianModel& model, const VectorFieldSpec& field,
                              double energy, const LawConfig& cfg);

struct SkippedEnergy {
    double energy;
    CriticalValue critical;
};

struct ScanResult {
    std::vector<EquipartitionReport> reports; ///< in grid order
    std::vector<SkippedEnergy> skipped;
};

/// check_law over a grid; energies in a guard band are skipped. Energies are
/// distributed over cfg.mc.workers threads, results keep grid order.
ScanResult scan_energies(const HamiltonianModel& model, const VectorFieldSpec& field,
                         const std::vector<double>& grid, const LawConfig& cfg);

/// Boundary correction for f11 above the separatrix:
///   1/2 (VolS(E+dE) <f11>(E+dE) - VolS(E) <f11>(E)) = 1/2 Vol(M(E, dE)) - 2 pi dp
/// with VolS totals over both rotation components.
struct CorrectionCheck {
    double energy = 0.0;
    double delta_energy = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double delta_p = 0.0;
    double kT = 0.0; ///< scale at energy

    double gap() const noexcept;
    double relative_gap() const noexcept;
};

CorrectionCheck correction_identity(const HamiltonianModel& model, double energy,
                                    double delta_energy);

/// <I_mu omega_nu> on a two-dimensional oscillator, with
/// I_mu = (p_mu^2 + omega_mu^2 q_mu^2) / (2 omega_mu) in Cartesian coordinates.
struct CounterexampleTable {
    std::array<double, 2> omega{};
    double energy = 0.0;
    std::array<Estimate, 2> mean_action;
    std::array<std::array<Estimate, 2>, 2> entries; ///< entries[mu][nu]
    Estimate kT;
};

CounterexampleTable action_angle_counterexample(double omega1, double omega2, double energy,
                                                const McConfig& cfg);

} // namespace eqlab
