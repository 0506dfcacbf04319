#include "eqlab/equipartition.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "eqlab/error.hpp"
#include "eqlab/parallel.hpp"
#include "one_dof.hpp"

namespace eqlab {

namespace {

bool exact_route(const HamiltonianModel& model, Route route) {
    return route != Route::monte_carlo && model.dof() == 1 && model.as_separable() != nullptr;
}

/// Period of the component used to size time averages.
double component_period(const HamiltonianModel& model, double energy, Component c) {
    if (model.dof() == 1 && model.as_separable() != nullptr) {
        return orbit_period(model, energy, c);
    }
    return model.characteristic_period(energy);
}

Estimate combined_time_average(const HamiltonianModel& model, const StateFunction& f,
                               double energy, const DynamicsConfig& dyn) {
    double weight_total = 0.0;
    double value = 0.0;
    double variance = 0.0;
    std::uint64_t steps = 0;
    for (Component c : model.list_components(energy)) {
        const double period = component_period(model, energy, c);
        const PhaseState x0 = model.initial_state_on_shell(energy, c);
        const Estimate avg = time_average(model, f, x0, dyn.periods * period,
                                          period / dyn.steps_per_period);
        weight_total += period;
        value += period * avg.value;
        variance += period * period * avg.std_error * avg.std_error;
        steps += avg.n_samples;
    }
    return {value / weight_total, std::sqrt(variance) / weight_total,
            EstimateMethod::time_average, steps, std::nullopt};
}

/// Sum over the components at E of the loop integral of f dt, i.e.
/// Vol(Sigma_E) <f>_E with the combined average.
double loop_total(const SeparableModel& model, const StateFunction& f, double energy) {
    double total = 0.0;
    PhaseState x = PhaseState::one(0.0, 0.0);
    for (Component c : model.list_components(energy)) {
        const auto result =
            detail::loop_integral<1>(model, energy, c, [&](double q, double p, double weight) {
                x.q[0] = q;
                x.p[0] = p;
                return std::array<double, 1>{f(x) * weight};
            });
        if (!result.converged) {
            throw NumericalError("correction_identity: loop quadrature did not converge");
        }
        total += result.value[0];
    }
    return total;
}

} // namespace

std::optional<double> EquipartitionReport::relative_residual_tolman() const {
    if (!residual_tolman) {
        return std::nullopt;
    }
    return *residual_tolman / kT.value;
}

double tolman_prediction(const HamiltonianModel& model, CoordinateFieldIndex index,
                         double energy, const McConfig& cfg, Route route) {
    const std::size_t dim = 2 * model.dof();
    if (index.multiplier >= dim || index.direction >= dim) {
        throw DimensionError("tolman_prediction: coordinate index out of range");
    }
    model.require_regular(energy, "tolman_prediction");
    if (index.multiplier != index.direction) {
        return 0.0;
    }
    return temperature_kT(model, energy, cfg, route).value;
}

Estimate rhs_intrinsic(const HamiltonianModel& model, const VectorFieldSpec& field,
                       double energy, const McConfig& cfg, Route route) {
    if (field.phase_dimension() != 2 * model.dof()) {
        throw DimensionError("rhs_intrinsic: field does not match the model");
    }
    model.require_regular(energy, "rhs_intrinsic");
    const Estimate kT = temperature_kT(model, energy, cfg, route);
    if (field.constant_divergence()) {
        const double c = *field.constant_divergence();
        Estimate out = kT;
        out.value = c * kT.value;
        out.std_error = std::abs(c) * kT.std_error;
        return out;
    }
    if (exact_route(model, route)) {
        const double div = div_integral_quadrature_1dof(model, field, energy).value;
        const double volume = vol_me_quadrature_1dof(model, energy).value;
        return Estimate::exact(kT.value * div / volume);
    }
    const Estimate div = div_integral(model, field, energy, cfg);
    const Estimate volume = vol_me_mc(model, energy, cfg);
    const double mean_div = div.value / volume.value;
    // Treats the three estimates as independent; they share samples, so this
    // overstates the error rather than understating it.
    const double rel_kT = kT.std_error / kT.value;
    const double rel_vol = volume.std_error / volume.value;
    const double value = kT.value * mean_div;
    const double se = std::sqrt(std::pow(kT.value * div.std_error / volume.value, 2) +
                                std::pow(value * rel_kT, 2) + std::pow(value * rel_vol, 2));
    return {value, se, EstimateMethod::mc_volume, cfg.n_samples, cfg.seed};
}

EquipartitionReport check_law(const HamiltonianModel& model, const VectorFieldSpec& field,
                              double energy, const LawConfig& cfg) {
    if (field.phase_dimension() != 2 * model.dof()) {
        throw DimensionError("check_law: field " + field.name() + " does not match model " +
                             model.name());
    }
    cfg.dynamics.validate();
    model.require_regular(energy, "check_law");

    EquipartitionReport report;
    report.model = model.name();
    report.field = field.name();
    report.energy = energy;
    report.kT = temperature_kT(model, energy, cfg.mc, cfg.route);

    const StateFunction f = along_function(field, model);
    report.lhs_time = combined_time_average(model, f, energy, cfg.dynamics);
    report.lhs_ensemble = exact_route(model, cfg.route)
                              ? ensemble_average_1dof(model, f, energy)
                              : ensemble_average_mc_shell(model, f, energy, cfg.mc);
    report.rhs_intrinsic = rhs_intrinsic(model, field, energy, cfg.mc, cfg.route);
    report.residual_intrinsic = report.lhs_ensemble.value - report.rhs_intrinsic.value;
    if (const auto& idx = field.coordinate_index()) {
        report.tolman_value =
            idx->multiplier == idx->direction ? report.kT.value : 0.0;
        report.residual_tolman = report.lhs_ensemble.value - *report.tolman_value;
    }
    report.field_smooth_on_ME = !locus_meets_region(field, model, energy);
    return report;
}

ScanResult scan_energies(const HamiltonianModel& model, const VectorFieldSpec& field,
                         const std::vector<double>& grid, const LawConfig& cfg) {
    ScanResult result;
    std::vector<double> kept;
    for (double e : grid) {
        if (const auto critical = model.guarding_critical_value(e)) {
            result.skipped.push_back({e, *critical});
        } else {
            kept.push_back(e);
        }
    }
    if (kept.empty()) {
        throw DomainError("scan_energies: no regular energy left in the grid");
    }

    // Parallelise across energies only; each report stays single-threaded.
    LawConfig inner = cfg;
    inner.mc.workers = 1;
    result.reports.resize(kept.size());
    parallel_for(kept.size(), cfg.mc.workers, [&](std::size_t i) {
        result.reports[i] = check_law(model, field, kept[i], inner);
    });
    return result;
}

double CorrectionCheck::gap() const noexcept { return lhs - rhs; }

double CorrectionCheck::relative_gap() const noexcept {
    const double scale = std::max({std::abs(lhs), std::abs(rhs), std::abs(kT)});
    return scale > 0.0 ? std::abs(gap()) / scale : 0.0;
}

CorrectionCheck correction_identity(const HamiltonianModel& model, double energy,
                                    double delta_energy) {
    const SeparableModel& sep = detail::require_one_dof(model, "correction_identity");
    const double separatrix = detail::separatrix_energy(model);
    if (!std::isfinite(separatrix) || model.topology(0) != Topology::circle) {
        throw DomainError("correction_identity needs a model with a rotating separatrix");
    }
    if (!(energy > separatrix + guard_band_width(separatrix))) {
        throw DomainError("correction_identity: energy must lie above the separatrix guard band");
    }
    if (!(delta_energy > 0.0) || !std::isfinite(delta_energy)) {
        throw DomainError("correction_identity: delta_energy must be positive");
    }
    const double upper = energy + delta_energy;
    model.require_regular(upper, "correction_identity");

    const StateFunction f11 = along_function(coordinate_field(model, {0, 0}), model);
    CorrectionCheck check;
    check.energy = energy;
    check.delta_energy = delta_energy;
    check.lhs = 0.5 * (loop_total(sep, f11, upper) - loop_total(sep, f11, energy));

    // Momentum on the seam q = pi, where the field jumps.
    const double pi = std::numbers::pi;
    check.delta_p = detail::momentum(sep, pi, upper) - detail::momentum(sep, pi, energy);
    const double shell_volume = vol_me_quadrature_1dof(model, upper).value -
                                vol_me_quadrature_1dof(model, energy).value;
    check.rhs = 0.5 * shell_volume - 2.0 * pi * check.delta_p;
    check.kT = temperature_kT(model, energy, McConfig{}, Route::quadrature).value;
    return check;
}

CounterexampleTable action_angle_counterexample(double omega1, double omega2, double energy,
                                                const McConfig& cfg) {
    if (!(omega1 > 0.0) || !(omega2 > 0.0) || !std::isfinite(omega1) ||
        !std::isfinite(omega2)) {
        throw DomainError("action_angle_counterexample: frequencies must be positive");
    }
    if (!(energy > 0.0) || !std::isfinite(energy)) {
        throw DomainError("action_angle_counterexample: energy must be positive");
    }
    const HarmonicOscillator model({omega1, omega2});

    CounterexampleTable table;
    table.omega = {omega1, omega2};
    table.energy = energy;
    std::vector<StateFunction> actions;
    for (std::size_t mu = 0; mu < 2; ++mu) {
        const double w = table.omega[mu];
        actions.emplace_back([mu, w](const PhaseState& x) {
            return (x.p[mu] * x.p[mu] + w * w * x.q[mu] * x.q[mu]) / (2.0 * w);
        });
    }
    const std::vector<Estimate> means = ensemble_averages_mc_shell(model, actions, energy, cfg);
    for (std::size_t mu = 0; mu < 2; ++mu) {
        table.mean_action[mu] = means[mu];
        for (std::size_t nu = 0; nu < 2; ++nu) {
            Estimate e = means[mu];
            e.value *= table.omega[nu];
            e.std_error *= table.omega[nu];
            table.entries[mu][nu] = e;
        }
    }
    table.kT = temperature_kT(model, energy, cfg, Route::monte_carlo);
    return table;
}

} // namespace eqlab
