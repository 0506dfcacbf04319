#include "one_dof.hpp"

#include <algorithm>
#include <string>

#include "eqlab/dynamics.hpp"

namespace eqlab {

namespace detail {

const SeparableModel& require_one_dof(const HamiltonianModel& model, std::string_view operation) {
    const SeparableModel* separable = model.as_separable();
    if (model.dof() != 1 || separable == nullptr) {
        throw DomainError(std::string(operation) +
                          " needs a separable model with one degree of freedom");
    }
    return *separable;
}

double separatrix_energy(const HamiltonianModel& model) {
    for (const CriticalValue& c : model.critical_values()) {
        if (c.kind == CriticalKind::separatrix) {
            return c.energy;
        }
    }
    return std::numeric_limits<double>::infinity();
}

QRange q_range(const SeparableModel& model, double energy) {
    if (model.topology(0) == Topology::circle && energy > separatrix_energy(model)) {
        return QRange{true, 0.0, 0.0};
    }
    const auto [lo, hi] = model.turning_points(energy);
    return QRange{false, 0.5 * (lo + hi), 0.5 * (hi - lo)};
}

} // namespace detail

namespace {

void require_component(const HamiltonianModel& model, double energy, Component component,
                       std::string_view operation) {
    const auto available = model.list_components(energy);
    if (std::find(available.begin(), available.end(), component) == available.end()) {
        throw DomainError(std::string(operation) + ": component " +
                          std::string(to_string(component)) + " does not exist at this energy");
    }
}

} // namespace

double orbit_period(const HamiltonianModel& model, double energy, Component component) {
    const SeparableModel& sep = detail::require_one_dof(model, "orbit_period");
    model.require_regular(energy, "orbit_period");
    require_component(model, energy, component, "orbit_period");
    const auto result = detail::loop_integral<1>(
        sep, energy, component,
        [](double, double, double weight) { return std::array<double, 1>{weight}; });
    if (!result.converged) {
        throw NumericalError("orbit_period: quadrature did not converge");
    }
    return result.value[0];
}

Component component_of(const HamiltonianModel& model, const PhaseState& x) {
    detail::require_one_dof(model, "component_of");
    const double e = model.energy(x);
    if (e < detail::separatrix_energy(model)) {
        return Component::oscillation;
    }
    return x.p[0] >= 0.0 ? Component::rotation_pos : Component::rotation_neg;
}

double time_of_flight(const HamiltonianModel& model, const PhaseState& x) {
    const SeparableModel& sep = detail::require_one_dof(model, "time_of_flight");
    const double energy = model.energy(x);
    model.require_regular(energy, "time_of_flight");

    const quad::Options options{1e-13, 1e-12, 20000};
    const double m = sep.mass(0);
    const Component component = component_of(model, x);

    if (component != Component::oscillation) {
        // q is the wrapped representative, so the path 0 -> q never crosses the seam.
        const double sign = component == Component::rotation_pos ? 1.0 : -1.0;
        const double q = x.q[0];
        const double magnitude = quad::integrate(
            [&](double s) { return m / detail::momentum(sep, s, energy); }, 0.0, q, options);
        return sign * magnitude;
    }

    const detail::QRange range = detail::q_range(sep, energy);
    const double theta_ref = std::asin(std::clamp(-range.centre / range.half_width, -1.0, 1.0));
    const double theta =
        std::asin(std::clamp((x.q[0] - range.centre) / range.half_width, -1.0, 1.0));
    auto weight = [&](double v) {
        const auto [q, jac] = range.map(v);
        const double p = detail::momentum(sep, q, energy);
        return p > 0.0 ? m * jac / p : 0.0;
    };
    const double tau = quad::integrate(weight, theta_ref, theta, options);
    if (x.p[0] >= 0.0) {
        return tau;
    }
    const double period = orbit_period(model, energy, Component::oscillation);
    const double t = 0.5 * period - tau;
    return t > 0.5 * period ? t - period : t;
}

} // namespace eqlab
