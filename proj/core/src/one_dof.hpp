#pragma once

// Exact phase-space integrals for separable one degree of freedom models.
// Internal to eqlab_core.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string_view>

#include "eqlab/error.hpp"
#include "eqlab/models.hpp"
#include "eqlab/quadrature.hpp"

namespace eqlab::detail {

const SeparableModel& require_one_dof(const HamiltonianModel& model, std::string_view operation);

/// Energy of the separatrix, +inf when the model has none.
double separatrix_energy(const HamiltonianModel& model);

/// p_+(q) = sqrt(2 m (E - V(q))), zero outside the accessible range.
inline double momentum(const SeparableModel& model, double q, double energy) {
    const double room = model.kinetic_room(q, energy);
    return room > 0.0 ? std::sqrt(2.0 * model.mass(0) * room) : 0.0;
}

inline quad::Options loop_options() { return quad::Options{1e-10, 1e-10, 20000}; }

/// Parametrisation of the accessible q-range of M_E. Oscillations use
/// q = centre + half_width sin(theta), theta in [-pi/2, pi/2], so that
/// dq / p stays bounded at the turning points; bands around the circle use
/// q itself over [-pi, pi].
struct QRange {
    bool band = false;
    double centre = 0.0;
    double half_width = 0.0;

    double lower() const { return band ? -std::numbers::pi : -0.5 * std::numbers::pi; }
    double upper() const { return band ? std::numbers::pi : 0.5 * std::numbers::pi; }

    /// (q, dq/dvariable) at the integration variable.
    std::pair<double, double> map(double v) const {
        if (band) {
            return {v, 1.0};
        }
        return {centre + half_width * std::sin(v), half_width * std::cos(v)};
    }
};

QRange q_range(const SeparableModel& model, double energy);

/// Integrates over one component of H = E, as functions of the time element
/// dt = m dq / |p|. The integrand receives (q, p, dt-weight) with p on the
/// component's branch (both branches for oscillations, weight per branch)
/// and returns std::array<double, M>. Returns the M loop integrals.
template <std::size_t M, class Integrand>
quad::Result<M> loop_integral(const SeparableModel& model, double energy, Component component,
                              Integrand&& integrand, quad::Options options = loop_options()) {
    const double m = model.mass(0);
    if (component == Component::oscillation) {
        const QRange range = q_range(model, energy);
        auto body = [&](double theta) {
            const auto [q, jac] = range.map(theta);
            const double p = momentum(model, q, energy);
            std::array<double, M> out{};
            if (!(p > 0.0)) {
                return out; // turning point reached in floating point; measure zero
            }
            const double weight = m * jac / p;
            const std::array<double, M> up = integrand(q, p, weight);
            const std::array<double, M> down = integrand(q, -p, weight);
            for (std::size_t k = 0; k < M; ++k) {
                out[k] = up[k] + down[k];
            }
            return out;
        };
        return quad::integrate_vector<M>(body, range.lower(), range.upper(), options);
    }
    const double sign = component == Component::rotation_pos ? 1.0 : -1.0;
    auto body = [&](double q) {
        const double p = momentum(model, q, energy);
        return integrand(q, sign * p, m / p);
    };
    return quad::integrate_vector<M>(body, -std::numbers::pi, std::numbers::pi, options);
}

} // namespace eqlab::detail
