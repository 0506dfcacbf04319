#include "eqlab/phase_state.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "eqlab/error.hpp"
#include "eqlab/estimate.hpp"

namespace eqlab {

double wrap_angle(double angle) noexcept {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double wrapped = std::remainder(angle, two_pi);
    if (wrapped <= -std::numbers::pi) {
        wrapped += two_pi;
    }
    if (wrapped > std::numbers::pi) {
        wrapped = std::numbers::pi;
    }
    return wrapped;
}

PhaseState::PhaseState(std::vector<double> q_, std::vector<double> p_)
    : q(std::move(q_)), p(std::move(p_)) {
    if (q.empty() || q.size() != p.size()) {
        throw DimensionError("phase state needs q and p of equal, nonzero length");
    }
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!std::isfinite(q[i]) || !std::isfinite(p[i])) {
            throw DomainError("phase state entries must be finite");
        }
    }
}

double PhaseState::coordinate(std::size_t index) const {
    const std::size_t n = q.size();
    if (index >= 2 * n) {
        throw DimensionError("coordinate index out of range");
    }
    return index < n ? q[index] : p[index - n];
}

double phase_distance(const PhaseState& a, const PhaseState& b) {
    if (a.dof() != b.dof()) {
        throw DimensionError("phase states of different dimension");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.dof(); ++i) {
        sum += (a.q[i] - b.q[i]) * (a.q[i] - b.q[i]) + (a.p[i] - b.p[i]) * (a.p[i] - b.p[i]);
    }
    return std::sqrt(sum);
}

std::string_view to_string(EstimateMethod method) noexcept {
    switch (method) {
    case EstimateMethod::time_average:
        return "time_average";
    case EstimateMethod::quadrature_1dof:
        return "quadrature_1dof";
    case EstimateMethod::mc_volume:
        return "mc_volume";
    case EstimateMethod::mc_shell:
        return "mc_shell";
    }
    return "unknown";
}

namespace {

double distance_in_sigmas(double difference, double sigma) noexcept {
    difference = std::abs(difference);
    if (difference == 0.0) {
        return 0.0;
    }
    if (sigma == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return difference / sigma;
}

} // namespace

double sigma_distance(const Estimate& a, const Estimate& b) noexcept {
    return distance_in_sigmas(a.value - b.value, std::hypot(a.std_error, b.std_error));
}

double sigma_distance(const Estimate& a, double reference) noexcept {
    return distance_in_sigmas(a.value - reference, a.std_error);
}

} // namespace eqlab
