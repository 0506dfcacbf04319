#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace eqlab {

enum class EstimateMethod { time_average, quadrature_1dof, mc_volume, mc_shell };

std::string_view to_string(EstimateMethod method) noexcept;

/// A value with its one-sigma standard error and provenance.
///
/// std_error is exactly zero only for the deterministic quadrature method.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    EstimateMethod method = EstimateMethod::quadrature_1dof;
    std::uint64_t n_samples = 0;
    std::optional<std::uint64_t> seed;

    static Estimate exact(double value, std::uint64_t evaluations = 0) {
        return {value, 0.0, EstimateMethod::quadrature_1dof, evaluations, std::nullopt};
    }
};

/// |a - b| measured in units of the combined standard error. Returns 0 when
/// both values agree exactly and infinity when they differ with zero error.
double sigma_distance(const Estimate& a, const Estimate& b) noexcept;

/// |a.value - reference| in units of a.std_error (same conventions as above).
double sigma_distance(const Estimate& a, double reference) noexcept;

} // namespace eqlab
