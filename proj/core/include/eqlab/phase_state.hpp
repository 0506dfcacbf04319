#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace eqlab {

/// Representative of an angle in (-pi, pi].
double wrap_angle(double angle) noexcept;

/// A point (q, p) of a 2n-dimensional phase space.
///
/// The constructor enforces equal lengths, n >= 1 and finite entries. The
/// wrapping of angular coordinates is a property of the model, see
/// HamiltonianModel::wrap().
struct PhaseState {
    std::vector<double> q;
    std::vector<double> p;

    PhaseState() = default;
    PhaseState(std::vector<double> q_, std::vector<double> p_);

    /// Single degree of freedom shorthand.
    static PhaseState one(double q, double p) { return PhaseState({q}, {p}); }

    std::size_t dof() const noexcept { return q.size(); }

    /// Coordinate by flat index: 0..n-1 are q's, n..2n-1 are p's.
    double coordinate(std::size_t index) const;

    friend bool operator==(const PhaseState&, const PhaseState&) = default;
};

/// Euclidean distance in (q, p), ignoring topology.
double phase_distance(const PhaseState& a, const PhaseState& b);

} // namespace eqlab
