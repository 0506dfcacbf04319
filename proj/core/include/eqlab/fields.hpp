#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eqlab/models.hpp"
#include "eqlab/phase_state.hpp"

namespace eqlab {

using StateFunction = std::function<double(const PhaseState&)>;

/// The field x^i d/dx^j, indices in the flat layout (q's then p's).
struct CoordinateFieldIndex {
    std::size_t multiplier;
    std::size_t direction;

    friend bool operator==(const CoordinateFieldIndex&, const CoordinateFieldIndex&) = default;
};

struct DiscontinuityLocus {
    enum class Kind { none, angular_seam };

    Kind kind = Kind::none;
    std::size_t coordinate = 0; ///< configuration index of the seam q_i = +-pi

    static DiscontinuityLocus none() { return {}; }
    static DiscontinuityLocus angular_seam(std::size_t i) { return {Kind::angular_seam, i}; }

    friend bool operator==(const DiscontinuityLocus&, const DiscontinuityLocus&) = default;
};

/// A vector field X on a 2n-dimensional phase space with its divergence in
/// canonical coordinates. Components that are identically zero are stored
/// as empty functions and skipped on evaluation.
class VectorFieldSpec {
public:
    VectorFieldSpec(std::string name, std::size_t phase_dimension,
                    std::vector<StateFunction> components, StateFunction divergence,
                    DiscontinuityLocus locus = {},
                    std::optional<CoordinateFieldIndex> coordinate = std::nullopt,
                    std::optional<double> constant_divergence = std::nullopt);

    const std::string& name() const noexcept { return name_; }
    std::size_t phase_dimension() const noexcept { return components_.size(); }
    const DiscontinuityLocus& locus() const noexcept { return locus_; }

    /// Set for x^i d/dx^j fields.
    const std::optional<CoordinateFieldIndex>& coordinate_index() const noexcept {
        return coordinate_;
    }
    /// Set when div(X) is a known constant (delta^i_j for coordinate fields).
    const std::optional<double>& constant_divergence() const noexcept {
        return constant_divergence_;
    }

    bool has_component(std::size_t mu) const { return static_cast<bool>(components_.at(mu)); }
    double component(std::size_t mu, const PhaseState& x) const;
    double divergence(const PhaseState& x) const;

private:
    std::string name_;
    std::vector<StateFunction> components_;
    StateFunction divergence_;
    DiscontinuityLocus locus_;
    std::optional<CoordinateFieldIndex> coordinate_;
    std::optional<double> constant_divergence_;
};

/// x^i d/dx^j. A multiplier that is an angle carries the seam of its wrap.
VectorFieldSpec coordinate_field(const HamiltonianModel& model, CoordinateFieldIndex index);

/// X = (1/3) p^3 sin^2(q) d/dp on a one degree of freedom phase space.
VectorFieldSpec custom_pendulum_field();

/// X(H) = sum_mu X^mu dH/dx^mu.
double derive_along(const VectorFieldSpec& field, const HamiltonianModel& model,
                    const PhaseState& x);

/// The function x -> X(H)(x), bound to a model.
StateFunction along_function(const VectorFieldSpec& field, const HamiltonianModel& model);

/// Built-in fields by token: f11, f12, f21, f22 (first degree of freedom,
/// 1 = q and 2 = p) and pcubed.
VectorFieldSpec field_from_token(const HamiltonianModel& model, std::string_view token);
std::vector<std::string> field_tokens();

/// True when the field's discontinuity locus meets M_E; decided from the
/// lowest energy on the seam, no sampling involved.
bool locus_meets_region(const VectorFieldSpec& field, const HamiltonianModel& model,
                        double energy);

} // namespace eqlab
