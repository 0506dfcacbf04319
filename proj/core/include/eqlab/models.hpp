#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eqlab/phase_state.hpp"

namespace eqlab {

enum class Topology { line, circle };

/// Connected pieces of an energy level set of a one degree of freedom model.
enum class Component { oscillation, rotation_pos, rotation_neg };

std::string_view to_string(Component component) noexcept;
Component component_from_string(std::string_view token);

enum class CriticalKind { minimum, separatrix };

struct CriticalValue {
    double energy;
    CriticalKind kind;

    friend bool operator==(const CriticalValue&, const CriticalValue&) = default;
};

/// Half-width of the band around a critical energy rejected by orbit based
/// operations.
double guard_band_width(double critical_energy) noexcept;

/// Axis-aligned region of phase space, flat layout (q's then p's).
struct Box {
    std::vector<double> lower;
    std::vector<double> upper;

    double volume() const;
};

/// Analytic partial derivatives of H.
struct Gradient {
    std::vector<double> dHdq;
    std::vector<double> dHdp;
};

using Params = std::map<std::string, double, std::less<>>;

class SeparableModel;

/// An autonomous Hamiltonian with a lower bound, on T*Q with Q a product of
/// lines and circles. Immutable after construction.
class HamiltonianModel {
public:
    virtual ~HamiltonianModel() = default;

    const std::string& name() const noexcept { return name_; }
    std::size_t dof() const noexcept { return dof_; }
    const Params& params() const noexcept { return params_; }
    double param(std::string_view key) const;

    /// Topology of configuration coordinate i (momenta always live on a line).
    Topology topology(std::size_t i) const;

    double energy(const PhaseState& x) const;
    Gradient grad_energy(const PhaseState& x) const;

    /// Unchecked hot-path evaluation; spans must have length dof().
    virtual double energy_at(std::span<const double> q, std::span<const double> p) const = 0;
    virtual void gradient_at(std::span<const double> q, std::span<const double> p,
                             std::span<double> dHdq, std::span<double> dHdp) const = 0;

    virtual double e_min() const = 0;
    virtual PhaseState ground_state() const = 0;
    virtual std::vector<CriticalValue> critical_values() const = 0;

    /// A box guaranteed to contain M_E = {H <= E}. Requires E >= e_min().
    virtual Box bounding_box(double energy) const = 0;

    /// Components of the level set H = E. Throws GuardBandError near a
    /// critical value and DomainError below the ground state.
    virtual std::vector<Component> list_components(double energy) const = 0;

    /// Reference state on the requested component of H = E.
    virtual PhaseState initial_state_on_shell(double energy, Component component) const = 0;

    /// Time scale used to size integration steps at energy E (the orbit
    /// period for one degree of freedom).
    virtual double characteristic_period(double energy) const = 0;

    /// Lowest energy on the seam q_i = +-pi of a circle coordinate; +inf for
    /// line coordinates.
    virtual double seam_min_energy(std::size_t i) const;

    virtual const SeparableModel* as_separable() const noexcept { return nullptr; }

    /// Critical value whose guard band contains E, if any.
    std::optional<CriticalValue> guarding_critical_value(double energy) const;
    void require_regular(double energy, std::string_view operation) const;

    /// Wrap circle coordinates of x into (-pi, pi].
    void wrap(PhaseState& x) const;
    void check_dimension(const PhaseState& x) const;

protected:
    HamiltonianModel(std::string name, std::size_t dof, Params params,
                     std::vector<Topology> topology);

private:
    std::string name_;
    std::size_t dof_;
    Params params_;
    std::vector<Topology> topology_;
};

/// H = sum_i p_i^2 / (2 m_i) + V(q).
class SeparableModel : public HamiltonianModel {
public:
    virtual double mass(std::size_t i) const = 0;
    virtual double potential(std::span<const double> q) const = 0;
    virtual void potential_gradient(std::span<const double> q, std::span<double> out) const = 0;

    /// One degree of freedom: the turning points [lo, hi] of the oscillation
    /// component at energy E.
    virtual std::pair<double, double> turning_points(double energy) const = 0;

    /// One degree of freedom: E - V(q), overridable for a better conditioned form.
    virtual double kinetic_room(double q, double energy) const;

    double energy_at(std::span<const double> q, std::span<const double> p) const override;
    void gradient_at(std::span<const double> q, std::span<const double> p,
                     std::span<double> dHdq, std::span<double> dHdp) const override;

    const SeparableModel* as_separable() const noexcept override { return this; }

protected:
    using HamiltonianModel::HamiltonianModel;
};

/// Ideal pendulum on the cylinder: H = p^2 / (2 m l^2) - m g l cos q.
///
/// Parameters: g (default 9.81), m (default 1), length (default 1). With the
/// defaults H = p^2/2 - g cos q, with e_min = -g and a separatrix at +g.
class Pendulum final : public SeparableModel {
public:
    explicit Pendulum(const Params& overrides = {});

    double inertia() const noexcept { return inertia_; }
    double depth() const noexcept { return depth_; }

    double mass(std::size_t i) const override;
    double potential(std::span<const double> q) const override;
    void potential_gradient(std::span<const double> q, std::span<double> out) const override;
    std::pair<double, double> turning_points(double energy) const override;
    double kinetic_room(double q, double energy) const override;

    double e_min() const override { return -depth_; }
    PhaseState ground_state() const override { return PhaseState::one(0.0, 0.0); }
    std::vector<CriticalValue> critical_values() const override;
    Box bounding_box(double energy) const override;
    std::vector<Component> list_components(double energy) const override;
    PhaseState initial_state_on_shell(double energy, Component component) const override;
    double characteristic_period(double energy) const override;
    double seam_min_energy(std::size_t i) const override;

private:
    double inertia_;
    double depth_;
};

/// Uncoupled oscillators H = sum_i (p_i^2 + omega_i^2 q_i^2) / 2.
///
/// "ho1d" takes the parameter omega, "ho2d" takes omega1 and omega2; all
/// default to 1.
class HarmonicOscillator final : public SeparableModel {
public:
    explicit HarmonicOscillator(std::vector<double> omegas);
    static HarmonicOscillator one_d(const Params& overrides = {});
    static HarmonicOscillator two_d(const Params& overrides = {});

    double omega(std::size_t i) const { return omegas_.at(i); }

    double mass(std::size_t i) const override;
    double potential(std::span<const double> q) const override;
    void potential_gradient(std::span<const double> q, std::span<double> out) const override;
    std::pair<double, double> turning_points(double energy) const override;

    double e_min() const override { return 0.0; }
    PhaseState ground_state() const override;
    std::vector<CriticalValue> critical_values() const override;
    Box bounding_box(double energy) const override;
    std::vector<Component> list_components(double energy) const override;
    PhaseState initial_state_on_shell(double energy, Component component) const override;
    double characteristic_period(double energy) const override;

private:
    std::vector<double> omegas_;
};

/// Built-in model by name ("pendulum", "ho1d", "ho2d") with parameter
/// overrides. Unknown names or parameters raise DomainError.
std::shared_ptr<const HamiltonianModel> make_model(std::string_view name,
                                                   const Params& overrides = {});

std::vector<std::string> model_names();

// Free-function spellings of the core operations.
inline double energy(const HamiltonianModel& model, const PhaseState& x) {
    return model.energy(x);
}
inline Gradient grad_energy(const HamiltonianModel& model, const PhaseState& x) {
    return model.grad_energy(x);
}
inline PhaseState initial_state_on_shell(const HamiltonianModel& model, double energy,
                                         Component component) {
    return model.initial_state_on_shell(energy, component);
}
inline std::vector<Component> list_components(const HamiltonianModel& model, double energy) {
    return model.list_components(energy);
}

} // namespace eqlab
