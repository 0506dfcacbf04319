#include "eqlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "eqlab/dynamics.hpp"
#include "eqlab/error.hpp"

namespace eqlab {

namespace {

constexpr double kPi = std::numbers::pi;

Params merge_params(Params defaults, const Params& overrides, std::string_view model) {
    for (const auto& [key, value] : overrides) {
        auto it = defaults.find(key);
        if (it == defaults.end()) {
            std::ostringstream msg;
            msg << "unknown parameter '" << key << "' for model " << model;
            throw DomainError(msg.str());
        }
        if (!std::isfinite(value)) {
            throw DomainError("model parameters must be finite");
        }
        it->second = value;
    }
    return defaults;
}

std::string format_energy(double e) {
    std::ostringstream out;
    out.precision(17);
    out << e;
    return out.str();
}

} // namespace

std::string_view to_string(Component component) noexcept {
    switch (component) {
    case Component::oscillation:
        return "oscillation";
    case Component::rotation_pos:
        return "rotation_pos";
    case Component::rotation_neg:
        return "rotation_neg";
    }
    return "unknown";
}

Component component_from_string(std::string_view token) {
    if (token == "oscillation") {
        return Component::oscillation;
    }
    if (token == "rotation_pos") {
        return Component::rotation_pos;
    }
    if (token == "rotation_neg") {
        return Component::rotation_neg;
    }
    throw DomainError("unknown component '" + std::string(token) + "'");
}

double guard_band_width(double critical_energy) noexcept {
    return 1e-3 * std::max(1.0, std::abs(critical_energy));
}

double Box::volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < lower.size(); ++i) {
        v *= upper[i] - lower[i];
    }
    return v;
}

// HamiltonianModel ----------------------------------------------------------

HamiltonianModel::HamiltonianModel(std::string name, std::size_t dof, Params params,
                                   std::vector<Topology> topology)
    : name_(std::move(name)), dof_(dof), params_(std::move(params)),
      topology_(std::move(topology)) {
    if (dof_ == 0 || topology_.size() != dof_) {
        throw DimensionError("model topology must list every configuration coordinate");
    }
}

double HamiltonianModel::param(std::string_view key) const {
    auto it = params_.find(key);
    if (it == params_.end()) {
        throw DomainError("model " + name_ + " has no parameter '" + std::string(key) + "'");
    }
    return it->second;
}

Topology HamiltonianModel::topology(std::size_t i) const { return topology_.at(i); }

void HamiltonianModel::check_dimension(const PhaseState& x) const {
    if (x.dof() != dof_) {
        std::ostringstream msg;
        msg << "state has " << x.dof() << " degrees of freedom, model " << name_ << " has "
            << dof_;
        throw DimensionError(msg.str());
    }
}

double HamiltonianModel::energy(const PhaseState& x) const {
    check_dimension(x);
    return energy_at(x.q, x.p);
}

Gradient HamiltonianModel::grad_energy(const PhaseState& x) const {
    check_dimension(x);
    Gradient g{std::vector<double>(dof_), std::vector<double>(dof_)};
    gradient_at(x.q, x.p, g.dHdq, g.dHdp);
    return g;
}

double HamiltonianModel::seam_min_energy(std::size_t) const {
    return std::numeric_limits<double>::infinity();
}

std::optional<CriticalValue> HamiltonianModel::guarding_critical_value(double energy) const {
    for (const CriticalValue& c : critical_values()) {
        if (std::abs(energy - c.energy) < guard_band_width(c.energy)) {
            return c;
        }
    }
    return std::nullopt;
}

void HamiltonianModel::require_regular(double energy, std::string_view operation) const {
    if (!std::isfinite(energy)) {
        throw DomainError(std::string(operation) + ": energy must be finite");
    }
    if (energy <= e_min()) {
        throw DomainError(std::string(operation) + ": energy " + format_energy(energy) +
                          " is not above the ground state " + format_energy(e_min()));
    }
    if (auto c = guarding_critical_value(energy)) {
        throw GuardBandError(std::string(operation) + ": energy " + format_energy(energy) +
                             " is inside the guard band of the critical value " +
                             format_energy(c->energy));
    }
}

void HamiltonianModel::wrap(PhaseState& x) const {
    for (std::size_t i = 0; i < dof_; ++i) {
        if (topology_[i] == Topology::circle) {
            x.q[i] = wrap_angle(x.q[i]);
        }
    }
}

// SeparableModel ------------------------------------------------------------

double SeparableModel::kinetic_room(double q, double energy) const {
    return energy - potential(std::span<const double>(&q, 1));
}

double SeparableModel::energy_at(std::span<const double> q, std::span<const double> p) const {
    double kinetic = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        kinetic += p[i] * p[i] / (2.0 * mass(i));
    }
    return kinetic + potential(q);
}

void SeparableModel::gradient_at(std::span<const double> q, std::span<const double> p,
                                 std::span<double> dHdq, std::span<double> dHdp) const {
    potential_gradient(q, dHdq);
    for (std::size_t i = 0; i < p.size(); ++i) {
        dHdp[i] = p[i] / mass(i);
    }
}

// Pendulum ------------------------------------------------------------------

Pendulum::Pendulum(const Params& overrides)
    : SeparableModel("pendulum", 1,
                     merge_params({{"g", 9.81}, {"m", 1.0}, {"length", 1.0}}, overrides,
                                  "pendulum"),
                     {Topology::circle}) {
    const double g = param("g");
    const double m = param("m");
    const double l = param("length");
    if (!(g > 0.0 && m > 0.0 && l > 0.0)) {
        throw DomainError("pendulum parameters g, m and length must be positive");
    }
    inertia_ = m * l * l;
    depth_ = m * g * l;
}

double Pendulum::mass(std::size_t) const { return inertia_; }

double Pendulum::potential(std::span<const double> q) const { return -depth_ * std::cos(q[0]); }

void Pendulum::potential_gradient(std::span<const double> q, std::span<double> out) const {
    out[0] = depth_ * std::sin(q[0]);
}

std::pair<double, double> Pendulum::turning_points(double energy) const {
    if (!(energy >= -depth_ && energy < depth_)) {
        throw DomainError("pendulum turning points exist only for e_min <= E < separatrix");
    }
    const double q_max = std::acos(std::clamp(-energy / depth_, -1.0, 1.0));
    return {-q_max, q_max};
}

double Pendulum::kinetic_room(double q, double energy) const {
    // E + U cos q = 2U ((E + U) / 2U - sin^2(q/2)); keeps the root of the
    // momentum well conditioned near the turning points.
    const double s = std::sin(0.5 * q);
    return 2.0 * depth_ * ((energy + depth_) / (2.0 * depth_) - s * s);
}

std::vector<CriticalValue> Pendulum::critical_values() const {
    return {{-depth_, CriticalKind::minimum}, {depth_, CriticalKind::separatrix}};
}

Box Pendulum::bounding_box(double energy) const {
    if (!(energy >= -depth_)) {
        throw DomainError("bounding box requested below the ground state");
    }
    const double p_max = std::sqrt(2.0 * inertia_ * (energy + depth_));
    return {{-kPi, -p_max}, {kPi, p_max}};
}

std::vector<Component> Pendulum::list_components(double energy) const {
    require_regular(energy, "list_components");
    if (energy < depth_) {
        return {Component::oscillation};
    }
    return {Component::rotation_pos, Component::rotation_neg};
}

PhaseState Pendulum::initial_state_on_shell(double energy, Component component) const {
    if (!std::isfinite(energy) || energy < -depth_) {
        throw DomainError("initial_state_on_shell: energy below the ground state");
    }
    const double p0 = std::sqrt(2.0 * inertia_ * (energy + depth_));
    switch (component) {
    case Component::oscillation:
        if (energy > depth_) {
            throw DomainError("initial_state_on_shell: no oscillation above the separatrix");
        }
        return PhaseState::one(0.0, p0);
    case Component::rotation_pos:
    case Component::rotation_neg:
        if (energy < depth_) {
            throw DomainError("initial_state_on_shell: no rotation below the separatrix");
        }
        return PhaseState::one(0.0, component == Component::rotation_pos ? p0 : -p0);
    }
    throw DomainError("initial_state_on_shell: unknown component");
}

double Pendulum::characteristic_period(double energy) const {
    const auto components = list_components(energy);
    return orbit_period(*this, energy, components.front());
}

double Pendulum::seam_min_energy(std::size_t i) const {
    if (i != 0) {
        throw DimensionError("pendulum has a single configuration coordinate");
    }
    return depth_;
}

// HarmonicOscillator --------------------------------------------------------

namespace {

std::string oscillator_name(std::size_t n) { return "ho" + std::to_string(n) + "d"; }

Params oscillator_params(const std::vector<double>& omegas) {
    Params params;
    if (omegas.size() == 1) {
        params["omega"] = omegas[0];
    } else {
        for (std::size_t i = 0; i < omegas.size(); ++i) {
            params["omega" + std::to_string(i + 1)] = omegas[i];
        }
    }
    return params;
}

} // namespace

HarmonicOscillator::HarmonicOscillator(std::vector<double> omegas)
    : SeparableModel(oscillator_name(omegas.size()), omegas.size(), oscillator_params(omegas),
                     std::vector<Topology>(omegas.size(), Topology::line)),
      omegas_(std::move(omegas)) {
    for (double w : omegas_) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw DomainError("oscillator frequencies must be positive and finite");
        }
    }
}

HarmonicOscillator HarmonicOscillator::one_d(const Params& overrides) {
    const Params p = merge_params({{"omega", 1.0}}, overrides, "ho1d");
    return HarmonicOscillator({p.at("omega")});
}

HarmonicOscillator HarmonicOscillator::two_d(const Params& overrides) {
    const Params p = merge_params({{"omega1", 1.0}, {"omega2", 1.0}}, overrides, "ho2d");
    return HarmonicOscillator({p.at("omega1"), p.at("omega2")});
}

double HarmonicOscillator::mass(std::size_t) const { return 1.0; }

double HarmonicOscillator::potential(std::span<const double> q) const {
    double v = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        v += 0.5 * omegas_[i] * omegas_[i] * q[i] * q[i];
    }
    return v;
}

void HarmonicOscillator::potential_gradient(std::span<const double> q,
                                            std::span<double> out) const {
    for (std::size_t i = 0; i < q.size(); ++i) {
        out[i] = omegas_[i] * omegas_[i] * q[i];
    }
}

std::pair<double, double> HarmonicOscillator::turning_points(double energy) const {
    if (dof() != 1) {
        throw DimensionError("turning points are defined for one degree of freedom");
    }
    if (!(energy >= 0.0)) {
        throw DomainError("turning points requested below the ground state");
    }
    const double a = std::sqrt(2.0 * energy) / omegas_[0];
    return {-a, a};
}

PhaseState HarmonicOscillator::ground_state() const {
    return PhaseState(std::vector<double>(dof(), 0.0), std::vector<double>(dof(), 0.0));
}

std::vector<CriticalValue> HarmonicOscillator::critical_values() const {
    return {{0.0, CriticalKind::minimum}};
}

Box HarmonicOscillator::bounding_box(double energy) const {
    if (!(energy >= 0.0)) {
        throw DomainError("bounding box requested below the ground state");
    }
    const std::size_t n = dof();
    Box box{std::vector<double>(2 * n), std::vector<double>(2 * n)};
    const double p_max = std::sqrt(2.0 * energy);
    for (std::size_t i = 0; i < n; ++i) {
        box.lower[i] = -p_max / omegas_[i];
        box.upper[i] = p_max / omegas_[i];
        box.lower[n + i] = -p_max;
        box.upper[n + i] = p_max;
    }
    return box;
}

std::vector<Component> HarmonicOscillator::list_components(double energy) const {
    require_regular(energy, "list_components");
    return {Component::oscillation};
}

PhaseState HarmonicOscillator::initial_state_on_shell(double energy, Component component) const {
    if (!std::isfinite(energy) || energy < 0.0) {
        throw DomainError("initial_state_on_shell: energy below the ground state");
    }
    if (component != Component::oscillation) {
        throw DomainError("initial_state_on_shell: oscillators only have the oscillation component");
    }
    PhaseState x = ground_state();
    x.p[0] = std::sqrt(2.0 * energy);
    return x;
}

double HarmonicOscillator::characteristic_period(double) const {
    return 2.0 * kPi / *std::max_element(omegas_.begin(), omegas_.end());
}

// Registry ------------------------------------------------------------------

std::shared_ptr<const HamiltonianModel> make_model(std::string_view name,
                                                   const Params& overrides) {
    if (name == "pendulum") {
        return std::make_shared<const Pendulum>(overrides);
    }
    if (name == "ho1d") {
        return std::make_shared<const HarmonicOscillator>(HarmonicOscillator::one_d(overrides));
    }
    if (name == "ho2d") {
        return std::make_shared<const HarmonicOscillator>(HarmonicOscillator::two_d(overrides));
    }
    throw DomainError("unknown model '" + std::string(name) + "'");
}

std::vector<std::string> model_names() { return {"pendulum", "ho1d", "ho2d"}; }

} // namespace eqlab
