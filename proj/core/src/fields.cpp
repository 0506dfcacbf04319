#include "eqlab/fields.hpp"

#include <array>
#include <cmath>

#include "eqlab/error.hpp"

namespace eqlab {

VectorFieldSpec::VectorFieldSpec(std::string name, std::size_t phase_dimension,
                                 std::vector<StateFunction> components, StateFunction divergence,
                                 DiscontinuityLocus locus,
                                 std::optional<CoordinateFieldIndex> coordinate,
                                 std::optional<double> constant_divergence)
    : name_(std::move(name)), components_(std::move(components)),
      divergence_(std::move(divergence)), locus_(locus), coordinate_(coordinate),
      constant_divergence_(constant_divergence) {
    if (phase_dimension == 0 || phase_dimension % 2 != 0 ||
        components_.size() != phase_dimension) {
        throw DimensionError("vector field needs one component per phase-space coordinate");
    }
    if (!divergence_) {
        throw DomainError("vector field needs a divergence");
    }
}

double VectorFieldSpec::component(std::size_t mu, const PhaseState& x) const {
    const StateFunction& c = components_.at(mu);
    return c ? c(x) : 0.0;
}

double VectorFieldSpec::divergence(const PhaseState& x) const { return divergence_(x); }

VectorFieldSpec coordinate_field(const HamiltonianModel& model, CoordinateFieldIndex index) {
    const std::size_t n = model.dof();
    if (index.multiplier >= 2 * n || index.direction >= 2 * n) {
        throw DimensionError("coordinate field index out of range");
    }
    std::vector<StateFunction> components(2 * n);
    const std::size_t i = index.multiplier;
    components[index.direction] = [i](const PhaseState& x) { return x.coordinate(i); };

    const double delta = index.multiplier == index.direction ? 1.0 : 0.0;
    DiscontinuityLocus locus;
    if (i < n && model.topology(i) == Topology::circle) {
        locus = DiscontinuityLocus::angular_seam(i);
    }

    auto label = [n](std::size_t k) {
        const std::string base = k < n ? "q" : "p";
        return n == 1 ? base : base + std::to_string((k < n ? k : k - n) + 1);
    };
    std::string name = label(index.multiplier) + " d/d" + label(index.direction);

    return VectorFieldSpec(std::move(name), 2 * n, std::move(components),
                           [delta](const PhaseState&) { return delta; }, locus, index, delta);
}

VectorFieldSpec custom_pendulum_field() {
    std::vector<StateFunction> components(2);
    components[1] = [](const PhaseState& x) {
        const double s = std::sin(x.q[0]);
        return x.p[0] * x.p[0] * x.p[0] * s * s / 3.0;
    };
    auto divergence = [](const PhaseState& x) {
        const double s = std::sin(x.q[0]);
        return x.p[0] * x.p[0] * s * s;
    };
    return VectorFieldSpec("(1/3) p^3 sin^2 q d/dp", 2, std::move(components), divergence);
}

namespace {

constexpr std::size_t kStackDof = 8;

template <class Body>
decltype(auto) with_gradient(const HamiltonianModel& model, const PhaseState& x, Body&& body) {
    const std::size_t n = model.dof();
    if (n <= kStackDof) {
        std::array<double, 2 * kStackDof> buffer;
        std::span<double> grad(buffer.data(), 2 * n);
        model.gradient_at(x.q, x.p, grad.first(n), grad.last(n));
        return body(std::span<const double>(grad));
    }
    std::vector<double> buffer(2 * n);
    std::span<double> grad(buffer);
    model.gradient_at(x.q, x.p, grad.first(n), grad.last(n));
    return body(std::span<const double>(grad));
}

} // namespace

double derive_along(const VectorFieldSpec& field, const HamiltonianModel& model,
                    const PhaseState& x) {
    model.check_dimension(x);
    if (field.phase_dimension() != 2 * model.dof()) {
        throw DimensionError("field '" + field.name() + "' does not match model " + model.name());
    }
    return with_gradient(model, x, [&](std::span<const double> grad) {
        double sum = 0.0;
        for (std::size_t mu = 0; mu < grad.size(); ++mu) {
            if (field.has_component(mu)) {
                sum += field.component(mu, x) * grad[mu];
            }
        }
        return sum;
    });
}

StateFunction along_function(const VectorFieldSpec& field, const HamiltonianModel& model) {
    if (field.phase_dimension() != 2 * model.dof()) {
        throw DimensionError("field '" + field.name() + "' does not match model " + model.name());
    }
    // The model outlives the returned function in every caller.
    return [field, &model](const PhaseState& x) { return derive_along(field, model, x); };
}

VectorFieldSpec field_from_token(const HamiltonianModel& model, std::string_view token) {
    const std::size_t n = model.dof();
    if (token.size() == 3 && token[0] == 'f' && (token[1] == '1' || token[1] == '2') &&
        (token[2] == '1' || token[2] == '2')) {
        const std::size_t i = token[1] == '1' ? 0 : n;
        const std::size_t j = token[2] == '1' ? 0 : n;
        VectorFieldSpec field = coordinate_field(model, {i, j});
        return field;
    }
    if (token == "pcubed") {
        if (n != 1) {
            throw DimensionError("field pcubed needs a single degree of freedom");
        }
        return custom_pendulum_field();
    }
    throw DomainError("unknown field token '" + std::string(token) + "'");
}

std::vector<std::string> field_tokens() { return {"f11", "f12", "f21", "f22", "pcubed"}; }

bool locus_meets_region(const VectorFieldSpec& field, const HamiltonianModel& model,
                        double energy) {
    const DiscontinuityLocus& locus = field.locus();
    if (locus.kind == DiscontinuityLocus::Kind::none) {
        return false;
    }
    return energy >= model.seam_min_energy(locus.coordinate);
}

} // namespace eqlab
