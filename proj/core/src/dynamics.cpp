#include "eqlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "eqlab/error.hpp"

namespace eqlab {

namespace {

const SeparableModel& require_separable(const HamiltonianModel& model) {
    const SeparableModel* separable = model.as_separable();
    if (separable == nullptr) {
        throw DomainError("leapfrog integration needs a separable model, got " + model.name());
    }
    return *separable;
}

std::uint64_t step_count(double t_end, double h) {
    if (!(t_end > 0.0) || !(h > 0.0) || !std::isfinite(t_end) || !std::isfinite(h)) {
        throw DomainError("integration needs t_end > 0 and h > 0");
    }
    const double ratio = t_end / h;
    if (ratio > static_cast<double>(kMaxIntegrationSteps)) {
        throw NumericalError("integration would exceed the cap of 1e9 steps");
    }
    // Absorb rounding in t_end / h so that an integer number of steps is not
    // rounded up to the next one.
    return static_cast<std::uint64_t>(std::ceil(ratio * (1.0 - 1e-12)));
}

/// In-place leapfrog that caches the force between steps.
class Leapfrog {
public:
    Leapfrog(const SeparableModel& model, PhaseState& x, double h)
        : model_(model), x_(x), h_(h), force_(x.dof()), inverse_mass_(x.dof()) {
        for (std::size_t i = 0; i < x.dof(); ++i) {
            inverse_mass_[i] = 1.0 / model.mass(i);
        }
        model_.potential_gradient(x_.q, force_);
        circle_.resize(x.dof());
        for (std::size_t i = 0; i < x.dof(); ++i) {
            circle_[i] = model.topology(i) == Topology::circle;
        }
    }

    void step() {
        const std::size_t n = x_.dof();
        const double half = 0.5 * h_;
        for (std::size_t i = 0; i < n; ++i) {
            x_.p[i] -= half * force_[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            x_.q[i] += h_ * x_.p[i] * inverse_mass_[i];
            if (circle_[i]) {
                x_.q[i] = wrap_angle(x_.q[i]);
            }
        }
        model_.potential_gradient(x_.q, force_);
        for (std::size_t i = 0; i < n; ++i) {
            x_.p[i] -= half * force_[i];
        }
    }

private:
    const SeparableModel& model_;
    PhaseState& x_;
    double h_;
    std::vector<double> force_;
    std::vector<double> inverse_mass_;
    std::vector<char> circle_;
};

} // namespace

void DynamicsConfig::validate() const {
    if (!(steps_per_period >= 1.0) || !(periods > 0.0) || !std::isfinite(steps_per_period) ||
        !std::isfinite(periods)) {
        throw DomainError("dynamics config needs steps_per_period >= 1 and periods > 0");
    }
}

double drift_budget(const HamiltonianModel& model, double energy) {
    return 1e-6 * std::max(0.0, energy - model.e_min());
}

PhaseState verlet_step(const HamiltonianModel& model, const PhaseState& x, double h) {
    const SeparableModel& sep = require_separable(model);
    model.check_dimension(x);
    if (!std::isfinite(h)) {
        throw DomainError("step size must be finite");
    }
    PhaseState next = x;
    Leapfrog(sep, next, h).step();
    return next;
}

OrbitRecord integrate_orbit(const HamiltonianModel& model, const PhaseState& x0, double t_end,
                            double h) {
    const SeparableModel& sep = require_separable(model);
    model.check_dimension(x0);
    const std::uint64_t steps = step_count(t_end, h);

    OrbitRecord record;
    record.model = model.name();
    record.step = h;
    PhaseState x = x0;
    model.wrap(x);
    record.energy = model.energy(x);
    record.states.reserve(steps + 1);
    record.times.reserve(steps + 1);
    record.states.push_back(x);
    record.times.push_back(0.0);

    Leapfrog stepper(sep, x, h);
    double drift = 0.0;
    for (std::uint64_t k = 1; k <= steps; ++k) {
        stepper.step();
        drift = std::max(drift, std::abs(model.energy_at(x.q, x.p) - record.energy));
        record.states.push_back(x);
        record.times.push_back(static_cast<double>(k) * h);
    }
    record.max_energy_drift = drift;
    record.drift_exceeded = drift > drift_budget(model, record.energy);
    return record;
}

namespace {

/// Length-weighted overall mean and the 16 block means of each function
/// along one leapfrog run of `steps` left-endpoint samples.
struct BlockPass {
    std::vector<double> mean;
    std::vector<std::vector<double>> blocks;
};

BlockPass block_pass(const HamiltonianModel& model, const SeparableModel& sep,
                     const std::vector<StateFunction>& fs, const PhaseState& x0,
                     std::uint64_t steps, double h) {
    const std::size_t m = fs.size();
    std::vector<double> block_sum(m, 0.0);
    BlockPass pass{std::vector<double>(m, 0.0), std::vector<std::vector<double>>(m)};

    PhaseState x = x0;
    model.wrap(x);
    Leapfrog stepper(sep, x, h);

    std::uint64_t block_start = 0;
    std::size_t block = 0;
    std::uint64_t block_end = steps / kAverageBlocks;
    for (std::uint64_t k = 0; k < steps; ++k) {
        for (std::size_t j = 0; j < m; ++j) {
            block_sum[j] += fs[j](x);
        }
        if (k + 1 == block_end) {
            const double count = static_cast<double>(block_end - block_start);
            for (std::size_t j = 0; j < m; ++j) {
                pass.blocks[j].push_back(block_sum[j] / count);
                pass.mean[j] += block_sum[j];
                block_sum[j] = 0.0;
            }
            ++block;
            block_start = block_end;
            block_end = steps * (block + 1) / kAverageBlocks;
        }
        if (k + 1 < steps) {
            stepper.step();
        }
    }
    for (double& total : pass.mean) {
        total /= static_cast<double>(steps);
    }
    return pass;
}

} // namespace

std::vector<Estimate> time_averages(const HamiltonianModel& model,
                                    const std::vector<StateFunction>& fs, const PhaseState& x0,
                                    double t_end, double h) {
    const SeparableModel& sep = require_separable(model);
    model.check_dimension(x0);
    const std::uint64_t steps = step_count(t_end, h);
    if (steps < 2 * kAverageBlocks) {
        throw DomainError("time average needs at least two steps per block");
    }

    const BlockPass fine = block_pass(model, sep, fs, x0, steps, h);
    // Leapfrog averages carry an O(h^2) bias that block statistics cannot see
    // on a periodic orbit; a pass at 2h estimates it as (fine - coarse) / 3.
    const BlockPass coarse = block_pass(model, sep, fs, x0, step_count(t_end, 2.0 * h), 2.0 * h);

    std::vector<Estimate> out;
    out.reserve(fs.size());
    const double blocks = static_cast<double>(kAverageBlocks);
    for (std::size_t j = 0; j < fs.size(); ++j) {
        const double mean = fine.mean[j];
        double spread = 0.0;
        for (double bm : fine.blocks[j]) {
            spread += (bm - mean) * (bm - mean);
        }
        const double statistical = spread / (blocks * (blocks - 1.0));
        const double bias = (mean - coarse.mean[j]) / 3.0;
        out.push_back({mean, std::sqrt(statistical + bias * bias), EstimateMethod::time_average,
                       steps, std::nullopt});
    }
    return out;
}

Estimate time_average(const HamiltonianModel& model, const StateFunction& f,
                      const PhaseState& x0, double t_end, double h) {
    return time_averages(model, {f}, x0, t_end, h).front();
}

double first_return_time(const HamiltonianModel& model, const PhaseState& x0, double h,
                         double t_max) {
    const SeparableModel& sep = require_separable(model);
    model.check_dimension(x0);
    const std::uint64_t steps = step_count(t_max, h);
    PhaseState x = x0;
    model.wrap(x);
    const double direction = x.p[0] >= 0.0 ? 1.0 : -1.0;
    Leapfrog stepper(sep, x, h);
    double q_prev = x.q[0];
    for (std::uint64_t k = 1; k <= steps; ++k) {
        stepper.step();
        const double q = x.q[0];
        const bool jumped = std::abs(q - q_prev) > std::numbers::pi;
        const bool crossed = direction > 0.0 ? (q_prev < 0.0 && q >= 0.0)
                                             : (q_prev > 0.0 && q <= 0.0);
        if (crossed && !jumped) {
            const double fraction = q_prev / (q_prev - q);
            return (static_cast<double>(k - 1) + fraction) * h;
        }
        q_prev = q;
    }
    throw NumericalError("first_return_time: no section crossing before t_max");
}

} // namespace eqlab
