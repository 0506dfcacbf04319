#include "eqlab/microcanonical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "eqlab/counter_rng.hpp"
#include "eqlab/dynamics.hpp"
#include "eqlab/error.hpp"
#include "eqlab/parallel.hpp"
#include "one_dof.hpp"

namespace eqlab {

namespace {

constexpr std::uint64_t kChunk = 1u << 15;
constexpr std::uint32_t kBoxStream = 0;
constexpr std::uint32_t kShellStream = 1;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Per-chunk tallies; merged in a fixed pairwise order.
struct Tally {
    std::vector<std::uint64_t> counts;
    std::vector<double> sums;
    std::vector<double> squares;

    Tally(std::size_t n_counts, std::size_t n_sums)
        : counts(n_counts, 0), sums(n_sums, 0.0), squares(n_sums, 0.0) {}

    void merge(const Tally& other) {
        for (std::size_t i = 0; i < counts.size(); ++i) {
            counts[i] += other.counts[i];
        }
        for (std::size_t i = 0; i < sums.size(); ++i) {
            sums[i] += other.sums[i];
            squares[i] += other.squares[i];
        }
    }
};

Tally pairwise_merge(std::vector<Tally>& parts, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) {
        return parts[lo];
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    Tally left = pairwise_merge(parts, lo, mid);
    left.merge(pairwise_merge(parts, mid, hi));
    return left;
}

/// Draws cfg.n_samples uniform points of `box` from (seed, stream) and
/// feeds (x, H(x), tally) to visit. Chunks run on cfg.workers threads; the
/// result does not depend on the worker count.
template <class Visit>
Tally sample_box(const HamiltonianModel& model, const Box& box, const McConfig& cfg,
                 std::uint32_t stream, std::size_t n_counts, std::size_t n_sums, Visit&& visit) {
    const std::size_t n = model.dof();
    const double volume = box.volume();
    if (!(volume > 0.0) || !std::isfinite(volume)) {
        throw DomainError("degenerate sampling box for model " + model.name());
    }
    const CounterRng rng(cfg.seed, stream);
    const std::uint64_t chunks = (cfg.n_samples + kChunk - 1) / kChunk;
    std::vector<Tally> parts(chunks, Tally(n_counts, n_sums));

    parallel_for(chunks, cfg.workers, [&](std::size_t c) {
        Tally& tally = parts[c];
        std::vector<double> u(2 * n);
        PhaseState x(std::vector<double>(n, 0.0), std::vector<double>(n, 0.0));
        const std::uint64_t begin = c * kChunk;
        const std::uint64_t end = std::min<std::uint64_t>(cfg.n_samples, begin + kChunk);
        for (std::uint64_t i = begin; i < end; ++i) {
            rng.uniforms(i, u);
            for (std::size_t k = 0; k < n; ++k) {
                x.q[k] = box.lower[k] + (box.upper[k] - box.lower[k]) * u[k];
                x.p[k] = box.lower[n + k] + (box.upper[n + k] - box.lower[n + k]) * u[n + k];
            }
            visit(x, model.energy_at(x.q, x.p), tally);
        }
    });
    return pairwise_merge(parts, 0, parts.size());
}

Estimate mc_estimate(double value, double se, const McConfig& cfg, EstimateMethod method) {
    return {value, se, method, cfg.n_samples, cfg.seed};
}

bool prefers_quadrature(const HamiltonianModel& model, double energy, Route route) {
    switch (route) {
    case Route::quadrature:
        return true;
    case Route::monte_carlo:
        return false;
    case Route::automatic:
        return model.dof() == 1 && model.as_separable() != nullptr &&
               !model.guarding_critical_value(energy) && energy > model.e_min();
    }
    return false;
}

void require_window_clear(const HamiltonianModel& model, double energy, double window,
                          std::string_view operation) {
    if (!(energy - window > model.e_min())) {
        throw DomainError(std::string(operation) +
                          ": finite-difference window reaches the ground state");
    }
    for (const CriticalValue& c : model.critical_values()) {
        if (c.energy >= energy - window && c.energy <= energy + window) {
            throw GuardBandError(std::string(operation) +
                                 ": finite-difference window crosses a critical value");
        }
    }
    if (model.guarding_critical_value(energy)) {
        throw GuardBandError(std::string(operation) + ": energy inside a guard band");
    }
}

void require_separatrix_clear(const HamiltonianModel& model, double energy,
                              std::string_view operation) {
    for (const CriticalValue& c : model.critical_values()) {
        if (c.kind == CriticalKind::separatrix &&
            std::abs(energy - c.energy) < guard_band_width(c.energy)) {
            throw GuardBandError(std::string(operation) +
                                 ": energy inside the separatrix guard band");
        }
    }
}

/// Outer integral over the q-range of M_E of inner(q, p_+(q)) dq.
template <class Inner>
double region_integral(const SeparableModel& model, double energy, Inner&& inner) {
    const detail::QRange range = detail::q_range(model, energy);
    auto body = [&](double v) {
        const auto [q, jac] = range.map(v);
        const double p = detail::momentum(model, q, energy);
        return std::array<double, 1>{p > 0.0 ? inner(q, p) * jac : 0.0};
    };
    const auto result =
        quad::integrate_vector<1>(body, range.lower(), range.upper(), detail::loop_options());
    if (!result.converged) {
        throw NumericalError("phase-space area quadrature did not converge");
    }
    return result.value[0];
}

struct ShellSums {
    Tally tally;
    double thickness;
};

} // namespace

// McConfig ------------------------------------------------------------------

void McConfig::validate() const {
    if (n_samples < 10'000) {
        throw DomainError("Monte Carlo needs at least 1e4 samples");
    }
    if (!(fd_step > 0.0 && fd_step <= 1e-2)) {
        throw DomainError("fd_step must lie in (0, 1e-2]");
    }
    if (shell_thickness && !(*shell_thickness > 0.0)) {
        throw DomainError("shell_thickness must be positive");
    }
}

double McConfig::fd_window(const HamiltonianModel& model, double energy) const {
    return fd_step * std::max(1.0, energy - model.e_min());
}

double McConfig::shell_for(const HamiltonianModel& model, double energy) const {
    return shell_thickness ? *shell_thickness
                           : 1e-3 * std::max(1.0, std::abs(energy - model.e_min()));
}

// Volumes -------------------------------------------------------------------

Estimate vol_me_mc(const HamiltonianModel& model, double energy, const McConfig& cfg) {
    cfg.validate();
    if (!std::isfinite(energy)) {
        throw DomainError("vol_me_mc: energy must be finite");
    }
    if (energy <= model.e_min()) {
        return mc_estimate(0.0, 0.0, cfg, EstimateMethod::mc_volume);
    }
    const Box box = model.bounding_box(energy);
    const Tally t = sample_box(model, box, cfg, kBoxStream, 1, 0,
                               [energy](const PhaseState&, double h, Tally& tally) {
                                   tally.counts[0] += h <= energy ? 1 : 0;
                               });
    const double n = static_cast<double>(cfg.n_samples);
    const double fraction = static_cast<double>(t.counts[0]) / n;
    const double volume = box.volume();
    return mc_estimate(volume * fraction, volume * std::sqrt(fraction * (1.0 - fraction) / n),
                       cfg, EstimateMethod::mc_volume);
}

Estimate vol_me_quadrature_1dof(const HamiltonianModel& model, double energy) {
    const SeparableModel& sep = detail::require_one_dof(model, "vol_me_quadrature_1dof");
    if (!(energy > model.e_min())) {
        throw DomainError("vol_me_quadrature_1dof: energy must lie above the ground state");
    }
    require_separatrix_clear(model, energy, "vol_me_quadrature_1dof");
    const double area = region_integral(sep, energy, [](double, double p) { return 2.0 * p; });
    return Estimate::exact(area);
}

namespace {

struct McThermo {
    Estimate vol_me;
    Estimate vol_sigma;
    Estimate kT;
};

/// One correlated pass in the box of E + delta: counts below E - delta, E
/// and E + delta give Vol(M_E) and the central difference of the volume.
McThermo mc_thermo(const HamiltonianModel& model, double energy, const McConfig& cfg) {
    cfg.validate();
    const double delta = cfg.fd_window(model, energy);
    require_window_clear(model, energy, delta, "vol_sigma");
    const Box box = model.bounding_box(energy + delta);
    const double lo = energy - delta;
    const double hi = energy + delta;
    const Tally t = sample_box(model, box, cfg, kBoxStream, 3, 0,
                               [=](const PhaseState&, double h, Tally& tally) {
                                   tally.counts[0] += h <= lo ? 1 : 0;
                                   tally.counts[1] += h <= energy ? 1 : 0;
                                   tally.counts[2] += h <= hi ? 1 : 0;
                               });
    const double n = static_cast<double>(cfg.n_samples);
    const double volume = box.volume();
    const double inside = static_cast<double>(t.counts[1]);
    const double shell = static_cast<double>(t.counts[2] - t.counts[0]);
    if (shell == 0.0 || inside == 0.0) {
        throw NumericalError("vol_sigma: no samples in the finite-difference shell");
    }
    const double p_in = inside / n;
    const double p_shell = shell / n;

    McThermo out;
    out.vol_me = mc_estimate(volume * p_in, volume * std::sqrt(p_in * (1.0 - p_in) / n), cfg,
                             EstimateMethod::mc_volume);
    out.vol_sigma =
        mc_estimate(volume * p_shell / (2.0 * delta),
                    volume * std::sqrt(p_shell * (1.0 - p_shell) / n) / (2.0 * delta), cfg,
                    EstimateMethod::mc_volume);
    const double kT = inside * (2.0 * delta) / shell;
    const double rel = std::sqrt((1.0 - p_in) / inside + (1.0 - p_shell) / shell);
    out.kT = mc_estimate(kT, kT * rel, cfg, EstimateMethod::mc_volume);
    return out;
}

double summed_periods(const HamiltonianModel& model, double energy) {
    double total = 0.0;
    for (Component c : model.list_components(energy)) {
        total += orbit_period(model, energy, c);
    }
    return total;
}

} // namespace

Estimate vol_sigma(const HamiltonianModel& model, double energy, const McConfig& cfg,
                   Route route) {
    if (prefers_quadrature(model, energy, route)) {
        detail::require_one_dof(model, "vol_sigma");
        model.require_regular(energy, "vol_sigma");
        return Estimate::exact(summed_periods(model, energy));
    }
    return mc_thermo(model, energy, cfg).vol_sigma;
}

Estimate temperature_kT(const HamiltonianModel& model, double energy, const McConfig& cfg,
                        Route route) {
    if (prefers_quadrature(model, energy, route)) {
        detail::require_one_dof(model, "temperature_kT");
        model.require_regular(energy, "temperature_kT");
        const double volume = vol_me_quadrature_1dof(model, energy).value;
        return Estimate::exact(volume / summed_periods(model, energy));
    }
    return mc_thermo(model, energy, cfg).kT;
}

Estimate div_integral(const HamiltonianModel& model, const VectorFieldSpec& field,
                      double energy, const McConfig& cfg) {
    cfg.validate();
    if (field.phase_dimension() != 2 * model.dof()) {
        throw DimensionError("div_integral: field does not match the model");
    }
    if (energy <= model.e_min()) {
        return mc_estimate(0.0, 0.0, cfg, EstimateMethod::mc_volume);
    }
    const Box box = model.bounding_box(energy);
    const Tally t = sample_box(model, box, cfg, kBoxStream, 1, 1,
                               [&](const PhaseState& x, double h, Tally& tally) {
                                   if (h <= energy) {
                                       const double d = field.divergence(x);
                                       tally.counts[0] += 1;
                                       tally.sums[0] += d;
                                       tally.squares[0] += d * d;
                                   }
                               });
    const double n = static_cast<double>(cfg.n_samples);
    const double volume = box.volume();
    const double mean = t.sums[0] / n;
    const double variance = std::max(0.0, t.squares[0] / n - mean * mean);
    return mc_estimate(volume * mean, volume * std::sqrt(variance / n), cfg,
                       EstimateMethod::mc_volume);
}

Estimate div_integral_quadrature_1dof(const HamiltonianModel& model,
                                      const VectorFieldSpec& field, double energy) {
    const SeparableModel& sep = detail::require_one_dof(model, "div_integral_quadrature_1dof");
    if (field.phase_dimension() != 2) {
        throw DimensionError("div_integral_quadrature_1dof: field does not match the model");
    }
    if (field.constant_divergence()) {
        const double volume = vol_me_quadrature_1dof(model, energy).value;
        return Estimate::exact(*field.constant_divergence() * volume);
    }
    if (!(energy > model.e_min())) {
        throw DomainError("div_integral_quadrature_1dof: energy must lie above the ground state");
    }
    require_separatrix_clear(model, energy, "div_integral_quadrature_1dof");
    const double value = region_integral(sep, energy, [&](double q, double p_max) {
        PhaseState x = PhaseState::one(q, 0.0);
        return quad::integrate(
            [&](double p) {
                x.p[0] = p;
                return field.divergence(x);
            },
            -p_max, p_max, detail::loop_options());
    });
    return Estimate::exact(value);
}

// Ensemble averages ---------------------------------------------------------

Estimate ensemble_average_1dof(const HamiltonianModel& model, const StateFunction& f,
                               double energy, std::optional<Component> component) {
    const SeparableModel& sep = detail::require_one_dof(model, "ensemble_average_1dof");
    model.require_regular(energy, "ensemble_average_1dof");
    std::vector<Component> components =
        component ? std::vector<Component>{*component} : model.list_components(energy);
    if (component) {
        const auto available = model.list_components(energy);
        if (std::find(available.begin(), available.end(), *component) == available.end()) {
            throw DomainError("ensemble_average_1dof: component does not exist at this energy");
        }
    }

    double time = 0.0;
    double integral = 0.0;
    std::uint64_t evaluations = 0;
    PhaseState x = PhaseState::one(0.0, 0.0);
    for (Component c : components) {
        const auto result = detail::loop_integral<2>(
            sep, energy, c, [&](double q, double p, double weight) {
                x.q[0] = q;
                x.p[0] = p;
                return std::array<double, 2>{weight, f(x) * weight};
            });
        if (!result.converged) {
            throw NumericalError("ensemble_average_1dof: quadrature did not converge");
        }
        time += result.value[0];
        integral += result.value[1];
        evaluations += result.evaluations;
    }
    return Estimate::exact(integral / time, evaluations);
}

std::vector<Estimate> ensemble_averages_mc_shell(const HamiltonianModel& model,
                                                 const std::vector<StateFunction>& fs,
                                                 double energy, const McConfig& cfg) {
    cfg.validate();
    if (!(energy >= model.e_min())) {
        throw DomainError("ensemble_average_mc_shell: energy below the ground state");
    }
    const double thickness = cfg.shell_for(model, energy);
    const double top = energy + thickness;
    const Box box = model.bounding_box(top);
    const std::size_t m = fs.size();
    const Tally t = sample_box(model, box, cfg, kShellStream, 1, m,
                               [&](const PhaseState& x, double h, Tally& tally) {
                                   if (h >= energy && h <= top) {
                                       tally.counts[0] += 1;
                                       for (std::size_t j = 0; j < m; ++j) {
                                           const double v = fs[j](x);
                                           tally.sums[j] += v;
                                           tally.squares[j] += v * v;
                                       }
                                   }
                               });
    const std::uint64_t accepted = t.counts[0];
    if (accepted < 2) {
        throw NumericalError("ensemble_average_mc_shell: fewer than two samples in the shell");
    }
    const double k = static_cast<double>(accepted);
    std::vector<Estimate> out;
    out.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double mean = t.sums[j] / k;
        const double variance = std::max(0.0, (t.squares[j] - k * mean * mean) / (k - 1.0));
        out.push_back({mean, std::sqrt(variance / k), EstimateMethod::mc_shell, accepted,
                       cfg.seed});
    }
    return out;
}

Estimate ensemble_average_mc_shell(const HamiltonianModel& model, const StateFunction& f,
                                   double energy, const McConfig& cfg) {
    return ensemble_averages_mc_shell(model, {f}, energy, cfg).front();
}

VolumeCurve volume_curve(const HamiltonianModel& model, const std::vector<double>& energies,
                         const McConfig& cfg, Route route) {
    VolumeCurve curve;
    const Estimate missing{kNaN, kNaN, EstimateMethod::mc_volume, cfg.n_samples, cfg.seed};
    for (double e : energies) {
        curve.energies.push_back(e);
        const bool guarded = model.guarding_critical_value(e).has_value() || e <= model.e_min();
        curve.guarded.push_back(guarded);
        if (!guarded && prefers_quadrature(model, e, route)) {
            const Estimate volume = vol_me_quadrature_1dof(model, e);
            const Estimate sigma = Estimate::exact(summed_periods(model, e));
            curve.vol_me.push_back(volume);
            curve.vol_sigma.push_back(sigma);
            curve.kT.push_back(Estimate::exact(volume.value / sigma.value));
            continue;
        }
        curve.vol_me.push_back(vol_me_mc(model, e, cfg));
        try {
            const McThermo thermo = mc_thermo(model, e, cfg);
            curve.vol_sigma.push_back(thermo.vol_sigma);
            curve.kT.push_back(thermo.kT);
        } catch (const Error&) {
            if (!guarded) {
                throw;
            }
            curve.vol_sigma.push_back(missing);
            curve.kT.push_back(missing);
        }
    }
    return curve;
}

} // namespace eqlab
