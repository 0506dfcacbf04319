#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "eqlab/dynamics.hpp"
#include "eqlab/error.hpp"
#include "eqlab/microcanonical.hpp"
#include "eqlab/quadrature.hpp"
#include "oracles.hpp"

using namespace eqlab;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kG = 9.81;

McConfig mc(std::uint64_t n = 1'000'000, std::uint64_t seed = 0) {
    McConfig c;
    c.n_samples = n;
    c.seed = seed;
    return c;
}

StateFunction token(const HamiltonianModel& model, const char* name) {
    return along_function(field_from_token(model, name), model);
}

} // namespace

TEST(McConfig, Validation) {
    EXPECT_NO_THROW(mc().validate());
    EXPECT_THROW(mc(9999).validate(), DomainError);
    McConfig c = mc();
    c.fd_step = 0.0;
    EXPECT_THROW(c.validate(), DomainError);
    c.fd_step = 0.02;
    EXPECT_THROW(c.validate(), DomainError);
    c = mc();
    c.shell_thickness = -1.0;
    EXPECT_THROW(c.validate(), DomainError);
    const auto pend = make_model("pendulum");
    EXPECT_DOUBLE_EQ(mc().shell_for(*pend, 0.0), 1e-3 * kG);
    EXPECT_DOUBLE_EQ(mc().shell_for(*pend, -9.5), 1e-3);
    EXPECT_DOUBLE_EQ(mc().fd_window(*pend, 20.0), 1e-3 * (20.0 + kG));
}

TEST(VolMeMc, Examples) {
    const auto ho = make_model("ho1d");
    const Estimate disk = vol_me_mc(*ho, 1.0, mc());
    EXPECT_LE(sigma_distance(disk, 2.0 * kPi), 3.0);
    EXPECT_EQ(disk.method, EstimateMethod::mc_volume);
    EXPECT_EQ(disk.seed, std::optional<std::uint64_t>(0));

    const auto pend = make_model("pendulum");
    const Estimate sep = vol_me_mc(*pend, kG, mc());
    EXPECT_NEAR(16.0 * std::sqrt(kG), 50.113, 1e-3);
    EXPECT_LE(sigma_distance(sep, 16.0 * std::sqrt(kG)), 3.0);

    const Estimate ground = vol_me_mc(*pend, -kG, mc());
    EXPECT_EQ(ground.value, 0.0);
    EXPECT_EQ(ground.std_error, 0.0);
    EXPECT_EQ(vol_me_mc(*pend, -20.0, mc()).value, 0.0);
}

TEST(VolMeQuadrature, Examples) {
    const auto ho = make_model("ho1d");
    EXPECT_NEAR(vol_me_quadrature_1dof(*ho, 1.0).value, 2.0 * kPi, 1e-9);
    const auto pend = make_model("pendulum");
    for (double e : {0.0, 20.0}) {
        const Estimate exact = vol_me_quadrature_1dof(*pend, e);
        EXPECT_EQ(exact.std_error, 0.0);
        EXPECT_NEAR(exact.value, oracle::pendulum_area(e), 1e-9 * exact.value);
        EXPECT_LE(sigma_distance(vol_me_mc(*pend, e, mc()), exact), 3.0) << e;
    }
}

TEST(VolMeQuadrature, Errors) {
    const auto pend = make_model("pendulum");
    EXPECT_THROW(vol_me_quadrature_1dof(*pend, kG), GuardBandError);
    EXPECT_THROW(vol_me_quadrature_1dof(*pend, -kG), DomainError);
    EXPECT_THROW(vol_me_quadrature_1dof(*make_model("ho2d"), 1.0), DomainError);
}

TEST(VolSigma, Examples) {
    const auto ho = make_model("ho1d");
    for (double e : {0.5, 1.0, 7.0}) {
        EXPECT_NEAR(vol_sigma(*ho, e, mc()).value, 2.0 * kPi, 1e-9);
        EXPECT_LE(sigma_distance(vol_sigma(*ho, e, mc(), Route::monte_carlo), 2.0 * kPi), 3.0);
    }
    const auto pend = make_model("pendulum");
    EXPECT_NEAR(vol_sigma(*pend, 0.0, mc()).value, oracle::oscillation_period(0.0), 1e-10);
    EXPECT_NEAR(vol_sigma(*pend, 0.0, mc()).value, 2.368, 5e-4);
    EXPECT_NEAR(vol_sigma(*pend, 20.0, mc()).value, 2.0 * oracle::rotation_period(20.0), 1e-10);
}

TEST(VolSigma, ErrorsNearCriticalValues) {
    const auto pend = make_model("pendulum");
    EXPECT_THROW(vol_sigma(*pend, kG, mc()), GuardBandError);
    // Outside the guard band but the finite-difference window reaches g.
    EXPECT_THROW(vol_sigma(*pend, kG + 0.015, mc(), Route::monte_carlo), GuardBandError);
    EXPECT_THROW(vol_sigma(*pend, -kG + 0.005, mc(), Route::monte_carlo), DomainError);
}

TEST(VolSigma, CentralDifferenceAgreesWithPeriods) {
    // Finite difference of the exact area against summed periods, delta <= 1e-3.
    const auto pend = make_model("pendulum");
    for (double e : {-8.0, -3.0, 0.0, 5.0, 15.0, 30.0}) {
        const double delta = 1e-3 * std::max(1.0, e + kG);
        const double fd = (vol_me_quadrature_1dof(*pend, e + delta).value -
                           vol_me_quadrature_1dof(*pend, e - delta).value) /
                          (2.0 * delta);
        const double exact = vol_sigma(*pend, e, mc()).value;
        EXPECT_NEAR(fd, exact, 0.01 * exact) << e;
        const Estimate sampled = vol_sigma(*pend, e, mc(), Route::monte_carlo);
        EXPECT_LE(sigma_distance(sampled, exact), 3.0) << e;
    }
}

TEST(Temperature, Examples) {
    const auto ho = make_model("ho1d");
    for (double e : {0.25, 1.0, 3.0}) {
        EXPECT_NEAR(temperature_kT(*ho, e, mc()).value, e, 1e-9 * e);
    }
    const auto ho2 = make_model("ho2d");
    for (double e : {1.0, 2.0}) {
        const Estimate kT = temperature_kT(*ho2, e, mc());
        EXPECT_EQ(kT.method, EstimateMethod::mc_volume);
        EXPECT_LE(sigma_distance(kT, e / 2.0), 3.0) << e;
    }
}

TEST(Temperature, PendulumMatchesTheEllipticOracle) {
    const auto pend = make_model("pendulum");
    for (double e : {-9.0, -5.0, 0.0, 5.0, 7.4, 15.0, 20.0, 40.0}) {
        EXPECT_NEAR(temperature_kT(*pend, e, mc()).value, oracle::pendulum_kT(e),
                    1e-9 * oracle::pendulum_kT(e))
            << e;
    }
    // Frozen values from the oracle.
    EXPECT_NEAR(oracle::pendulum_kT(15.0), 26.279302, 1e-6);
    EXPECT_NEAR(oracle::pendulum_kT(20.0), 37.405952, 1e-6);
}

TEST(Temperature, PendulumMaximumBelowTheSeparatrix) {
    const auto pend = make_model("pendulum");
    double best_e = 0.0, best = -1.0;
    for (int i = 1; i < 2000; ++i) {
        const double e = -kG + 2.0 * kG * i / 2000.0;
        if (pend->guarding_critical_value(e)) {
            continue;
        }
        const double kT = temperature_kT(*pend, e, mc()).value;
        if (kT > best) {
            best = kT;
            best_e = e;
        }
    }
    EXPECT_NEAR(best_e, 7.4, 0.4);
    EXPECT_NEAR(best_e, 7.3759, 0.011);
}

TEST(DivIntegral, ConstantDivergenceAndZero) {
    const auto pend = make_model("pendulum");
    const Estimate volume = vol_me_mc(*pend, 0.0, mc());
    const Estimate unit = div_integral(*pend, field_from_token(*pend, "f22"), 0.0, mc());
    EXPECT_EQ(unit.value, volume.value);
    const Estimate zero = div_integral(*pend, field_from_token(*pend, "f12"), 20.0, mc());
    EXPECT_EQ(zero.value, 0.0);
    EXPECT_EQ(zero.std_error, 0.0);
    const auto ho2 = make_model("ho2d");
    EXPECT_EQ(div_integral(*ho2, field_from_token(*ho2, "f11"), 1.0, mc()).value,
              vol_me_mc(*ho2, 1.0, mc()).value);
}

TEST(DivIntegral, CustomFieldMatchesQuadrature) {
    const auto pend = make_model("pendulum");
    const VectorFieldSpec f = custom_pendulum_field();
    for (double e : {5.0, 20.0}) {
        const Estimate sampled = div_integral(*pend, f, e, mc());
        const Estimate exact = div_integral_quadrature_1dof(*pend, f, e);
        EXPECT_LE(sigma_distance(sampled, exact), 3.0) << e;
    }
    // Independent check: the inner p-integral of p^2 sin^2 q is (2/3) p_+^3 sin^2 q.
    const double e = 5.0;
    const double qmax = std::acos(-e / kG);
    const double ref = quad::integrate(
        [&](double q) {
            const double p = std::sqrt(std::max(0.0, 2.0 * (e + kG * std::cos(q))));
            return 2.0 / 3.0 * p * p * p * std::sin(q) * std::sin(q);
        },
        -qmax, qmax);
    EXPECT_NEAR(div_integral_quadrature_1dof(*pend, f, e).value, ref, 1e-8 * ref);
}

TEST(DivIntegral, DimensionMismatch) {
    const auto ho2 = make_model("ho2d");
    EXPECT_THROW(div_integral(*ho2, custom_pendulum_field(), 1.0, mc()), DimensionError);
}

TEST(EnsembleAverage1dof, BelowSeparatrixMatchesTemperature) {
    const auto pend = make_model("pendulum");
    for (double e : {-8.0, -5.0, 0.0, 5.0, 7.0}) {
        const double kT = temperature_kT(*pend, e, mc()).value;
        EXPECT_NEAR(ensemble_average_1dof(*pend, token(*pend, "f22"), e).value, kT, 1e-3 * kT);
        EXPECT_NEAR(ensemble_average_1dof(*pend, token(*pend, "f11"), e).value, kT, 1e-3 * kT);
    }
}

TEST(EnsembleAverage1dof, NormalisationIsExact) {
    const auto pend = make_model("pendulum");
    for (double e : {-9.0, -1.0, 3.0, 9.7, 10.0, 20.0, 100.0}) {
        EXPECT_EQ(ensemble_average_1dof(*pend, [](const PhaseState&) { return 1.0; }, e).value,
                  1.0)
            << e;
    }
}

TEST(EnsembleAverage1dof, AboveSeparatrixOracles) {
    const auto pend = make_model("pendulum");
    for (double e : {15.0, 20.0, 40.0}) {
        EXPECT_NEAR(ensemble_average_1dof(*pend, token(*pend, "f11"), e).value,
                    oracle::pendulum_f11_above(e), 1e-8)
            << e;
        EXPECT_NEAR(ensemble_average_1dof(*pend, token(*pend, "f22"), e).value,
                    oracle::pendulum_kT(e), 1e-8 * e)
            << e;
    }
    EXPECT_NEAR(oracle::pendulum_f11_above(15.0), 10.342, 1e-3);
    EXPECT_NEAR(oracle::pendulum_f11_above(20.0), 10.272, 1e-3);
}

TEST(EnsembleAverage1dof, MatchesTimeAverageAboveSeparatrix) {
    const auto pend = make_model("pendulum");
    const double e = 20.0;
    const auto f22 = token(*pend, "f22");
    const Estimate ens = ensemble_average_1dof(*pend, f22, e);
    const double period = orbit_period(*pend, e, Component::rotation_pos);
    const Estimate time =
        time_average(*pend, f22, pend->initial_state_on_shell(e, Component::rotation_pos),
                     400.0 * period, period / 4000.0);
    EXPECT_LE(sigma_distance(time, ens), 2.0);
}

TEST(EnsembleAverage1dof, ComponentSymmetry) {
    const auto pend = make_model("pendulum");
    for (const char* name : {"f11", "f22"}) {
        const auto f = token(*pend, name);
        const double pos = ensemble_average_1dof(*pend, f, 25.0, Component::rotation_pos).value;
        const double neg = ensemble_average_1dof(*pend, f, 25.0, Component::rotation_neg).value;
        EXPECT_NEAR(pos, neg, 1e-10 * std::abs(pos)) << name;
    }
    const auto p = [](const PhaseState& x) { return x.p[0]; };
    EXPECT_GT(ensemble_average_1dof(*pend, p, 25.0, Component::rotation_pos).value, 0.0);
    EXPECT_NEAR(ensemble_average_1dof(*pend, p, 25.0).value, 0.0, 1e-12);
}

TEST(EnsembleAverage1dof, Errors) {
    const auto pend = make_model("pendulum");
    const auto one = [](const PhaseState&) { return 1.0; };
    EXPECT_THROW(ensemble_average_1dof(*pend, one, kG), GuardBandError);
    EXPECT_THROW(ensemble_average_1dof(*pend, one, 0.0, Component::rotation_pos), DomainError);
}

TEST(ShellAverage, Examples) {
    const auto ho = make_model("ho1d");
    McConfig c = mc();
    c.shell_thickness = 1e-3;
    const auto p2 = [](const PhaseState& x) { return x.p[0] * x.p[0]; };
    const Estimate a = ensemble_average_mc_shell(*ho, p2, 1.0, c);
    EXPECT_LE(sigma_distance(a, 1.0), 3.0);
    EXPECT_EQ(a.method, EstimateMethod::mc_shell);

    const auto pend = make_model("pendulum");
    const Estimate b = ensemble_average_mc_shell(*pend, token(*pend, "f22"), 0.0, c);
    EXPECT_LE(sigma_distance(b, ensemble_average_1dof(*pend, token(*pend, "f22"), 0.0)), 3.0);

    const auto ho2 = make_model("ho2d");
    const Estimate d = ensemble_average_mc_shell(*ho2, p2, 2.0, c);
    EXPECT_LE(sigma_distance(d, 1.0), 3.0);
}

TEST(ShellAverage, NormalisationAndZeroAcceptance) {
    const auto pend = make_model("pendulum");
    const Estimate one =
        ensemble_average_mc_shell(*pend, [](const PhaseState&) { return 1.0; }, 3.0, mc());
    EXPECT_EQ(one.value, 1.0);
    EXPECT_EQ(one.std_error, 0.0);
    McConfig thin = mc(10'000);
    thin.shell_thickness = 1e-12;
    EXPECT_THROW(ensemble_average_mc_shell(*pend, [](const PhaseState&) { return 1.0; }, 3.0, thin),
                 NumericalError);
}

TEST(MonteCarlo, SeedDeterminismAndWorkerIndependence) {
    const auto pend = make_model("pendulum");
    McConfig a = mc(300'000, 42);
    McConfig b = a;
    b.workers = 4;
    const Estimate va = vol_me_mc(*pend, 3.0, a);
    const Estimate vb = vol_me_mc(*pend, 3.0, b);
    EXPECT_EQ(va.value, vb.value);
    EXPECT_EQ(va.std_error, vb.std_error);
    const Estimate sa = ensemble_average_mc_shell(*pend, token(*pend, "f11"), 3.0, a);
    const Estimate sb = ensemble_average_mc_shell(*pend, token(*pend, "f11"), 3.0, b);
    EXPECT_EQ(sa.value, sb.value);
    EXPECT_EQ(sa.std_error, sb.std_error);
    const Estimate ka = temperature_kT(*pend, 3.0, a, Route::monte_carlo);
    const Estimate kb = temperature_kT(*pend, 3.0, b, Route::monte_carlo);
    EXPECT_EQ(ka.value, kb.value);
    McConfig other = a;
    other.seed = 43;
    EXPECT_NE(vol_me_mc(*pend, 3.0, other).value, va.value);
}

TEST(MonteCarlo, QuadruplingSamplesHalvesTheError) {
    const auto pend = make_model("pendulum");
    double ratio_sum = 0.0;
    double spread_small = 0.0, spread_large = 0.0;
    const double exact = vol_me_quadrature_1dof(*pend, 2.0).value;
    const int seeds = 12;
    for (int s = 0; s < seeds; ++s) {
        const Estimate small = vol_me_mc(*pend, 2.0, mc(20'000, 100 + s));
        const Estimate large = vol_me_mc(*pend, 2.0, mc(80'000, 100 + s));
        ratio_sum += large.std_error / small.std_error;
        spread_small += std::pow(small.value - exact, 2);
        spread_large += std::pow(large.value - exact, 2);
    }
    EXPECT_NEAR(ratio_sum / seeds, 0.5, 0.02);
    // Observed scatter shrinks by about two as well (loose: 12 seeds).
    const double observed = std::sqrt(spread_large / spread_small);
    EXPECT_GT(observed, 0.25);
    EXPECT_LT(observed, 0.9);
}

TEST(VolumeCurve, MonotoneNonNegativeAndFlagged) {
    const auto pend = make_model("pendulum");
    std::vector<double> energies;
    for (double e = -9.5; e <= 30.0; e += 1.5) {
        energies.push_back(e);
    }
    energies.push_back(kG);
    std::sort(energies.begin(), energies.end());
    const VolumeCurve curve = volume_curve(*pend, energies, mc(200'000));
    ASSERT_EQ(curve.vol_me.size(), energies.size());
    for (std::size_t i = 0; i < energies.size(); ++i) {
        EXPECT_GE(curve.vol_me[i].value, 0.0);
        EXPECT_EQ(curve.guarded[i], energies[i] == kG);
        if (i > 0) {
            const double tol = 3.0 * std::hypot(curve.vol_me[i].std_error,
                                                curve.vol_me[i - 1].std_error);
            EXPECT_GE(curve.vol_me[i].value, curve.vol_me[i - 1].value - tol);
        }
    }
    const auto g_row = std::find(energies.begin(), energies.end(), kG) - energies.begin();
    EXPECT_TRUE(std::isnan(curve.kT[g_row].value));
    EXPECT_LE(sigma_distance(curve.vol_me[g_row], 16.0 * std::sqrt(kG)), 3.0);
}
