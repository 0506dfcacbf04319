#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "eqlab/error.hpp"
#include "eqlab/fields.hpp"

using namespace eqlab;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kG = 9.81;

double fd_divergence(const VectorFieldSpec& field, const PhaseState& x) {
    const std::size_t n = x.dof();
    double div = 0.0;
    for (std::size_t mu = 0; mu < 2 * n; ++mu) {
        if (!field.has_component(mu)) {
            continue;
        }
        const double step = 1e-5;
        PhaseState plus = x, minus = x;
        (mu < n ? plus.q[mu] : plus.p[mu - n]) += step;
        (mu < n ? minus.q[mu] : minus.p[mu - n]) -= step;
        div += (field.component(mu, plus) - field.component(mu, minus)) / (2.0 * step);
    }
    return div;
}

} // namespace

TEST(CoordinateField, PendulumExamples) {
    const auto pend = make_model("pendulum");
    const VectorFieldSpec pp = coordinate_field(*pend, {1, 1});
    EXPECT_EQ(pp.constant_divergence(), 1.0);
    EXPECT_EQ(pp.divergence(PhaseState::one(0.3, 2.0)), 1.0);
    EXPECT_EQ(pp.locus(), DiscontinuityLocus::none());

    const VectorFieldSpec qq = coordinate_field(*pend, {0, 0});
    EXPECT_EQ(qq.divergence(PhaseState::one(0.3, 2.0)), 1.0);
    EXPECT_EQ(qq.locus(), DiscontinuityLocus::angular_seam(0));

    const VectorFieldSpec qp = coordinate_field(*pend, {0, 1});
    EXPECT_EQ(qp.divergence(PhaseState::one(0.3, 2.0)), 0.0);
    EXPECT_EQ(qp.constant_divergence(), 0.0);

    const VectorFieldSpec pq = coordinate_field(*pend, {1, 0});
    EXPECT_EQ(pq.locus(), DiscontinuityLocus::none());
    EXPECT_EQ(pq.divergence(PhaseState::one(0.3, 2.0)), 0.0);
}

TEST(CoordinateField, ComponentsAndErrors) {
    const auto ho2 = make_model("ho2d");
    const VectorFieldSpec f = coordinate_field(*ho2, {3, 0}); // p2 d/dq1
    const PhaseState x({1.0, 2.0}, {3.0, 4.0});
    EXPECT_EQ(f.component(0, x), 4.0);
    for (std::size_t mu : {1u, 2u, 3u}) {
        EXPECT_FALSE(f.has_component(mu));
        EXPECT_EQ(f.component(mu, x), 0.0);
    }
    EXPECT_THROW(coordinate_field(*ho2, {4, 0}), DimensionError);
    EXPECT_THROW(coordinate_field(*ho2, {0, 4}), DimensionError);
}

TEST(CustomField, Examples) {
    const VectorFieldSpec f = custom_pendulum_field();
    EXPECT_NEAR(f.divergence(PhaseState::one(kPi / 2.0, 2.0)), 4.0, 1e-14);
    EXPECT_EQ(f.divergence(PhaseState::one(0.0, 5.0)), 0.0);
    EXPECT_EQ(f.locus(), DiscontinuityLocus::none());
    EXPECT_FALSE(f.has_component(0));
    EXPECT_NEAR(f.component(1, PhaseState::one(kPi / 2.0, 2.0)), 8.0 / 3.0, 1e-14);
}

TEST(Divergence, MatchesFiniteDifferencesAwayFromLoci) {
    const auto pend = make_model("pendulum");
    const auto ho2 = make_model("ho2d");
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    std::uniform_real_distribution<double> value(-3.0, 3.0);

    std::vector<VectorFieldSpec> pend_fields{custom_pendulum_field()};
    for (const std::string& token : field_tokens()) {
        pend_fields.push_back(field_from_token(*pend, token));
    }
    for (const VectorFieldSpec& field : pend_fields) {
        for (int i = 0; i < 100; ++i) {
            const PhaseState x = PhaseState::one(angle(rng), value(rng));
            const double exact = field.divergence(x);
            EXPECT_NEAR(fd_divergence(field, x), exact, 1e-5 * std::max(1.0, std::abs(exact)))
                << field.name();
        }
    }
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const VectorFieldSpec field = coordinate_field(*ho2, {i, j});
            for (int k = 0; k < 25; ++k) {
                const PhaseState x({value(rng), value(rng)}, {value(rng), value(rng)});
                EXPECT_NEAR(fd_divergence(field, x), field.divergence(x), 1e-5);
            }
        }
    }
}

TEST(DeriveAlong, Examples) {
    const auto pend = make_model("pendulum");
    EXPECT_DOUBLE_EQ(derive_along(field_from_token(*pend, "f22"), *pend, PhaseState::one(0, 3)),
                     9.0);
    const double f11 =
        derive_along(field_from_token(*pend, "f11"), *pend, PhaseState::one(kPi / 2.0, 0.0));
    EXPECT_NEAR(f11, kPi / 2.0 * kG, 1e-12);
    EXPECT_NEAR(f11, 15.41, 5e-3);
    EXPECT_NEAR(derive_along(custom_pendulum_field(), *pend, PhaseState::one(kPi / 2.0, 1.0)),
                1.0 / 3.0, 1e-15);
}

TEST(DeriveAlong, CoordinateFieldsEqualTheProductExactly) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> value(-3.0, 3.0);
    for (const std::string name : {"pendulum", "ho1d", "ho2d"}) {
        const auto model = make_model(name);
        const std::size_t n = model->dof();
        for (std::size_t i = 0; i < 2 * n; ++i) {
            for (std::size_t j = 0; j < 2 * n; ++j) {
                const VectorFieldSpec field = coordinate_field(*model, {i, j});
                for (int k = 0; k < 20; ++k) {
                    std::vector<double> q(n), p(n);
                    for (std::size_t a = 0; a < n; ++a) {
                        q[a] = value(rng);
                        p[a] = value(rng);
                    }
                    const PhaseState x(q, p);
                    const Gradient grad = model->grad_energy(x);
                    const double dj = j < n ? grad.dHdq[j] : grad.dHdp[j - n];
                    EXPECT_EQ(derive_along(field, *model, x), x.coordinate(i) * dj);
                }
            }
        }
    }
}

TEST(DeriveAlong, UsesTheWrappedRepresentative) {
    const auto pend = make_model("pendulum");
    const VectorFieldSpec f11 = field_from_token(*pend, "f11");
    // q slightly past pi is stored as q - 2 pi.
    PhaseState x = PhaseState::one(kPi + 0.1, 0.0);
    pend->wrap(x);
    EXPECT_NEAR(derive_along(f11, *pend, x), (0.1 - kPi) * kG * std::sin(kPi + 0.1), 1e-12);
}

TEST(AlongFunction, BindsTheModel) {
    const auto pend = make_model("pendulum");
    const StateFunction f = along_function(field_from_token(*pend, "f21"), *pend);
    const PhaseState x = PhaseState::one(0.4, -1.5);
    EXPECT_NEAR(f(x), -1.5 * kG * std::sin(0.4), 1e-14);
}

TEST(Tokens, BuiltInsAndErrors) {
    EXPECT_EQ(field_tokens(), (std::vector<std::string>{"f11", "f12", "f21", "f22", "pcubed"}));
    const auto pend = make_model("pendulum");
    EXPECT_EQ(field_from_token(*pend, "f12").coordinate_index(), (CoordinateFieldIndex{0, 1}));
    EXPECT_EQ(field_from_token(*pend, "f21").coordinate_index(), (CoordinateFieldIndex{1, 0}));
    EXPECT_FALSE(field_from_token(*pend, "pcubed").coordinate_index().has_value());
    EXPECT_THROW(field_from_token(*pend, "f33"), DomainError);
    const auto ho2 = make_model("ho2d");
    EXPECT_EQ(field_from_token(*ho2, "f22").coordinate_index(), (CoordinateFieldIndex{2, 2}));
    EXPECT_THROW(field_from_token(*ho2, "pcubed"), DimensionError);
}

TEST(Locus, MeetsRegionExactlyFromTheSeamEnergy) {
    const auto pend = make_model("pendulum");
    const VectorFieldSpec f11 = field_from_token(*pend, "f11");
    EXPECT_FALSE(locus_meets_region(f11, *pend, 5.0));
    EXPECT_FALSE(locus_meets_region(f11, *pend, std::nextafter(kG, 0.0)));
    EXPECT_TRUE(locus_meets_region(f11, *pend, kG));
    EXPECT_TRUE(locus_meets_region(f11, *pend, 20.0));
    EXPECT_FALSE(locus_meets_region(field_from_token(*pend, "f22"), *pend, 20.0));
    EXPECT_FALSE(locus_meets_region(custom_pendulum_field(), *pend, 20.0));
    const auto ho = make_model("ho1d");
    EXPECT_FALSE(locus_meets_region(field_from_token(*ho, "f11"), *ho, 100.0));
}
