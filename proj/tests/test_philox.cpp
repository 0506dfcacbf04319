#include <array>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "eqlab/counter_rng.hpp"

using eqlab::CounterRng;
using eqlab::Philox4x32;

// Known-answer vectors of the reference Philox4x32-10 implementation.
TEST(Philox, KnownAnswerZero) {
    constexpr auto out = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(out, (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerOnes) {
    constexpr auto out = Philox4x32::generate(
        {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    EXPECT_EQ(out, (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
    constexpr auto out = Philox4x32::generate(
        {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
    EXPECT_EQ(out, (Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(CounterRng, UnitIntervalConversion) {
    EXPECT_EQ(CounterRng::to_unit(0, 0), 0.0);
    EXPECT_LT(CounterRng::to_unit(0xffffffffu, 0xffffffffu), 1.0);
    EXPECT_EQ(CounterRng::to_unit(0x80000000u, 0), 0.5);
}

TEST(CounterRng, AddressableAndDeterministic) {
    const CounterRng a(7, 0), b(7, 0), other_stream(7, 1), other_seed(8, 0);
    std::array<double, 5> x{}, y{}, z{}, w{};
    a.uniforms(123456789, x);
    b.uniforms(123456789, y);
    other_stream.uniforms(123456789, z);
    other_seed.uniforms(123456789, w);
    EXPECT_EQ(x, y);
    EXPECT_NE(x, z);
    EXPECT_NE(x, w);
    // A shorter request is a prefix of a longer one.
    std::array<double, 2> prefix{};
    a.uniforms(123456789, prefix);
    EXPECT_EQ(prefix[0], x[0]);
    EXPECT_EQ(prefix[1], x[1]);
}

TEST(CounterRng, MomentsOfManyDraws) {
    const CounterRng rng(2024, 3);
    const int n = 200000;
    double sum = 0.0, sq = 0.0, cross = 0.0;
    std::array<double, 2> u{};
    for (int i = 0; i < n; ++i) {
        rng.uniforms(static_cast<std::uint64_t>(i), u);
        ASSERT_GE(u[0], 0.0);
        ASSERT_LT(u[0], 1.0);
        sum += u[0];
        sq += u[0] * u[0];
        cross += (u[0] - 0.5) * (u[1] - 0.5);
    }
    EXPECT_NEAR(sum / n, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
    EXPECT_NEAR(sq / n, 1.0 / 3.0, 5e-3);
    EXPECT_NEAR(cross / n, 0.0, 5.0 / 12.0 / std::sqrt(n));
}
