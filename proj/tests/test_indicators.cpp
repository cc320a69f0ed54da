#include "esgport/errors.hpp"
#include "esgport/indicators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace esgport::indicators {
namespace {

/// Direct EMA oracle: e_0 = x_0, e_t = a x_t + (1-a) e_{t-1}.
std::vector<double> ema_oracle(const std::vector<double>& x, double span) {
    const double a = 2.0 / (span + 1.0);
    std::vector<double> e{x[0]};
    for (std::size_t t = 1; t < x.size(); ++t) e.push_back(a * x[t] + (1 - a) * e.back());
    return e;
}

TEST(Ema, MatchesRecursionOracle) {
    std::vector<double> x;
    for (int t = 0; t < 50; ++t) x.push_back(100 + std::sin(t * 0.3) * 5);
    const auto e = ema(x, 12);
    const auto o = ema_oracle(x, 12);
    for (std::size_t t = 0; t < x.size(); ++t) EXPECT_NEAR(e[t], o[t], 1e-12);
}

TEST(Macd, ConstantSeriesIsIdenticallyZero) {
    const std::vector<double> x(60, 42.5);
    const auto m = macd(x);
    EXPECT_EQ(m.first_warm, kMacdSlow - 1);
    for (double v : m.values) EXPECT_EQ(v, 0.0);
}

TEST(Macd, IncreasingSeriesPositiveAfterWarmUp) {
    std::vector<double> x;
    for (int t = 0; t < 80; ++t) x.push_back(10.0 + 0.5 * t);
    const auto m = macd(x);
    const auto fast = ema_oracle(x, 12), slow = ema_oracle(x, 26);
    for (std::size_t t = m.first_warm; t < x.size(); ++t) {
        EXPECT_GT(m.values[t], 0.0);
        EXPECT_NEAR(m.values[t], fast[t] - slow[t], 1e-12);
    }
}

TEST(Macd, TooShort) {
    const std::vector<double> x{1.0, 2.0};
    try {
        macd(x);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SeriesTooShort);
    }
}

TEST(Rsi, MonotoneSeriesSaturate) {
    std::vector<double> up, down;
    for (int t = 0; t < 40; ++t) {
        up.push_back(10.0 + t);
        down.push_back(100.0 - t);
    }
    const auto ru = rsi(up), rd = rsi(down);
    for (std::size_t t = ru.first_warm; t < up.size(); ++t) {
        EXPECT_EQ(ru.values[t], 100.0);
        EXPECT_EQ(rd.values[t], 0.0);
    }
}

TEST(Rsi, AlternatingEqualMovesBalance) {
    std::vector<double> x;
    for (int t = 0; t < 401; ++t) x.push_back(t % 2 == 0 ? 100.0 : 101.0);
    const auto r = rsi(x);
    // seed window holds 7 gains and 7 losses of equal size
    EXPECT_NEAR(r.values[r.first_warm], 50.0, 1e-12);
    // Wilder smoothing settles into a two-cycle: after a gain the average gain
    // is 14/27 of the move and the average loss 13/27, mirrored after a loss
    EXPECT_NEAR(r.values[x.size() - 1], 100.0 * 13.0 / 27.0, 1e-9);
    EXPECT_NEAR(r.values[x.size() - 2], 100.0 * 14.0 / 27.0, 1e-9);
}

TEST(Rsi, FlatSeriesIsNeutralAndTooShortThrows) {
    const std::vector<double> flat(30, 7.0);
    for (double v : rsi(flat).values) EXPECT_EQ(v, 50.0);
    const std::vector<double> short_series(14, 1.0);
    EXPECT_THROW(rsi(short_series), Error);
}

TEST(Rsi, BoundedOnRandomWalks) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> z(0.0, 0.03);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x{100.0};
        for (int t = 0; t < 300; ++t) x.push_back(x.back() * std::exp(z(rng)));
        for (double v : rsi(x, 2 + trial % 20).values) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 100.0);
        }
    }
}

}  // namespace
}  // namespace esgport::indicators
