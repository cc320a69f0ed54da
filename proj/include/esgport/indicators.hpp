#pragma once

#include <span>
#include <vector>

namespace esgport::indicators {

/// Indicator values aligned with the input prices. Entries before
/// `first_warm` are computed but not yet fully warmed up.
struct Series {
    std::vector<double> values;
    std::size_t first_warm = 0;

    bool warm(std::size_t i) const noexcept { return i >= first_warm; }
};

inline constexpr std::size_t kMacdFast = 12;
inline constexpr std::size_t kMacdSlow = 26;
inline constexpr std::size_t kRsiPeriod = 14;

/// Exponential moving average, smoothing 2/(span+1), seeded with the first value.
std::vector<double> ema(std::span<const double> x, std::size_t span);

/// EMA(12) - EMA(26). Throws SeriesTooShort below 26 observations.
Series macd(std::span<const double> closes);

/// Wilder RSI. Seed averages are the simple means of the first `period` moves.
/// Warm-up entries hold 50. Throws SeriesTooShort below period + 1 observations.
Series rsi(std::span<const double> closes, std::size_t period = kRsiPeriod);

}  // namespace esgport::indicators
