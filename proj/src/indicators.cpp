#include "esgport/indicators.hpp"

#include "esgport/errors.hpp"

#include <string>

namespace esgport::indicators {

std::vector<double> ema(std::span<const double> x, std::size_t span) {
    std::vector<double> out(x.size());
    if (x.empty()) return out;
    const double k = 2.0 / (static_cast<double>(span) + 1.0);
    out[0] = x[0];
    for (std::size_t i = 1; i < x.size(); ++i) out[i] = out[i - 1] + k * (x[i] - out[i - 1]);
    return out;
}

Series macd(std::span<const double> closes) {
    if (closes.size() < kMacdSlow) {
        throw Error(ErrorCode::SeriesTooShort, "MACD needs " + std::to_string(kMacdSlow) + " prices, got " +
                                                   std::to_string(closes.size()));
    }
    const auto fast = ema(closes, kMacdFast);
    const auto slow = ema(closes, kMacdSlow);
    Series s;
    s.values.resize(closes.size());
    for (std::size_t i = 0; i < closes.size(); ++i) s.values[i] = fast[i] - slow[i];
    s.first_warm = kMacdSlow - 1;
    return s;
}

namespace {

double rsi_value(double avg_gain, double avg_loss) {
    if (avg_loss == 0.0) return avg_gain == 0.0 ? 50.0 : 100.0;
    if (avg_gain == 0.0) return 0.0;
    const double rs = avg_gain / avg_loss;
    return 100.0 - 100.0 / (1.0 + rs);
}

}  // namespace

Series rsi(std::span<const double> closes, std::size_t period) {
    if (period == 0) throw Error(ErrorCode::InvalidArgument, "RSI period must be positive");
    if (closes.size() < period + 1) {
        throw Error(ErrorCode::SeriesTooShort, "RSI needs " + std::to_string(period + 1) + " prices, got " +
                                                   std::to_string(closes.size()));
    }
    Series s;
    s.values.assign(closes.size(), 50.0);
    s.first_warm = period;
    double gain = 0.0, loss = 0.0;
    for (std::size_t i = 1; i <= period; ++i) {
        const double d = closes[i] - closes[i - 1];
        if (d > 0) gain += d; else loss -= d;
    }
    gain /= static_cast<double>(period);
    loss /= static_cast<double>(period);
    s.values[period] = rsi_value(gain, loss);
    const double p = static_cast<double>(period);
    for (std::size_t i = period + 1; i < closes.size(); ++i) {
        const double d = closes[i] - closes[i - 1];
        gain = (gain * (p - 1.0) + (d > 0 ? d : 0.0)) / p;
        loss = (loss * (p - 1.0) + (d < 0 ? -d : 0.0)) / p;
        s.values[i] = rsi_value(gain, loss);
    }
    return s;
}

}  // namespace esgport::indicators
