#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

namespace esgport {

using Date = std::chrono::year_month_day;

/// ISO `YYYY-MM-DD`; throws ParseError.
Date parse_date(std::string_view text);
std::string format_date(Date d);

/// Calendar-month shift; day clamped to the end of the target month (Jan 31 + 1m = Feb 28/29).
Date add_months(Date d, int months);
Date add_days(Date d, int days);

/// `count` consecutive weekdays starting at the first weekday >= start.
std::vector<Date> business_days(Date start, std::size_t count);

}  // namespace esgport
