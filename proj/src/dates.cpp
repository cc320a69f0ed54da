#include "esgport/dates.hpp"

#include "esgport/errors.hpp"

#include <cstdio>

namespace esgport {

using namespace std::chrono;

Date parse_date(std::string_view text) {
    int y = 0;
    unsigned m = 0, d = 0;
    const std::string s(text);
    char tail = 0;
    if (s.size() != 10 || std::sscanf(s.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) {
        throw Error(ErrorCode::ParseError, "bad date '" + s + "' (expected YYYY-MM-DD)");
    }
    Date out{year{y}, month{m}, day{d}};
    if (!out.ok()) throw Error(ErrorCode::ParseError, "invalid calendar date '" + s + "'");
    return out;
}

std::string format_date(Date d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

Date add_months(Date d, int months_delta) {
    const year_month ym = year_month{d.year(), d.month()} + months{months_delta};
    const day last = year_month_day_last{ym.year(), month_day_last{ym.month()}}.day();
    return Date{ym.year(), ym.month(), d.day() > last ? last : d.day()};
}

Date add_days(Date d, int n) { return Date{sys_days{d} + days{n}}; }

std::vector<Date> business_days(Date start, std::size_t count) {
    std::vector<Date> out;
    out.reserve(count);
    sys_days cur{start};
    while (out.size() < count) {
        const weekday wd{cur};
        if (wd != Saturday && wd != Sunday) out.emplace_back(cur);
        cur += days{1};
    }
    return out;
}

}  // namespace esgport
