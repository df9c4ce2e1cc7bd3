// clock.hpp
//
// UTC instants as unix seconds plus ISO 8601 parsing/formatting. All
// pipeline timestamps flow through TimeSource so --fixed-time can freeze
// them for reproducible outputs.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace vpnscan {

using UnixSeconds = int64_t;

std::string format_iso8601(UnixSeconds t);
std::optional<UnixSeconds> parse_iso8601(std::string_view s);   // YYYY-MM-DDTHH:MM:SS[Z]
std::optional<UnixSeconds> parse_utc_date(std::string_view s);  // YYYY-MM-DD -> midnight UTC

UnixSeconds wallclock_now();

class TimeSource {
public:
    TimeSource() : fn_(wallclock_now) {}
    static TimeSource fixed(UnixSeconds t) {
        TimeSource ts;
        ts.fn_ = [t] { return t; };
        return ts;
    }
    UnixSeconds now() const { return fn_(); }

private:
    std::function<UnixSeconds()> fn_;
};

}  // namespace vpnscan
