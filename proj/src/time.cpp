#include "rcplan/time.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "rcplan/error.hpp"

namespace rcplan {
namespace {

bool parse_int(std::string_view text, int& out) {
  if (text.empty()) return false;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

std::optional<LocalTime> parse_timestamp(std::string_view text) {
  // YYYY-MM-DDTHH:MM
  if (text.size() != 16 || text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':') {
    return std::nullopt;
  }
  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), mo) ||
      !parse_int(text.substr(8, 2), d) || !parse_int(text.substr(11, 2), h) ||
      !parse_int(text.substr(14, 2), mi)) {
    return std::nullopt;
  }
  using namespace std::chrono;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59) return std::nullopt;
  return LocalTime{local_days{ymd}} + hours{h} + minutes{mi};
}

std::string format_timestamp(LocalTime t) {
  using namespace std::chrono;
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const auto rem = duration_cast<minutes>(t - day).count();
  return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                     rem / 60, rem % 60);
}

int parse_clock(std::string_view text) {
  int h = 0, m = 0;
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon > 2 || text.size() - colon != 3 ||
      !parse_int(text.substr(0, colon), h) || !parse_int(text.substr(colon + 1), m) || m > 59 ||
      h > 24 || (h == 24 && m != 0)) {
    throw ConfigError(fmt::format("malformed clock time '{}', expected HH:MM", text));
  }
  return h * 60 + m;
}

std::string format_clock(double minutes) {
  const int total = static_cast<int>(std::floor(minutes));
  return fmt::format("{:02d}:{:02d}", total / 60, total % 60);
}

int minute_of_day(LocalTime t) {
  return static_cast<int>((t - midnight_of(t)).count());
}

std::chrono::weekday weekday_of(LocalTime t) {
  return std::chrono::weekday{std::chrono::floor<std::chrono::days>(t)};
}

LocalTime midnight_of(LocalTime t) {
  return LocalTime{std::chrono::floor<std::chrono::days>(t)};
}

}  // namespace rcplan
