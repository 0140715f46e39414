#include "zsp/values.h"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace zsp {

namespace {

std::optional<std::int64_t> parseInt(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::int64_t value = 0;
  const char* begin = text.data();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  if (g == 0) g = 1;
  num_ = num / g;
  den_ = den / g;
}

std::optional<Rational> Rational::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parseInt(text.substr(0, slash));
    auto den = parseInt(text.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    return Rational(*num, *den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 12) return std::nullopt;
    for (char ch : frac) {
      if (ch < '0' || ch > '9') return std::nullopt;
    }
    bool negative = !whole.empty() && whole.front() == '-';
    auto w = whole.empty() || whole == "-" ? std::optional<std::int64_t>(0)
                                           : parseInt(whole);
    auto f = parseInt(frac);
    if (!w || !f) return std::nullopt;
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    std::int64_t magnitude = (*w < 0 ? -*w : *w) * scale + *f;
    return Rational(negative ? -magnitude : magnitude, scale);
  }
  auto value = parseInt(text);
  if (!value) return std::nullopt;
  return Rational(*value);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

std::optional<Date> Date::parse(std::string_view text) {
  Date date;
  std::size_t first = text.find('-', 1);
  auto year = parseInt(text.substr(0, first));
  if (!year) return std::nullopt;
  date.year = static_cast<int>(*year);
  if (first == std::string_view::npos) return date;
  std::string_view rest = text.substr(first + 1);
  std::size_t second = rest.find('-');
  auto month = parseInt(rest.substr(0, second));
  if (!month || *month < 1 || *month > 12) return std::nullopt;
  date.month = static_cast<int>(*month);
  if (second == std::string_view::npos) return date;
  auto day = parseInt(rest.substr(second + 1));
  if (!day || *day < 1 || *day > 31) return std::nullopt;
  date.day = static_cast<int>(*day);
  return date;
}

std::string Date::str() const {
  auto two = [](int v) {
    return v < 10 ? "0" + std::to_string(v) : std::to_string(v);
  };
  std::string out = std::to_string(year);
  if (month) out += "-" + two(month);
  if (day) out += "-" + two(day);
  return out;
}

std::string Date::display() const {
  std::string out;
  if (day) out += std::to_string(day) + "_";
  if (month) out += std::to_string(month) + "_";
  return out + std::to_string(year);
}

}  // namespace zsp
