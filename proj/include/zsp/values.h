#ifndef ZSP_VALUES_H_
#define ZSP_VALUES_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace zsp {

// Exact rational number, always normalized (den > 0, gcd(num, den) == 1).
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);  // NOLINT

  // Accepts "3", "-7", "3/2" and decimal "1.25".
  static std::optional<Rational> parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double toDouble() const { return static_cast<double>(num_) / den_; }

  // Canonical text: "3", "-3/2".
  std::string str() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Calendar date with optional month and day (0 = absent). Ordering is
// lexicographic on (year, month, day) with absent parts sorting first.
struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  // Accepts "2018", "2018-06", "2018-06-01".
  static std::optional<Date> parse(std::string_view text);

  // Canonical text, inverse of parse().
  std::string str() const;
  // Display form used in lambda-DCS rendering: day_month_year, e.g. 1_6_2018.
  std::string display() const;

  friend auto operator<=>(const Date&, const Date&) = default;
};

}  // namespace zsp

#endif  // ZSP_VALUES_H_
