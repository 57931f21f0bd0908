#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace rclab {

/// Exact rational number.
///
/// Values whose numerator and denominator fit into 64 bits are stored inline
/// and handled with 128-bit intermediates; anything larger spills into a GMP
/// `mpq_class`. Results that fit again are demoted, so the fast path is the
/// common case for the small, structured data of lattice problems.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value) : num_(value) {}  // NOLINT(implicit)
  Rational(int value) : num_(value) {}           // NOLINT(implicit)
  Rational(std::int64_t num, std::int64_t den);
  explicit Rational(const mpq_class& value);

  Rational(const Rational& other);
  Rational(Rational&& other) noexcept = default;
  Rational& operator=(const Rational& other);
  Rational& operator=(Rational&& other) noexcept = default;
  ~Rational() = default;

  /// Parses "p", "-p" or "p/q".
  static Rational parse(std::string_view text);

  [[nodiscard]] int sign() const;
  [[nodiscard]] bool is_zero() const { return !big_ && num_ == 0; }
  [[nodiscard]] bool is_integer() const;
  [[nodiscard]] bool is_big() const { return big_ != nullptr; }
  [[nodiscard]] Rational abs() const;
  [[nodiscard]] Rational floor() const;
  [[nodiscard]] Rational ceil() const;
  [[nodiscard]] double to_double() const;
  /// Canonical text form: "p" for integers, "p/q" otherwise.
  [[nodiscard]] std::string str() const;
  [[nodiscard]] mpq_class to_mpq() const;
  /// Integer value; requires is_integer() and 64-bit range.
  [[nodiscard]] std::int64_t to_int64() const;

  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);
  /// this -= a * b, the inner step of every elimination.
  void sub_mul(const Rational& a, const Rational& b);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
  Rational operator-() const;

  friend bool operator==(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  friend std::ostream& operator<<(std::ostream& os, const Rational& value);

 private:
  void set_big(mpq_class value);
  void assign_i128(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::unique_ptr<mpq_class> big_;
};

/// Smallest and largest of two values.
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace rclab
