#include "rclab/rational.hpp"

#include <cstdlib>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace rclab {
namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

bool fits(i128 v) { return v <= kMax && v >= -kMax; }

u128 abs128(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) {
  if (a == 0) return b;
  if (b == 0) return a;
  const int shift = __builtin_ctzll(a | b);
  a >>= __builtin_ctzll(a);
  do {
    b >>= __builtin_ctzll(b);
    if (a > b) std::swap(a, b);
    b -= a;
  } while (b != 0);
  return a << shift;
}

int ctz128(u128 v) {
  const auto lo = static_cast<std::uint64_t>(v);
  if (lo != 0) return __builtin_ctzll(lo);
  return 64 + __builtin_ctzll(static_cast<std::uint64_t>(v >> 64));
}

u128 gcd128(u128 a, u128 b) {
  if ((a >> 64) == 0 && (b >> 64) == 0) {
    return gcd64(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
  }
  if (a == 0) return b;
  if (b == 0) return a;
  const int shift = ctz128(a | b);
  a >>= ctz128(a);
  do {
    b >>= ctz128(b);
    if (a > b) std::swap(a, b);
    b -= a;
  } while (b != 0);
  return a << shift;
}

mpz_class to_mpz(i128 v) {
  const bool neg = v < 0;
  u128 mag = abs128(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(mag >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(mag)));
  mpz_class out = (hi << 64) + lo;
  return neg ? mpz_class(-out) : out;
}

mpq_class small_to_mpq(std::int64_t num, std::int64_t den) {
  mpq_class q(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
  return q;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  assign_i128(num, den);
}

Rational::Rational(const mpq_class& value) { set_big(value); }

Rational::Rational(const Rational& other) : num_(other.num_), den_(other.den_) {
  if (other.big_) big_ = std::make_unique<mpq_class>(*other.big_);
}

Rational& Rational::operator=(const Rational& other) {
  if (this == &other) return *this;
  num_ = other.num_;
  den_ = other.den_;
  if (other.big_) {
    if (big_) {
      *big_ = *other.big_;
    } else {
      big_ = std::make_unique<mpq_class>(*other.big_);
    }
  } else {
    big_.reset();
  }
  return *this;
}

void Rational::assign_i128(i128 num, i128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) {
    num_ = 0;
    den_ = 1;
    big_.reset();
    return;
  }
  if (den != 1) {
    const u128 g = gcd128(abs128(num), static_cast<u128>(den));
    if (g != 1) {
      num /= static_cast<i128>(g);
      den /= static_cast<i128>(g);
    }
  }
  if (fits(num) && fits(den)) {
    num_ = static_cast<std::int64_t>(num);
    den_ = static_cast<std::int64_t>(den);
    big_.reset();
    return;
  }
  mpq_class q(to_mpz(num), to_mpz(den));
  set_big(std::move(q));
}

void Rational::set_big(mpq_class value) {
  value.canonicalize();
  if (value.get_num().fits_slong_p() && value.get_den().fits_slong_p()) {
    const long n = value.get_num().get_si();
    const long d = value.get_den().get_si();
    if (n >= -kMax && d >= -kMax) {
      num_ = n;
      den_ = d;
      big_.reset();
      return;
    }
  }
  if (big_) {
    *big_ = std::move(value);
  } else {
    big_ = std::make_unique<mpq_class>(std::move(value));
  }
  num_ = 0;
  den_ = 1;
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\n')) s.pop_back();
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  if (s.empty()) throw std::invalid_argument("Rational::parse: empty string");
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    const bool ok = (c >= '0' && c <= '9') || c == '/' || (i == 0 && (c == '-' || c == '+'));
    if (!ok) throw std::invalid_argument("Rational::parse: malformed '" + s + "'");
  }
  if (s.front() == '+') s.erase(s.begin());
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("Rational::parse: malformed '" + s + "'");
  if (q.get_den() == 0) throw std::invalid_argument("Rational::parse: zero denominator");
  return Rational(q);
}

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

bool Rational::is_integer() const {
  if (big_) return big_->get_den() == 1;
  return den_ == 1;
}

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

Rational Rational::floor() const {
  if (big_) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
    return Rational(mpq_class(q));
  }
  if (den_ == 1) return *this;
  std::int64_t q = num_ / den_;
  if (num_ < 0) --q;
  return Rational(q);
}

Rational Rational::ceil() const {
  if (big_) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
    return Rational(mpq_class(q));
  }
  if (den_ == 1) return *this;
  std::int64_t q = num_ / den_;
  if (num_ > 0) ++q;
  return Rational(q);
}

double Rational::to_double() const {
  if (big_) return big_->get_d();
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::str() const {
  if (big_) return big_->get_str();
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  return small_to_mpq(num_, den_);
}

std::int64_t Rational::to_int64() const {
  if (!is_integer() || big_) throw std::range_error("Rational::to_int64: not a small integer");
  return num_;
}

Rational Rational::operator-() const {
  Rational out;
  if (big_) {
    out.set_big(mpq_class(-*big_));
  } else {
    out.num_ = -num_;
    out.den_ = den_;
  }
  return out;
}

Rational& Rational::operator+=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    if (rhs.num_ == 0) return *this;
    if (den_ == rhs.den_) {
      assign_i128(static_cast<i128>(num_) + rhs.num_, den_);
      return *this;
    }
    const std::uint64_t g = gcd64(static_cast<std::uint64_t>(den_), static_cast<std::uint64_t>(rhs.den_));
    if (g == 1) {
      const i128 n = static_cast<i128>(num_) * rhs.den_ + static_cast<i128>(rhs.num_) * den_;
      const i128 d = static_cast<i128>(den_) * rhs.den_;
      if (n == 0) {
        num_ = 0;
        den_ = 1;
      } else if (fits(n) && fits(d)) {
        num_ = static_cast<std::int64_t>(n);
        den_ = static_cast<std::int64_t>(d);
      } else {
        assign_i128(n, d);
      }
      return *this;
    }
    const std::int64_t gi = static_cast<std::int64_t>(g);
    const i128 t = static_cast<i128>(num_) * (rhs.den_ / gi) + static_cast<i128>(rhs.num_) * (den_ / gi);
    const i128 d = static_cast<i128>(den_ / gi) * rhs.den_;
    assign_i128(t, d);
    return *this;
  }
  set_big(to_mpq() + rhs.to_mpq());
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  if (!rhs.big_) {
    if (rhs.num_ == 0) return *this;
    Rational neg;
    neg.num_ = -rhs.num_;
    neg.den_ = rhs.den_;
    return *this += neg;
  }
  set_big(to_mpq() - rhs.to_mpq());
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    if (num_ == 0) return *this;
    if (rhs.num_ == 0) {
      num_ = 0;
      den_ = 1;
      return *this;
    }
    if (den_ == 1 && rhs.den_ == 1) {
      long long p = 0;
      if (!__builtin_mul_overflow(num_, rhs.num_, &p) && p != -kMax - 1) {
        num_ = p;
        return *this;
      }
    }
    const std::int64_t g1 = static_cast<std::int64_t>(
        gcd64(static_cast<std::uint64_t>(num_ < 0 ? -num_ : num_), static_cast<std::uint64_t>(rhs.den_)));
    const std::int64_t g2 = static_cast<std::int64_t>(
        gcd64(static_cast<std::uint64_t>(rhs.num_ < 0 ? -rhs.num_ : rhs.num_), static_cast<std::uint64_t>(den_)));
    const i128 n = static_cast<i128>(num_ / g1) * (rhs.num_ / g2);
    const i128 d = static_cast<i128>(den_ / g2) * (rhs.den_ / g1);
    if (fits(n) && fits(d)) {
      num_ = static_cast<std::int64_t>(n);
      den_ = static_cast<std::int64_t>(d);
    } else {
      set_big(mpq_class(to_mpz(n), to_mpz(d)));
    }
    return *this;
  }
  set_big(to_mpq() * rhs.to_mpq());
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw std::domain_error("Rational: division by zero");
  if (!rhs.big_) {
    Rational inv;
    inv.num_ = rhs.num_ < 0 ? -rhs.den_ : rhs.den_;
    inv.den_ = rhs.num_ < 0 ? -rhs.num_ : rhs.num_;
    return *this *= inv;
  }
  set_big(to_mpq() / rhs.to_mpq());
  return *this;
}

void Rational::sub_mul(const Rational& a, const Rational& b) {
  if (a.is_zero() || b.is_zero()) return;
  if (!big_ && !a.big_ && !b.big_) {
    if (den_ == 1 && a.den_ == 1 && b.den_ == 1) {
      long long p = 0;
      long long r = 0;
      if (!__builtin_mul_overflow(a.num_, b.num_, &p) && !__builtin_sub_overflow(num_, p, &r) && r != -kMax - 1) {
        num_ = r;
        return;
      }
    }
    // a*b reduced, then subtract; both steps stay on the fast path when they fit.
    Rational prod = a;
    prod *= b;
    *this -= prod;
    return;
  }
  set_big(to_mpq() - a.to_mpq() * b.to_mpq());
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical forms differ in storage class
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    if (a.den_ == b.den_) return a.num_ <=> b.num_;
    const i128 l = static_cast<i128>(a.num_) * b.den_;
    const i128 r = static_cast<i128>(b.num_) * a.den_;
    return l <=> r;
  }
  const int c = cmp(a.to_mpq(), b.to_mpq());
  return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::ostream& operator<<(std::ostream& os, const Rational& value) { return os << value.str(); }

}  // namespace rclab
