#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "polydens/error.hpp"

namespace polydens {

// Exact rational with 64-bit numerator/denominator. Products are formed in
// 128 bits and reduced before narrowing; anything that still does not fit
// throws Overflow.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  bool is_integer() const noexcept { return den_ == 1; }

  // Accepts "p", "p/q", or a terminating decimal such as "0.25".
  static Rational parse(const std::string& text);

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error(ErrorKind::InvalidArgument, "rational division by zero");
    return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  Rational operator-() const { return from_wide(-static_cast<__int128>(num_), den_); }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const Rational& a, const Rational& b) noexcept {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) noexcept { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) noexcept { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) noexcept { return !(a < b); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  static Rational from_wide(__int128 n, __int128 d);
  void assign(std::int64_t n, std::int64_t d) { *this = from_wide(n, d); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational Rational::from_wide(__int128 n, __int128 d) {
  if (d == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 a = n < 0 ? -n : n;
  __int128 b = d;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    n /= a;
    d /= a;
  }
  constexpr __int128 lim = INT64_MAX;
  if (n > lim || n < -lim || d > lim) throw Error(ErrorKind::Overflow, "rational out of 64-bit range");
  Rational r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

inline Rational Rational::parse(const std::string& text) {
  auto bad = [&] { return Error(ErrorKind::InvalidArgument, "not a rational: '" + text + "'"); };
  if (text.empty()) throw bad();
  std::size_t pos = 0;
  try {
    if (auto slash = text.find('/'); slash != std::string::npos) {
      std::int64_t n = std::stoll(text.substr(0, slash), &pos);
      if (pos != slash) throw bad();
      std::string rest = text.substr(slash + 1);
      std::int64_t d = std::stoll(rest, &pos);
      if (pos != rest.size()) throw bad();
      return {n, d};
    }
    if (auto dot = text.find('.'); dot != std::string::npos) {
      std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      std::int64_t n = std::stoll(digits, &pos);
      if (pos != digits.size()) throw bad();
      std::int64_t d = 1;
      for (std::size_t i = dot + 1; i < text.size(); ++i) {
        if (d > INT64_MAX / 10) throw bad();
        d *= 10;
      }
      return {n, d};
    }
    std::int64_t n = std::stoll(text, &pos);
    if (pos != text.size()) throw bad();
    return {n};
  } catch (const std::logic_error&) {
    throw bad();
  }
}

}  // namespace polydens
