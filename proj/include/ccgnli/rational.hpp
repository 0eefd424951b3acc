#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "ccgnli/util.hpp"

namespace ccgnli {

// Exact rational arithmetic. Magnitudes in this domain are tiny (numerals up
// to a few hundred, coefficients in small sweeps), so int64 components are
// ample.
class Rational {
public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}
  Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

  long long num() const { return num_; }
  long long den() const { return den_; }

  bool is_integer() const { return den_ == 1; }

  Rational operator+(const Rational& o) const {
    return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  Rational operator-(const Rational& o) const {
    return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  }
  Rational operator-() const { return Rational(-num_, den_); }
  Rational operator*(const Rational& o) const {
    return Rational(num_ * o.num_, den_ * o.den_);
  }

  bool operator==(const Rational& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const {
    return num_ * o.den_ < o.num_ * den_;
  }
  bool operator<=(const Rational& o) const {
    return num_ * o.den_ <= o.num_ * den_;
  }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return o <= *this; }

  // Largest integer <= value.
  long long floor() const {
    long long q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }
  long long ceil() const {
    long long q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return q;
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  // Accepts "7", "-3", "7/2".
  static Rational parse(const std::string& s) {
    size_t slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(std::stoll(s));
      return Rational(std::stoll(s.substr(0, slash)),
                      std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
      throw ParseError("bad rational literal: " + s);
    }
  }

private:
  void normalize() {
    if (den_ == 0) throw ParseError("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  long long num_, den_;
};

}  // namespace ccgnli
