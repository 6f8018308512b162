#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cpb {

/// Nonnegative real stored as log(value). Expected hitting times grow like
/// exp(c*N), so sums and products of them stay in log space until output.
/// Zero is represented by log value -infinity.
class LogNumber {
 public:
  constexpr LogNumber() : log_(-std::numeric_limits<double>::infinity()) {}

  static LogNumber from_log(double lg) {
    LogNumber x;
    x.log_ = lg;
    return x;
  }

  static LogNumber from_value(double v) {
    if (!(v >= 0.0)) throw std::invalid_argument("LogNumber: value must be nonnegative");
    return from_log(v == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(v));
  }

  static LogNumber zero() { return LogNumber(); }
  static LogNumber one() { return from_log(0.0); }

  double log() const { return log_; }
  /// May overflow to +inf for large log values.
  double value() const { return std::exp(log_); }
  bool is_zero() const { return std::isinf(log_) && log_ < 0; }

  LogNumber& operator+=(LogNumber o) {
    log_ = log_add(log_, o.log_);
    return *this;
  }
  LogNumber& operator*=(LogNumber o) {
    if (is_zero() || o.is_zero())
      log_ = -std::numeric_limits<double>::infinity();
    else
      log_ += o.log_;
    return *this;
  }
  LogNumber& operator/=(LogNumber o) {
    if (o.is_zero()) throw std::domain_error("LogNumber: division by zero");
    if (!is_zero()) log_ -= o.log_;
    return *this;
  }

  friend LogNumber operator+(LogNumber a, LogNumber b) { return a += b; }
  friend LogNumber operator*(LogNumber a, LogNumber b) { return a *= b; }
  friend LogNumber operator/(LogNumber a, LogNumber b) { return a /= b; }

  friend bool operator==(LogNumber a, LogNumber b) { return a.log_ == b.log_; }
  friend bool operator!=(LogNumber a, LogNumber b) { return a.log_ != b.log_; }
  friend bool operator<(LogNumber a, LogNumber b) { return a.log_ < b.log_; }
  friend bool operator<=(LogNumber a, LogNumber b) { return a.log_ <= b.log_; }
  friend bool operator>(LogNumber a, LogNumber b) { return a.log_ > b.log_; }
  friend bool operator>=(LogNumber a, LogNumber b) { return a.log_ >= b.log_; }

  /// log(e^a + e^b), tolerant of -inf arguments.
  static double log_add(double a, double b) {
    if (std::isinf(a) && a < 0) return b;
    if (std::isinf(b) && b < 0) return a;
    double hi = a > b ? a : b;
    double lo = a > b ? b : a;
    return hi + std::log1p(std::exp(lo - hi));
  }

 private:
  double log_;
};

}  // namespace cpb
