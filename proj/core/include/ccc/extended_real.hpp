#pragma once

#include <compare>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace ccc {

/// Nonnegative real extended by +infinity. Infinity is an explicit flag, so no
/// operation on this type ever produces NaN.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : value_(v) {  // NOLINT(google-explicit-constructor)
    if (!(v >= 0.0) || v == std::numeric_limits<double>::infinity()) {
      throw std::invalid_argument("ExtendedReal: value must be finite and nonnegative");
    }
  }

  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  [[nodiscard]] constexpr bool is_finite() const { return !infinite_; }
  [[nodiscard]] constexpr bool is_infinite() const { return infinite_; }

  /// Finite value; throws for infinity.
  [[nodiscard]] double value() const {
    if (infinite_) throw std::domain_error("ExtendedReal: value() of infinity");
    return value_;
  }

  /// IEEE view: +inf for infinity.
  [[nodiscard]] constexpr double to_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  /// Scaling by a nonnegative factor; infinity absorbs every factor.
  [[nodiscard]] ExtendedReal scaled(double factor) const {
    if (!(factor >= 0.0)) throw std::invalid_argument("ExtendedReal: negative scale");
    if (infinite_) return infinity();
    return ExtendedReal(value_ * factor);
  }

  friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend constexpr std::partial_ordering operator<=>(const ExtendedReal& a,
                                                     const ExtendedReal& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.value_ <=> b.value_;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtendedReal& r) {
    if (r.infinite_) return os << "inf";
    return os << r.value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

[[nodiscard]] inline ExtendedReal max(const ExtendedReal& a, const ExtendedReal& b) {
  return a < b ? b : a;
}

}  // namespace ccc
