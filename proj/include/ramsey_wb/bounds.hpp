#pragma once

#include <cmath>
#include <compare>
#include <cstdio>
#include <optional>
#include <string>

#include "ramsey_wb/rational.hpp"

namespace ramsey_wb {

// A positive real exp2^level(top) kept in level-index form: level 0 is the
// plain double `top`; each level applies x -> 2^x once more. Normalized so
// that level >= 1 implies 1000 < top <= 1e300.
struct LevelReal {
  int level = 0;
  double top = 1;

  static LevelReal normalize(LevelReal x) {
    while (x.top > 1e300) {
      x.top = std::log2(x.top);
      ++x.level;
    }
    while (x.level >= 1 && x.top <= 1000) {
      x.top = std::exp2(x.top);
      --x.level;
    }
    return x;
  }

  friend std::partial_ordering operator<=>(const LevelReal& a, const LevelReal& b) {
    if (a.level != b.level) return a.level <=> b.level;
    return a.top <=> b.top;
  }
  friend bool operator==(const LevelReal&, const LevelReal&) = default;
};

inline LevelReal lr_log2(LevelReal x) {
  if (x.level >= 1) return LevelReal::normalize({x.level - 1, x.top});
  return {0, std::log2(x.top)};
}

inline LevelReal lr_exp2(LevelReal x) { return LevelReal::normalize({x.level + 1, x.top}); }

inline LevelReal lr_add(LevelReal x, LevelReal y) {
  if (x < y) std::swap(x, y);
  if (x.level == 0) return LevelReal::normalize({0, x.top + y.top});
  if (x.level == 1 && y.level == 1) return LevelReal::normalize({1, x.top + std::log2(1 + std::exp2(y.top - x.top))});
  return x;
}

inline LevelReal lr_mul(LevelReal x, LevelReal y) {
  if (x.level == 0 && y.level == 0 && std::log2(x.top) + std::log2(y.top) < 1000) return {0, x.top * y.top};
  return lr_exp2(lr_add(lr_log2(x), lr_log2(y)));
}

// Nonnegative integer that stays exact while it has at most kExactBits bits
// and degrades to a LevelReal estimate beyond that. `beyond` marks values
// whose tower height itself is not representable.
class BoundValue {
 public:
  static constexpr unsigned kExactBits = 1U << 16;

  BoundValue() : exact_(BigInt(0)) {}
  BoundValue(BigInt v) : exact_(std::move(v)) {}  // NOLINT(implicit)
  BoundValue(long long v) : exact_(BigInt(v)) {}  // NOLINT(implicit)

  static BoundValue approx(LevelReal r) {
    BoundValue b;
    b.exact_.reset();
    b.approx_ = LevelReal::normalize(r);
    return b;
  }
  static BoundValue beyond() {
    BoundValue b;
    b.exact_.reset();
    b.beyond_ = true;
    return b;
  }

  bool is_exact() const noexcept { return exact_.has_value(); }
  bool is_beyond() const noexcept { return beyond_; }
  const BigInt& exact() const { return *exact_; }

  static unsigned bits(const BigInt& v) { return v == 0 ? 0U : static_cast<unsigned>(boost::multiprecision::msb(v)) + 1; }

  LevelReal real() const {
    if (!exact_) return approx_;
    const BigInt& v = *exact_;
    unsigned b = bits(v);
    if (b <= 1000) return {0, v.convert_to<double>()};
    unsigned shift = b - 53;
    double mant = BigInt(v >> shift).convert_to<double>();
    return LevelReal::normalize({1, static_cast<double>(shift) + std::log2(mant)});
  }

  friend BoundValue operator+(const BoundValue& x, const BoundValue& y) {
    if (x.beyond_ || y.beyond_) return beyond();
    if (x.exact_ && y.exact_ && std::max(bits(*x.exact_), bits(*y.exact_)) < kExactBits)
      return BoundValue(BigInt(*x.exact_ + *y.exact_));
    return approx(lr_add(x.real(), y.real()));
  }

  friend BoundValue operator*(const BoundValue& x, const BoundValue& y) {
    if (x.beyond_ || y.beyond_) return beyond();
    if (x.exact_ && y.exact_ && bits(*x.exact_) + bits(*y.exact_) <= kExactBits)
      return BoundValue(BigInt(*x.exact_ * *y.exact_));
    return approx(lr_mul(x.real(), y.real()));
  }

  // base^exp for base >= 2.
  static BoundValue pow(const BoundValue& base, const BoundValue& exp) {
    if (base.beyond_ || exp.beyond_) return beyond();
    if (base.exact_ && exp.exact_ && *exp.exact_ <= BigInt(kExactBits)) {
      auto e = exp.exact_->convert_to<unsigned>();
      if (static_cast<unsigned long long>(bits(*base.exact_)) * e <= kExactBits)
        return BoundValue(BigInt(boost::multiprecision::pow(*base.exact_, e)));
    }
    return approx(lr_exp2(lr_mul(exp.real(), lr_log2(base.real()))));
  }

  friend std::partial_ordering operator<=>(const BoundValue& x, const BoundValue& y) {
    if (x.beyond_ || y.beyond_) {
      if (x.beyond_ && y.beyond_) return std::partial_ordering::unordered;
      return x.beyond_ ? std::partial_ordering::greater : std::partial_ordering::less;
    }
    if (x.exact_ && y.exact_) {
      if (*x.exact_ < *y.exact_) return std::partial_ordering::less;
      if (*x.exact_ > *y.exact_) return std::partial_ordering::greater;
      return std::partial_ordering::equivalent;
    }
    return x.real() <=> y.real();
  }
  friend bool operator==(const BoundValue& x, const BoundValue& y) { return (x <=> y) == 0; }

  // Exact decimal (abbreviated past 40 digits) or a tower expression such as
  // 2^2^(1.23e+04).
  std::string to_string() const {
    if (beyond_) return "beyond representable tower height";
    if (exact_) {
      std::string s = exact_->str();
      if (s.size() <= 40) return s;
      return s.substr(0, 12) + "..." + s.substr(s.size() - 6) + " (" + std::to_string(s.size()) + " digits)";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", approx_.top);
    std::string s = "(" + std::string(buf) + ")";
    for (int i = 0; i < approx_.level; ++i) s = "2^" + s;
    return "~" + s;
  }

 private:
  std::optional<BigInt> exact_;
  LevelReal approx_{};
  bool beyond_ = false;
};

}  // namespace ramsey_wb
