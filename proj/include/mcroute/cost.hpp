#ifndef MCROUTE_COST_HPP
#define MCROUTE_COST_HPP

#include <algorithm>
#include <array>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>

namespace mcroute {

inline constexpr std::size_t kMaxDims = 8;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Fixed-capacity vector of d non-negative costs. Stored inline so that
/// search labels can be copied without touching the heap.
///
/// Integer-valued inputs stay exact: every sum below 2^53 is representable,
/// and +inf marks "unreachable" and absorbs addition.
class CostVector {
public:
  CostVector() = default;

  explicit CostVector(std::size_t dims, double fill = 0.0) : dims_(static_cast<std::uint8_t>(dims)) {
    assert(dims <= kMaxDims);
    std::fill_n(values_.begin(), dims, fill);
  }

  CostVector(std::initializer_list<double> values) : dims_(static_cast<std::uint8_t>(values.size())) {
    assert(values.size() <= kMaxDims);
    std::copy(values.begin(), values.end(), values_.begin());
  }

  explicit CostVector(std::span<const double> values) : dims_(static_cast<std::uint8_t>(values.size())) {
    assert(values.size() <= kMaxDims);
    std::copy(values.begin(), values.end(), values_.begin());
  }

  static CostVector zero(std::size_t dims) { return CostVector(dims, 0.0); }
  static CostVector infinite(std::size_t dims) { return CostVector(dims, kInfinity); }

  std::size_t dims() const noexcept { return dims_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double &operator[](std::size_t i) noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return {values_.data(), dims_}; }

  bool all_finite() const noexcept {
    for (std::size_t i = 0; i < dims_; ++i)
      if (values_[i] == kInfinity) return false;
    return true;
  }
  bool all_infinite() const noexcept {
    for (std::size_t i = 0; i < dims_; ++i)
      if (values_[i] != kInfinity) return false;
    return true;
  }

  CostVector &operator+=(const CostVector &other) noexcept {
    assert(other.dims_ == dims_);
    for (std::size_t i = 0; i < dims_; ++i) values_[i] += other.values_[i];
    return *this;
  }
  friend CostVector operator+(CostVector a, const CostVector &b) noexcept { return a += b; }

  /// Componentwise minimum, in place.
  void min_with(const CostVector &other) noexcept {
    for (std::size_t i = 0; i < dims_; ++i) values_[i] = std::min(values_[i], other.values_[i]);
  }

  friend bool operator==(const CostVector &a, const CostVector &b) noexcept {
    if (a.dims_ != b.dims_) return false;
    return std::equal(a.values_.begin(), a.values_.begin() + a.dims_, b.values_.begin());
  }

  /// Lexicographic order; used to order label-setting searches.
  friend bool lex_less(const CostVector &a, const CostVector &b) noexcept {
    return std::lexicographical_compare(a.values_.begin(), a.values_.begin() + a.dims_,
                                        b.values_.begin(), b.values_.begin() + b.dims_);
  }

  std::string to_string() const;

private:
  std::array<double, kMaxDims> values_{};
  std::uint8_t dims_ = 0;
};

/// a ≼ b: a_i <= b_i for every component.
inline bool weakly_dominates(const CostVector &a, const CostVector &b) noexcept {
  for (std::size_t i = 0; i < a.dims(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

/// a ≺ b: a ≼ b with at least one strict component. Unchecked dimensions.
inline bool dominates_unchecked(const CostVector &a, const CostVector &b) noexcept {
  bool strict = false;
  for (std::size_t i = 0; i < a.dims(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strict = true;
  }
  return strict;
}

/// a ≺ b. Throws std::invalid_argument on a dimension mismatch.
bool dominates(const CostVector &a, const CostVector &b);

double euclidean_distance(const CostVector &a, const CostVector &b);

} // namespace mcroute

#endif // MCROUTE_COST_HPP
