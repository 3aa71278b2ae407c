#include "mcroute/cost.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace mcroute {

std::string CostVector::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < dims_; ++i) {
    if (i) out += ',';
    if (values_[i] == kInfinity) {
      out += "inf";
      continue;
    }
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, values_[i]);
    out.append(buf, res.ptr);
  }
  out += ')';
  return out;
}

bool dominates(const CostVector &a, const CostVector &b) {
  if (a.dims() != b.dims())
    throw std::invalid_argument("dominates: dimension mismatch " + std::to_string(a.dims()) +
                                " vs " + std::to_string(b.dims()));
  return dominates_unchecked(a, b);
}

double euclidean_distance(const CostVector &a, const CostVector &b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dims(); ++i) {
    double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

} // namespace mcroute
