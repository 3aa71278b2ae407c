#ifndef MCROUTE_SCORE_HPP
#define MCROUTE_SCORE_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mcroute/cost.hpp"

namespace mcroute {

/// Monotone map from a path cost vector to a scalar score.
///
/// Built-ins:
///   sum             w1 + ... + wd                      (linear)
///   weighted:a,b,.. a*w1 + b*w2 + ...,  all weights > 0 (linear)
///   sum_sq          sum of wi^2
///   sum_cube        sum of wi^3
///   pow:q           sum of wi^q, q >= 1 (linear for q = 1)
/// Anything else is parsed as an expression over w1..wd with + - * / ^,
/// parentheses, numbers and sqrt, exp, log, abs, min, max.
class ScoreFunction {
public:
  enum class Kind { Weighted, PowerSum, Expression };

  /// One instruction of a compiled expression (postfix).
  struct Op {
    enum Code : std::uint8_t { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Sqrt, Exp, Log, Abs, Min, Max } code;
    double value = 0.0; // constant, or variable index
  };

  std::size_t dims() const noexcept { return dims_; }
  bool linear() const noexcept { return kind_ == Kind::Weighted; }
  Kind kind() const noexcept { return kind_; }
  const std::string &name() const noexcept { return name_; }
  /// Per-dimension weights of a linear function.
  const std::vector<double> &weights() const noexcept { return weights_; }

  double operator()(const CostVector &c) const noexcept { return evaluate(c.values().data()); }
  double evaluate(const double *w) const noexcept {
    double s = 0.0;
    switch (kind_) {
    case Kind::Weighted:
      for (std::size_t i = 0; i < dims_; ++i) s += weights_[i] * w[i];
      return s;
    case Kind::PowerSum:
      if (int_exponent_ == 2) {
        for (std::size_t i = 0; i < dims_; ++i) s += w[i] * w[i];
        return s;
      }
      return power_sum(w);
    case Kind::Expression:
      break;
    }
    return run_program(w);
  }

private:
  double power_sum(const double *w) const noexcept;
  double run_program(const double *w) const noexcept;

  friend ScoreFunction register_score_function(const std::string &spec, std::size_t dims);
  friend ScoreFunction make_unchecked_score_function(const std::string &spec, std::size_t dims);

  Kind kind_ = Kind::Weighted;
  std::size_t dims_ = 0;
  std::string name_;
  std::vector<double> weights_;
  double exponent_ = 1.0;
  int int_exponent_ = 0; // > 0 when the exponent is a small integer
  std::vector<Op> program_;
};

/// Parses `spec`, then runs 1000 seeded dominance probes (a < b must give
/// f(a) < f(b)) and, for linear functions, additivity probes. Throws
/// ScoreFunctionError on a parse error or a failed probe.
ScoreFunction register_score_function(const std::string &spec, std::size_t dims);

/// Parsing only, no probes. For tests of the probes themselves.
ScoreFunction make_unchecked_score_function(const std::string &spec, std::size_t dims);

/// First failing probe as a message, empty when all pass.
std::string probe_score_function(const ScoreFunction &f, std::size_t probes = 1000, std::uint64_t seed = 1);

} // namespace mcroute

#endif // MCROUTE_SCORE_HPP
