#include "mcroute/score.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include "mcroute/error.hpp"

namespace mcroute {

double ScoreFunction::power_sum(const double *w) const noexcept {
  double s = 0.0;
  if (int_exponent_ > 0) {
    for (std::size_t i = 0; i < dims_; ++i) {
      double t = w[i];
      for (int k = 1; k < int_exponent_; ++k) t *= w[i];
      s += t;
    }
  } else {
    for (std::size_t i = 0; i < dims_; ++i) s += std::pow(w[i], exponent_);
  }
  return s;
}

double ScoreFunction::run_program(const double *w) const noexcept {
  double stack[64];
  int top = -1;
  for (const Op &op : program_) {
    switch (op.code) {
    case Op::Const: stack[++top] = op.value; break;
    case Op::Var: stack[++top] = w[static_cast<std::size_t>(op.value)]; break;
    case Op::Add: --top; stack[top] += stack[top + 1]; break;
    case Op::Sub: --top; stack[top] -= stack[top + 1]; break;
    case Op::Mul: --top; stack[top] *= stack[top + 1]; break;
    case Op::Div: --top; stack[top] /= stack[top + 1]; break;
    case Op::Pow: --top; stack[top] = std::pow(stack[top], stack[top + 1]); break;
    case Op::Min: --top; stack[top] = std::min(stack[top], stack[top + 1]); break;
    case Op::Max: --top; stack[top] = std::max(stack[top], stack[top + 1]); break;
    case Op::Neg: stack[top] = -stack[top]; break;
    case Op::Sqrt: stack[top] = std::sqrt(stack[top]); break;
    case Op::Exp: stack[top] = std::exp(stack[top]); break;
    case Op::Log: stack[top] = std::log(stack[top]); break;
    case Op::Abs: stack[top] = std::fabs(stack[top]); break;
    }
  }
  return stack[0];
}

namespace {

double parse_number(std::string_view text, const std::string &spec) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size())
    throw ScoreFunctionError("bad number '" + std::string(text) + "' in score function '" + spec + "'");
  return v;
}

// Recursive descent, emitting postfix code.
template <typename OpT>
class ExpressionParser {
public:
  ExpressionParser(const std::string &text, std::size_t dims) : text_(text), dims_(dims) {}

  std::vector<OpT> parse() {
    expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    if (max_depth_ > 60) fail("expression too deep");
    return std::move(out_);
  }

private:
  using Code = typename OpT::Code;

  [[noreturn]] void fail(const std::string &what) const {
    throw ScoreFunctionError("score function '" + text_ + "': " + what + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void emit(Code code, double value = 0.0) {
    out_.push_back(OpT{code, value});
    switch (code) {
    case OpT::Const:
    case OpT::Var: ++depth_; break;
    case OpT::Neg:
    case OpT::Sqrt:
    case OpT::Exp:
    case OpT::Log:
    case OpT::Abs: break;
    default: --depth_; break;
    }
    max_depth_ = std::max(max_depth_, depth_);
  }

  void expr() {
    term();
    for (;;) {
      if (eat('+')) {
        term();
        emit(OpT::Add);
      } else if (eat('-')) {
        term();
        emit(OpT::Sub);
      } else {
        return;
      }
    }
  }
  void term() {
    unary();
    for (;;) {
      if (eat('*')) {
        unary();
        emit(OpT::Mul);
      } else if (eat('/')) {
        unary();
        emit(OpT::Div);
      } else {
        return;
      }
    }
  }
  void unary() {
    if (eat('-')) {
      unary();
      emit(OpT::Neg);
      return;
    }
    if (eat('+')) return unary();
    power();
  }
  void power() {
    primary();
    if (eat('^')) {
      unary();
      emit(OpT::Pow);
    }
  }
  void primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end");
    const char c = text_[pos_];
    if (eat('(')) {
      expr();
      if (!eat(')')) fail("expected ')'");
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
              ((text_[pos_] == 'e' || text_[pos_] == 'E') && pos_ + 1 < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) || text_[pos_ + 1] == '-' ||
                text_[pos_ + 1] == '+')) ||
              ((text_[pos_] == '-' || text_[pos_] == '+') && (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))))
        ++pos_;
      emit(OpT::Const, parse_number(std::string_view(text_).substr(start, pos_ - start), text_));
      return;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail("unexpected '" + std::string(1, c) + "'");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string word = text_.substr(start, pos_ - start);
    if (word.size() > 1 && word[0] == 'w' && word.find_first_not_of("0123456789", 1) == std::string::npos) {
      const auto index = std::stoul(word.substr(1));
      if (index < 1 || index > dims_)
        fail("variable " + word + " outside w1..w" + std::to_string(dims_));
      emit(OpT::Var, static_cast<double>(index - 1));
      return;
    }
    struct Fn {
      const char *name;
      Code code;
      int arity;
    };
    static const Fn functions[] = {{"sqrt", OpT::Sqrt, 1}, {"exp", OpT::Exp, 1}, {"log", OpT::Log, 1},
                                   {"abs", OpT::Abs, 1},   {"min", OpT::Min, 2}, {"max", OpT::Max, 2}};
    for (const auto &fn : functions) {
      if (word != fn.name) continue;
      if (!eat('(')) fail("expected '(' after " + word);
      expr();
      for (int a = 1; a < fn.arity; ++a) {
        if (!eat(',')) fail(word + " takes " + std::to_string(fn.arity) + " arguments");
        expr();
      }
      if (!eat(')')) fail("expected ')'");
      emit(fn.code);
      return;
    }
    fail("unknown name '" + word + "'");
  }

  std::string text_;
  std::size_t dims_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  int max_depth_ = 0;
  std::vector<OpT> out_;
};

std::vector<double> parse_weights(const std::string &list, std::size_t dims, const std::string &spec) {
  std::vector<double> weights;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) weights.push_back(parse_number(item, spec));
  if (weights.size() != dims)
    throw ScoreFunctionError("score function '" + spec + "' has " + std::to_string(weights.size()) +
                             " weights for " + std::to_string(dims) + " dimensions");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w))
      throw ScoreFunctionError("score function '" + spec + "': weights must be positive and finite");
  return weights;
}

} // namespace

ScoreFunction make_unchecked_score_function(const std::string &spec, std::size_t dims) {
  if (dims == 0 || dims > kMaxDims)
    throw ScoreFunctionError("score function dimensionality must be in 1.." + std::to_string(kMaxDims));
  ScoreFunction f;
  f.dims_ = dims;
  f.name_ = spec;
  auto set_power = [&](double q) {
    if (!(q >= 1.0) || !std::isfinite(q)) throw ScoreFunctionError("score function '" + spec + "': exponent must be >= 1");
    if (q == 1.0) {
      f.kind_ = ScoreFunction::Kind::Weighted;
      f.weights_.assign(dims, 1.0);
      return;
    }
    f.kind_ = ScoreFunction::Kind::PowerSum;
    f.exponent_ = q;
    if (q == std::floor(q) && q <= 16) f.int_exponent_ = static_cast<int>(q);
  };
  if (spec == "sum") {
    set_power(1.0);
  } else if (spec == "sum_sq") {
    set_power(2.0);
  } else if (spec == "sum_cube") {
    set_power(3.0);
  } else if (spec.rfind("pow:", 0) == 0) {
    set_power(parse_number(spec.substr(4), spec));
  } else if (spec.rfind("weighted:", 0) == 0) {
    f.kind_ = ScoreFunction::Kind::Weighted;
    f.weights_ = parse_weights(spec.substr(9), dims, spec);
  } else {
    f.kind_ = ScoreFunction::Kind::Expression;
    f.program_ = ExpressionParser<ScoreFunction::Op>(spec, dims).parse();
  }
  return f;
}

std::string probe_score_function(const ScoreFunction &f, std::size_t probes, std::uint64_t seed) {
  const std::size_t d = f.dims();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> base(0, 100), step(0, 10), pick(0, static_cast<int>(d) - 1);
  for (std::size_t i = 0; i < probes; ++i) {
    CostVector a(d), b(d);
    for (std::size_t x = 0; x < d; ++x) {
      a[x] = base(rng);
      b[x] = a[x] + step(rng);
    }
    const auto forced = static_cast<std::size_t>(pick(rng));
    if (b[forced] == a[forced]) b[forced] += 1 + step(rng) % 10;
    const double fa = f(a), fb = f(b);
    if (!std::isfinite(fa) || !std::isfinite(fb))
      return "non-finite score at " + a.to_string() + " or " + b.to_string();
    if (!(fa < fb))
      return "not monotone increasing: f" + a.to_string() + " = " + std::to_string(fa) + " but f" +
             b.to_string() + " = " + std::to_string(fb);
    if (f.linear()) {
      const double sum = f(a + b), parts = fa + fb;
      if (std::fabs(sum - parts) > 1e-9 * std::max(1.0, std::fabs(parts)))
        return "declared linear but f(a+b) != f(a)+f(b) at " + a.to_string() + ", " + b.to_string();
    }
  }
  return {};
}

ScoreFunction register_score_function(const std::string &spec, std::size_t dims) {
  ScoreFunction f = make_unchecked_score_function(spec, dims);
  if (auto failure = probe_score_function(f); !failure.empty())
    throw ScoreFunctionError("score function '" + spec + "' rejected: " + failure);
  return f;
}

} // namespace mcroute
