#include "lieorder/expr.hpp"

#include <algorithm>
#include <cmath>

namespace lieorder {

double eval(const Expr& e, const Binding& binding) {
  switch (e.kind()) {
    case Kind::Constant: return e.value().to_double();
    case Kind::Variable: {
      const auto it = binding.find(e.name());
      if (it == binding.end()) throw MissingBindingError(e.name());
      return it->second;
    }
    case Kind::Negate: return -eval(e.child(), binding);
    case Kind::Sum: {
      double s = 0.0;
      for (const auto& c : e.children()) s += eval(c, binding);
      return s;
    }
    case Kind::Product: {
      double p = 1.0;
      for (const auto& c : e.children()) p *= eval(c, binding);
      return p;
    }
    case Kind::Quotient: {
      const double num = eval(e.child(0), binding);
      const double den = eval(e.child(1), binding);
      if (den == 0.0) throw DivisionByZeroError(to_text(e));
      return num / den;
    }
    case Kind::IntPower: {
      const double b = eval(e.child(), binding);
      double r = 1.0;
      for (int i = 0; i < e.exponent(); ++i) r *= b;
      return r;
    }
    case Kind::Sin: return std::sin(eval(e.child(), binding));
    case Kind::Cos: return std::cos(eval(e.child(), binding));
    case Kind::Exp: return std::exp(eval(e.child(), binding));
  }
  return 0.0;
}

namespace {

void emit(const Expr& e, std::span<const std::string> vars, std::vector<double>& constants,
          std::vector<Expr>& divisors, auto& program) {
  using Instr = std::remove_cvref_t<decltype(program.front())>;
  switch (e.kind()) {
    case Kind::Constant:
      constants.push_back(e.value().to_double());
      program.push_back(Instr{Kind::Constant, static_cast<std::uint32_t>(constants.size() - 1)});
      return;
    case Kind::Variable: {
      const auto it = std::find(vars.begin(), vars.end(), e.name());
      if (it == vars.end()) throw MissingBindingError(e.name());
      program.push_back(Instr{Kind::Variable, static_cast<std::uint32_t>(it - vars.begin())});
      return;
    }
    case Kind::Quotient:
      emit(e.child(0), vars, constants, divisors, program);
      emit(e.child(1), vars, constants, divisors, program);
      divisors.push_back(e);
      program.push_back(Instr{Kind::Quotient, static_cast<std::uint32_t>(divisors.size() - 1)});
      return;
    case Kind::IntPower:
      emit(e.child(), vars, constants, divisors, program);
      program.push_back(Instr{Kind::IntPower, static_cast<std::uint32_t>(e.exponent())});
      return;
    default:
      for (const auto& c : e.children()) emit(c, vars, constants, divisors, program);
      program.push_back(Instr{e.kind(), static_cast<std::uint32_t>(e.children().size())});
      return;
  }
}

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e, std::span<const std::string> vars) {
  emit(e, vars, constants_, divisors_, program_);
}

double CompiledExpr::operator()(std::span<const double> values) const {
  if (program_.empty()) return 0.0;
  thread_local std::vector<double> stack;
  stack.clear();
  for (const Instr& in : program_) {
    switch (in.op) {
      case Kind::Constant: stack.push_back(constants_[in.arg]); break;
      case Kind::Variable: stack.push_back(values[in.arg]); break;
      case Kind::Negate: stack.back() = -stack.back(); break;
      case Kind::Sum: {
        const std::size_t base = stack.size() - in.arg;
        double s = 0.0;
        for (std::size_t i = base; i < stack.size(); ++i) s += stack[i];
        stack.resize(base);
        stack.push_back(s);
        break;
      }
      case Kind::Product: {
        const std::size_t base = stack.size() - in.arg;
        double p = 1.0;
        for (std::size_t i = base; i < stack.size(); ++i) p *= stack[i];
        stack.resize(base);
        stack.push_back(p);
        break;
      }
      case Kind::Quotient: {
        const double den = stack.back();
        stack.pop_back();
        if (den == 0.0) throw DivisionByZeroError(to_text(divisors_[in.arg]));
        stack.back() /= den;
        break;
      }
      case Kind::IntPower: {
        const double b = stack.back();
        double r = 1.0;
        for (std::uint32_t i = 0; i < in.arg; ++i) r *= b;
        stack.back() = r;
        break;
      }
      case Kind::Sin: stack.back() = std::sin(stack.back()); break;
      case Kind::Cos: stack.back() = std::cos(stack.back()); break;
      case Kind::Exp: stack.back() = std::exp(stack.back()); break;
    }
  }
  return stack.back();
}

}  // namespace lieorder
