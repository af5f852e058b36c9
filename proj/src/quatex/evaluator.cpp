#include "smcsweep/quatex/evaluator.hpp"

#include <algorithm>
#include <map>

#include "smcsweep/quatex/printer.hpp"

namespace smcsweep::quatex {
namespace {

using Env = std::map<std::string, Value>;

// A call postponed by '#', with its arguments already evaluated.
struct Deferred {
  const Definition* def;
  std::vector<Value> args;
};

using Outcome = std::variant<Value, Deferred>;

class Interp {
 public:
  Interp(const QueryAst& ast, blackbox::Simulator& sim) : ast_(ast), sim_(sim) {}

  Outcome eval(const Expr& e, const Env& env) {
    return std::visit(
        [&](const auto& node) -> Outcome {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, NumberLit>) {
            return Value{node.value};
          } else if constexpr (std::is_same_v<T, StringLit>) {
            return Value{node.value};
          } else if constexpr (std::is_same_v<T, ParamRef>) {
            auto it = env.find(node.name);
            if (it == env.end()) throw EvalError("unbound name '" + node.name + "'");
            return it->second;
          } else if constexpr (std::is_same_v<T, Rval>) {
            Value name = value_of(node.name.front(), env);
            if (!std::holds_alternative<std::string>(name)) {
              throw EvalError("rval expects an observable name, got a number in '" + print(e) + "'");
            }
            const auto& obs = std::get<std::string>(name);
            if (obs == "steps") return Value{static_cast<double>(sim_.step())};
            return Value{sim_.observe(obs)};
          } else if constexpr (std::is_same_v<T, Compare>) {
            return Value{compare(node, env, e)};
          } else if constexpr (std::is_same_v<T, IfExpr>) {
            Value cond = value_of(node.parts[0], env);
            if (!std::holds_alternative<double>(cond)) throw EvalError("if condition is not numeric: " + print(e));
            return eval(node.parts[std::get<double>(cond) != 0.0 ? 1 : 2], env);
          } else if constexpr (std::is_same_v<T, Call>) {
            const Definition* def = ast_.find(node.callee);
            return invoke(*def, evaluate_args(node, env));
          } else {
            static_assert(std::is_same_v<T, Next>);
            return Deferred{ast_.find(node.call.callee), evaluate_args(node.call, env)};
          }
        },
        e.node);
  }

  Outcome invoke(const Definition& def, const std::vector<Value>& args) {
    Env local;
    for (std::size_t i = 0; i < def.params.size(); ++i) local[def.params[i]] = args[i];
    return eval(def.body, local);
  }

 private:
  Value value_of(const Expr& e, const Env& env) {
    Outcome out = eval(e, env);
    // Ruled out statically; kept as a hard failure for hand-built ASTs.
    if (!std::holds_alternative<Value>(out)) throw EvalError("'#' result used as a value in '" + print(e) + "'");
    return std::get<Value>(out);
  }

  std::vector<Value> evaluate_args(const Call& call, const Env& env) {
    std::vector<Value> args;
    args.reserve(call.args.size());
    for (const auto& a : call.args) args.push_back(value_of(a, env));
    return args;
  }

  double compare(const Compare& cmp, const Env& env, const Expr& whole) {
    Value lhs = value_of(cmp.operands[0], env);
    Value rhs = value_of(cmp.operands[1], env);
    if (lhs.index() != rhs.index()) throw EvalError("comparison of a number with a string: " + print(whole));
    if (std::holds_alternative<std::string>(lhs) && cmp.op != CompareOp::eq && cmp.op != CompareOp::ne) {
      throw EvalError("strings only support == and !=: " + print(whole));
    }
    bool r = false;
    switch (cmp.op) {
      case CompareOp::eq: r = lhs == rhs; break;
      case CompareOp::ne: r = lhs != rhs; break;
      case CompareOp::lt: r = std::get<double>(lhs) < std::get<double>(rhs); break;
      case CompareOp::le: r = std::get<double>(lhs) <= std::get<double>(rhs); break;
      case CompareOp::gt: r = std::get<double>(lhs) > std::get<double>(rhs); break;
      case CompareOp::ge: r = std::get<double>(lhs) >= std::get<double>(rhs); break;
    }
    return r ? 1.0 : 0.0;
  }

  const QueryAst& ast_;
  blackbox::Simulator& sim_;
};

}  // namespace

Evaluator::Evaluator(const QueryAst& ast, const ObservationPlan& plan, std::int64_t horizon)
    : ast_(ast), plan_(plan), horizon_(horizon) {
  std::map<std::int64_t, std::vector<Read>> by_step;
  for (std::size_t i = 0; i < plan.points.size(); ++i) {
    const PlanPoint& p = plan.points[i];
    if (p.generic) {
      generic_points_.push_back(i);
    } else {
      by_step[p.step].push_back({i, &p.observable});
    }
  }
  for (auto& [step, reads] : by_step) schedule_.push_back({step, std::move(reads)});
}

std::vector<double> Evaluator::run(blackbox::Simulator& sim, std::uint64_t seed) const {
  if (!schedule_.empty() && schedule_.back().step > horizon_) {
    throw HorizonExceeded("observation at step " + std::to_string(schedule_.back().step) + " exceeds horizon " +
                          std::to_string(horizon_));
  }

  std::vector<double> samples(plan_.points.size(), 0.0);
  Interp interp(ast_, sim);

  struct Pending {
    std::size_t point;
    std::optional<Deferred> residual;  // empty until first evaluated
  };
  std::vector<Pending> pending;
  for (std::size_t idx : generic_points_) pending.push_back({idx, std::nullopt});

  sim.reset(seed);
  std::size_t next_read = 0;
  while (true) {
    const std::int64_t step = sim.step();

    if (next_read < schedule_.size() && schedule_[next_read].step == step) {
      for (const Read& r : schedule_[next_read].reads) {
        samples[r.point] = *r.observable == "steps" ? static_cast<double>(step) : sim.observe(*r.observable);
      }
      ++next_read;
    }

    for (auto it = pending.begin(); it != pending.end();) {
      Outcome out;
      if (it->residual) {
        out = interp.invoke(*it->residual->def, it->residual->args);
      } else {
        const GenericQuery& q = *plan_.points[it->point].generic;
        Env env(q.bindings.begin(), q.bindings.end());
        out = interp.eval(ast_.directives[q.directive].target, env);
      }
      if (auto* v = std::get_if<Value>(&out)) {
        if (!std::holds_alternative<double>(*v)) {
          throw EvalError("query '" + plan_.points[it->point].observable + "' evaluated to a string");
        }
        samples[it->point] = std::get<double>(*v);
        it = pending.erase(it);
      } else {
        it->residual = std::get<Deferred>(std::move(out));
        ++it;
      }
    }

    if (next_read == schedule_.size() && pending.empty()) break;
    if (step >= horizon_) {
      const std::string what = pending.empty() ? "observation plan" : "query '" + plan_.points[pending.front().point].observable + "'";
      throw HorizonExceeded(what + " did not resolve within horizon " + std::to_string(horizon_));
    }
    sim.advance();
  }
  return samples;
}

std::vector<double> evaluate_run(const QueryAst& ast, const ObservationPlan& plan, blackbox::Simulator& sim,
                                 std::uint64_t seed, std::int64_t horizon) {
  return Evaluator(ast, plan, horizon).run(sim, seed);
}

}  // namespace smcsweep::quatex
