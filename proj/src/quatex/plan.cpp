#include "smcsweep/quatex/plan.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "smcsweep/quatex/printer.hpp"

namespace smcsweep::quatex {

bool ObservationPlan::has_generic() const {
  return std::any_of(points.begin(), points.end(), [](const PlanPoint& p) { return p.generic.has_value(); });
}

namespace {

bool is_steps_read(const Expr& e) {
  const auto* r = std::get_if<Rval>(&e.node);
  if (!r) return false;
  const auto* s = std::get_if<StringLit>(&r->name.front().node);
  return s && s->value == "steps";
}

const ParamRef* as_param(const Expr& e) { return std::get_if<ParamRef>(&e.node); }

// Shape of a step-guarded observation operator: which formal holds the step,
// and where the observable name comes from.
struct ObservationShape {
  std::size_t step_param;
  std::optional<std::size_t> obs_param;  // formal holding the name
  std::string obs_literal;               // used when obs_param is empty
};

std::optional<ObservationShape> match_shape(const Definition& def) {
  const auto* node = std::get_if<IfExpr>(&def.body.node);
  if (!node) return std::nullopt;
  const auto* cmp = std::get_if<Compare>(&node->parts[0].node);
  if (!cmp || cmp->op != CompareOp::eq) return std::nullopt;

  const ParamRef* step_ref = nullptr;
  if (is_steps_read(cmp->operands[0])) step_ref = as_param(cmp->operands[1]);
  else if (is_steps_read(cmp->operands[1])) step_ref = as_param(cmp->operands[0]);
  if (!step_ref) return std::nullopt;

  const auto index_of = [&](const std::string& name) -> std::optional<std::size_t> {
    auto it = std::find(def.params.begin(), def.params.end(), name);
    if (it == def.params.end()) return std::nullopt;
    return static_cast<std::size_t>(it - def.params.begin());
  };

  ObservationShape shape{*index_of(step_ref->name), std::nullopt, {}};

  const auto* read = std::get_if<Rval>(&node->parts[1].node);
  if (!read) return std::nullopt;
  const Expr& name_expr = read->name.front();
  if (const auto* p = as_param(name_expr)) {
    shape.obs_param = index_of(p->name);
    if (*shape.obs_param == shape.step_param) return std::nullopt;
  } else if (const auto* s = std::get_if<StringLit>(&name_expr.node)) {
    if (s->value == "steps") return std::nullopt;
    shape.obs_literal = s->value;
  } else {
    return std::nullopt;
  }

  // else-branch must re-enter the same operator with unchanged arguments
  const auto* next = std::get_if<Next>(&node->parts[2].node);
  if (!next || next->call.callee != def.name) return std::nullopt;
  for (std::size_t i = 0; i < def.params.size(); ++i) {
    const auto* p = as_param(next->call.args[i]);
    if (!p || p->name != def.params[i]) return std::nullopt;
  }
  return shape;
}

void collect_free_names(const Expr& e, std::vector<std::pair<std::string, SourcePos>>& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, ParamRef>) {
          out.emplace_back(node.name, e.pos);
        } else if constexpr (std::is_same_v<T, Rval>) {
          collect_free_names(node.name.front(), out);
        } else if constexpr (std::is_same_v<T, Compare>) {
          for (const auto& op : node.operands) collect_free_names(op, out);
        } else if constexpr (std::is_same_v<T, IfExpr>) {
          for (const auto& part : node.parts) collect_free_names(part, out);
        } else if constexpr (std::is_same_v<T, Call>) {
          for (const auto& arg : node.args) collect_free_names(arg, out);
        } else if constexpr (std::is_same_v<T, Next>) {
          for (const auto& arg : node.call.args) collect_free_names(arg, out);
        }
      },
      e.node);
}

// Static value of a directive-level argument, if it has one.
std::optional<Value> static_value(const Expr& arg, const std::map<std::string, Value>& env) {
  if (const auto* n = std::get_if<NumberLit>(&arg.node)) return Value{n->value};
  if (const auto* s = std::get_if<StringLit>(&arg.node)) return Value{s->value};
  if (const auto* p = as_param(arg)) {
    auto it = env.find(p->name);
    if (it != env.end()) return it->second;
  }
  return std::nullopt;
}

std::optional<PlanPoint> direct_point(const QueryAst& ast, const Expr& target, const std::map<std::string, Value>& env) {
  const auto* call = std::get_if<Call>(&target.node);
  if (!call) return std::nullopt;
  const Definition* def = ast.find(call->callee);
  auto shape = match_shape(*def);
  if (!shape) return std::nullopt;

  auto step_value = static_value(call->args[shape->step_param], env);
  if (!step_value || !std::holds_alternative<double>(*step_value)) return std::nullopt;
  double step = std::get<double>(*step_value);
  if (!(step >= 1.0) || step != std::floor(step) || step > 9.0e15) return std::nullopt;

  std::string observable = shape->obs_literal;
  if (shape->obs_param) {
    auto name = static_value(call->args[*shape->obs_param], env);
    if (!name || !std::holds_alternative<std::string>(*name)) return std::nullopt;
    observable = std::get<std::string>(*name);
  }
  // `rval("steps")` through a bound name still reads the engine counter; keep it direct.
  return PlanPoint{static_cast<std::int64_t>(step), observable, std::nullopt};
}

}  // namespace

ObservationPlan expand_parametric(const QueryAst& ast, const ObsBinding& binding, const ExpandOptions& options) {
  if (ast.directives.empty()) {
    throw QueryError(QueryErrorKind::empty_grid, SourcePos{}, "query has no eval directive");
  }
  ObservationPlan plan;
  bool generic_seen = false;

  for (std::size_t d = 0; d < ast.directives.size(); ++d) {
    const EvalDirective& dir = ast.directives[d];

    std::vector<std::pair<std::string, SourcePos>> free_names;
    collect_free_names(dir.target, free_names);
    for (const auto& [name, pos] : free_names) {
      bool is_grid_var = dir.parametric && dir.parametric->variable == name;
      if (!is_grid_var && !binding.count(name)) {
        throw QueryError(QueryErrorKind::unresolved_observable, pos, "unresolved observable name '" + name + "'");
      }
    }

    std::map<std::string, Value> env;
    for (const auto& [name, obs] : binding) env[name] = obs;

    std::vector<std::optional<double>> grid;
    if (dir.parametric) {
      const auto& g = *dir.parametric;
      if (g.step < 1 || g.hi < g.lo) {
        throw QueryError(QueryErrorKind::empty_grid, dir.pos, "parametric grid is empty");
      }
      for (std::int64_t v = g.lo; v <= g.hi; v += g.step) grid.emplace_back(static_cast<double>(v));
    } else {
      grid.emplace_back(std::nullopt);
    }

    for (const auto& value : grid) {
      if (value) env[dir.parametric->variable] = *value;
      std::optional<PlanPoint> point;
      if (!options.force_generic) point = direct_point(ast, dir.target, env);
      if (!point) {
        generic_seen = true;
        PlanPoint generic;
        generic.step = value ? static_cast<std::int64_t>(*value) : static_cast<std::int64_t>(d + 1);
        generic.observable = print(dir.target);
        std::set<std::string> bound_names;
        for (const auto& [name, _] : free_names) {
          if (binding.count(name)) bound_names.insert(name);
        }
        std::string suffix;
        for (const auto& name : bound_names) suffix += (suffix.empty() ? "" : ",") + name + "=" + binding.at(name);
        if (!suffix.empty()) generic.observable += "{" + suffix + "}";
        GenericQuery q{d, {}};
        for (const auto& [name, _] : free_names) q.bindings[name] = env.at(name);
        generic.generic = std::move(q);
        point = std::move(generic);
      }
      plan.points.push_back(std::move(*point));
    }
  }

  // Each (observable, step) must appear once; points are grouped by observable
  // in order of first appearance and ascending by step within a group.
  std::set<std::pair<std::string, std::int64_t>> seen;
  std::map<std::string, std::size_t> group;
  for (const auto& p : plan.points) {
    group.emplace(p.observable, group.size());
    if (!seen.emplace(p.observable, p.step).second) {
      throw QueryError(QueryErrorKind::duplicate_point, SourcePos{},
                       "observation of '" + p.observable + "' at step " + std::to_string(p.step) + " is requested twice");
    }
  }

  std::stable_sort(plan.points.begin(), plan.points.end(), [&](const PlanPoint& a, const PlanPoint& b) {
    auto ga = group.at(a.observable), gb = group.at(b.observable);
    return ga != gb ? ga < gb : a.step < b.step;
  });

  if (generic_seen) {
    plan.max_step = options.horizon;
  } else {
    for (const auto& p : plan.points) plan.max_step = std::max(plan.max_step, p.step);
  }
  return plan;
}

}  // namespace smcsweep::quatex
