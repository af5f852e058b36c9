#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smcsweep/quatex/ast.hpp"

namespace smcsweep::quatex {

// Directive-level names bound to observable names, e.g. {"obs": "UNEMPL"}.
using ObsBinding = std::map<std::string, std::string>;

// A plan point that does not fit the step-guarded observation pattern and
// is answered by small-step evaluation of its directive.
struct GenericQuery {
  std::size_t directive = 0;
  std::map<std::string, Value> bindings;

  friend bool operator==(const GenericQuery&, const GenericQuery&) = default;
};

struct PlanPoint {
  // Observation step for direct reads; the parametric value (or the 1-based
  // directive index) for generic points.
  std::int64_t step = 0;
  // Observable name for direct reads; printed target expression for generic points.
  std::string observable;
  std::optional<GenericQuery> generic;

  friend bool operator==(const PlanPoint&, const PlanPoint&) = default;
};

struct ObservationPlan {
  std::vector<PlanPoint> points;
  std::int64_t max_step = 0;

  bool has_generic() const;
  friend bool operator==(const ObservationPlan&, const ObservationPlan&) = default;
};

struct ExpandOptions {
  // Bound used as max_step when a generic point is present.
  std::int64_t horizon = 600;
  // Skip the direct-read fast path (used to cross-check it).
  bool force_generic = false;
};

// Expands every directive over its grid. Directives of the form
//   E[f(.., x, .., obs, ..)]  with  f(..) = if (rval("steps") == x) then rval(obs) else # f(..) fi
// become direct reads of `obs` at step x; anything else becomes a generic point.
// Throws QueryError (unresolved_observable, empty_grid) on failure.
ObservationPlan expand_parametric(const QueryAst& ast, const ObsBinding& binding, const ExpandOptions& options = {});

}  // namespace smcsweep::quatex
