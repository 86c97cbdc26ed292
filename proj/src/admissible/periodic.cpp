#include "cylbill/admissible.hpp"

namespace cylbill {

AdmissibleOrbit close_periodic(const ReducedWord& w, double r0, const PlanOptions& plan_opts,
                               const MinimizeOptions& opts) {
  return minimize_arclength(plan_periodic(w, plan_opts), r0, opts);
}

}  // namespace cylbill
