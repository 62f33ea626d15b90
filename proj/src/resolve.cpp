#include "cantor/resolve.hpp"

namespace cantor {

SafetyAutomaton derivative(const RegSet& e, const SafetyAutomaton& f, const SafetyAutomaton& ambient) {
    if (!subset_of(f, ambient))
        throw AmbientViolation("derivative: F not contained in the ambient space");
    if (f.empty()) return SafetyAutomaton{};

    RegSet f_reg = from_closed(f);
    RegSet inter = combine(CombineOp::Intersect, f_reg, &e);
    RegSet compl_e = combine(CombineOp::Complement, e);
    RegSet minus = combine(CombineOp::Intersect, f_reg, &compl_e);

    SafetyAutomaton left = closure(inter);
    SafetyAutomaton right = closure(minus);
    SafetyAutomaton both = boolean_op(BoolOp::Intersect, left, right);
    return minimize(boolean_op(BoolOp::Intersect, both, ambient));
}

ResolvabilityVerdict check_resolvable(const RegSet& e, const SafetyAutomaton& ambient,
                                      unsigned budget) {
    if (ambient.empty())
        throw AmbientViolation("check_resolvable: ambient space must be nonempty");

    ResolvabilityVerdict v;
    SafetyAutomaton cur = minimize(ambient);
    v.trace.push_back(cur);
    for (unsigned i = 0; i < budget; ++i) {
        SafetyAutomaton next = derivative(e, cur, ambient);
        v.trace.push_back(next);
        ++v.steps;
        if (is_empty(next)) {
            v.status = ResolvabilityStatus::Resolvable;
            return v;
        }
        if (equals(next, cur)) {
            v.status = ResolvabilityStatus::NotResolvable;
            v.witness = next;
            return v;
        }
        cur = next;
    }
    v.status = ResolvabilityStatus::Unknown;
    return v;
}

}  // namespace cantor
