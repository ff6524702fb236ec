#include "oracle.hpp"

#include <algorithm>
#include <map>

namespace testsupport {

namespace {

using reo::Action;
using reo::Automaton;
using reo::Label;
using reo::Transition;

using States = std::set<int>;

States closure(const Automaton& a, States s) {
    bool grew = true;
    while (grew) {
        grew = false;
        for (const Transition& t : a.transitions)
            if (t.label.isTau() && s.count(t.from) && !s.count(t.to)) {
                s.insert(t.to);
                grew = true;
            }
    }
    return s;
}

bool has_output_action(const Label& l) {
    if (!l.isActs()) return false;
    return std::any_of(l.acts.begin(), l.acts.end(), [](const Action& x) { return x.isOutput(); });
}

std::string projection_text(const Label& l) {
    std::vector<Action> obs;
    for (const Action& x : l.acts)
        if (x.isOutput()) obs.push_back(x);
    return Label::of(obs).text();
}

bool state_quiescent(const Automaton& a, int s) {
    for (int q : closure(a, {s}))
        for (const Transition& t : a.transitions)
            if (t.from == q && has_output_action(t.label)) return false;
    return true;
}

// Observable outputs of a state set, as canonical text: output projections of
// enabled output-carrying labels plus "delta" when some member is quiescent.
std::set<std::string> outs(const Automaton& a, const States& s) {
    std::set<std::string> result;
    States c = closure(a, s);
    for (const Transition& t : a.transitions)
        if (c.count(t.from) && has_output_action(t.label)) result.insert(projection_text(t.label));
    for (int q : c)
        if (state_quiescent(a, q)) result.insert("delta");
    return result;
}

// Singleton input stimuli enabled somewhere in the set, as canonical text.
std::set<std::string> stimuli(const Automaton& a, const States& s) {
    std::set<std::string> result;
    States c = closure(a, s);
    for (const Transition& t : a.transitions) {
        if (!c.count(t.from)) continue;
        if (!t.label.isActs() || t.label.acts.size() != 1) continue;
        if (!t.label.acts[0].isInput()) continue;
        result.insert(t.label.text());
    }
    return result;
}

// One observation step by canonical text: inputs follow exact labels, outputs
// follow any edge with the same projection, delta keeps quiescent states.
States step(const Automaton& a, const States& s, const std::string& obs) {
    States c = closure(a, s);
    States next;
    for (const Transition& t : a.transitions) {
        if (!c.count(t.from)) continue;
        if (obs == "delta") continue;
        if (has_output_action(t.label)) {
            if (projection_text(t.label) == obs) next.insert(t.to);
        } else if (t.label.isActs() && t.label.text() == obs) {
            next.insert(t.to);
        }
    }
    if (obs == "delta")
        for (int q : c)
            if (state_quiescent(a, q)) next.insert(q);
    return closure(a, next);
}

std::optional<std::vector<std::string>> dfs(const Automaton& impl, const Automaton& spec,
                                            const States& si, const States& ss, int depth,
                                            std::vector<std::string>& trace) {
    std::set<std::string> specOut = outs(spec, ss);
    for (const std::string& o : outs(impl, si))
        if (!specOut.count(o)) {
            std::vector<std::string> witness = trace;
            witness.push_back(o);
            return witness;
        }
    if (depth == 0) return std::nullopt;
    std::set<std::string> moves = stimuli(spec, ss);
    moves.insert(specOut.begin(), specOut.end());
    for (const std::string& m : moves) {
        States ss2 = step(spec, ss, m);
        if (ss2.empty()) continue;
        States si2 = step(impl, si, m);
        if (si2.empty()) continue;
        trace.push_back(m);
        auto found = dfs(impl, spec, si2, ss2, depth - 1, trace);
        trace.pop_back();
        if (found) return found;
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::vector<std::string>> oracle_ioco_counterexample(const Automaton& impl,
                                                                   const Automaton& spec,
                                                                   int depth) {
    std::vector<std::string> trace;
    return dfs(impl, spec, closure(impl, {impl.initial}), closure(spec, {spec.initial}), depth,
               trace);
}

}  // namespace testsupport
