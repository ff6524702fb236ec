#include "reo/lts.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace reo {

std::string trace_text(const Trace& t) {
    if (t.empty()) return "<empty>";
    std::string s;
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) s += "·";
        s += t[i].text();
    }
    return s;
}

StateSet tau_closure(const Automaton& a, const StateSet& s) {
    StateSet closure = s;
    std::deque<int> queue(s.begin(), s.end());
    auto adj = a.adjacency();
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        for (const Transition* t : adj[q]) {
            if (!t->label.isTau()) continue;
            if (closure.insert(t->to).second) queue.push_back(t->to);
        }
    }
    return closure;
}

namespace {

bool step_matches(const Label& edge, const Label& obs) {
    if (obs.isDelta()) return edge.isDelta();
    if (obs.isTheta()) return edge.isTheta();
    if (obs.isActs() && obs.hasOutput())
        return edge.isActs() && edge.hasOutput() &&
               edge.outputProjection() == obs.outputProjection();
    return edge == obs;
}

}  // namespace

StateSet after(const Automaton& a, const StateSet& from, const Trace& sigma) {
    StateSet cur = tau_closure(a, from);
    auto adj = a.adjacency();
    for (const Label& obs : sigma) {
        StateSet next;
        for (int s : cur) {
            if (obs.isDelta() && quiescent(a, s)) next.insert(s);
            for (const Transition* t : adj[s])
                if (step_matches(t->label, obs)) next.insert(t->to);
        }
        cur = tau_closure(a, next);
        if (cur.empty()) break;
    }
    return cur;
}

bool quiescent(const Automaton& a, int s) {
    StateSet closure = tau_closure(a, {s});
    for (const auto& t : a.transitions)
        if (closure.count(t.from) && t.label.hasOutput()) return false;
    return true;
}

std::set<Label> out_labels(const Automaton& a, const StateSet& states) {
    std::set<Label> result;
    StateSet closure = tau_closure(a, states);
    for (const auto& t : a.transitions)
        if (closure.count(t.from) && t.label.hasOutput()) result.insert(t.label.outputProjection());
    for (int s : states)
        if (quiescent(a, s)) result.insert(Label::delta());
    return result;
}

bool refuses(const Automaton& a, const StateSet& states, const std::vector<Label>& labels) {
    auto adj = a.adjacency();
    for (int s : states) {
        bool refusesAll = true;
        for (const Transition* t : adj[s]) {
            if (t->label.isTau() ||
                std::find(labels.begin(), labels.end(), t->label) != labels.end()) {
                refusesAll = false;
                break;
            }
        }
        if (refusesAll) return true;
    }
    return false;
}

Automaton suspension(const Automaton& a) {
    Automaton out = a;
    for (int s = 0; s < a.numStates; ++s) {
        bool hasDelta = false;
        for (const auto& t : a.transitions)
            if (t.from == s && t.label.isDelta()) hasDelta = true;
        if (!hasDelta && quiescent(a, s)) out.addTransition(s, Label::delta(), s);
    }
    out.normalize();
    return out;
}

std::set<Trace> straces(const Automaton& a, int maxDepth) {
    Automaton susp = suspension(a);
    auto adj = susp.adjacency();
    std::set<Trace> result;
    std::deque<std::pair<Trace, StateSet>> queue;
    queue.push_back({{}, tau_closure(susp, {susp.initial})});
    while (!queue.empty()) {
        auto [trace, states] = queue.front();
        queue.pop_front();
        result.insert(trace);
        if ((int)trace.size() >= maxDepth) continue;
        std::map<Label, StateSet> next;
        for (int s : states)
            for (const Transition* t : adj[s])
                if (!t->label.isTau()) next[t->label].insert(t->to);
        for (auto& [label, targets] : next) {
            Trace extended = trace;
            extended.push_back(label);
            queue.push_back({std::move(extended), tau_closure(susp, targets)});
        }
    }
    return result;
}

Automaton determinize(const Automaton& a) {
    auto adj = a.adjacency();
    Automaton out;
    out.inputs = a.inputs;
    out.outputs = a.outputs;
    std::map<StateSet, int> ids;
    std::deque<StateSet> queue;
    auto stateOf = [&](const StateSet& s) {
        auto [it, fresh] = ids.try_emplace(s, (int)ids.size());
        if (fresh) {
            out.addState();
            queue.push_back(s);
        }
        return it->second;
    };
    out.initial = stateOf(tau_closure(a, {a.initial}));
    while (!queue.empty()) {
        StateSet cur = queue.front();
        queue.pop_front();
        int from = ids.at(cur);
        std::map<Label, StateSet> next;
        for (int s : cur)
            for (const Transition* t : adj[s])
                if (!t->label.isTau()) next[t->label].insert(t->to);
        for (auto& [label, targets] : next)
            out.addTransition(from, label, stateOf(tau_closure(a, targets)));
    }
    out.normalize();
    return out;
}

bool is_deterministic(const Automaton& a) {
    std::set<std::pair<int, std::string>> seen;
    for (const auto& t : a.transitions) {
        if (t.label.isTau()) return false;
        if (!seen.insert({t.from, t.label.text()}).second) return false;
    }
    return true;
}

Automaton read_aut(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty .aut input");
    long initial = 0, numTransitions = 0, numStates = 0;
    if (std::sscanf(line.c_str(), "des (%ld,%ld,%ld)", &initial, &numTransitions, &numStates) != 3)
        throw FormatError("malformed .aut header: " + line);
    if (numStates <= 0 || initial < 0 || initial >= numStates)
        throw FormatError("bad state counts in .aut header");
    Automaton a;
    a.numStates = (int)numStates;
    a.initial = (int)initial;
    std::set<std::string> inputTexts, outputTexts;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        if (line.front() != '(' || line.back() != ')')
            throw FormatError("malformed .aut transition: " + line);
        std::string body = line.substr(1, line.size() - 2);
        size_t firstComma = body.find(',');
        size_t lastComma = body.rfind(',');
        if (firstComma == std::string::npos || lastComma == firstComma)
            throw FormatError("malformed .aut transition: " + line);
        long from = 0, to = 0;
        try {
            from = std::stol(body.substr(0, firstComma));
            to = std::stol(body.substr(lastComma + 1));
        } catch (const std::exception&) {
            throw FormatError("malformed .aut transition: " + line);
        }
        if (from < 0 || from >= numStates || to < 0 || to >= numStates)
            throw FormatError("transition references state out of range: " + line);
        std::string labelText = body.substr(firstComma + 1, lastComma - firstComma - 1);
        if (labelText.size() >= 2 && labelText.front() == '"' && labelText.back() == '"')
            labelText = labelText.substr(1, labelText.size() - 2);
        Label label = parse_label(labelText);
        for (const auto& act : label.acts) {
            if (act.isInput()) inputTexts.insert(act.text());
            if (act.isOutput()) outputTexts.insert(act.text());
        }
        a.addTransition((int)from, label, (int)to);
    }
    if ((long)a.transitions.size() != numTransitions)
        throw FormatError("transition count mismatch in .aut input");
    for (const auto& t : inputTexts) a.inputs.push_back(parse_action(t));
    for (const auto& t : outputTexts) a.outputs.push_back(parse_action(t));
    a.normalize();
    return a;
}

std::vector<int> bfs_numbering(const Automaton& a) {
    // BFS renumbering from the initial state; unreachable states keep a slot
    // at the end so the header count stays faithful.
    std::vector<int> renum(a.numStates, -1);
    auto adj = a.adjacency();
    std::deque<int> queue;
    int next = 0;
    if (a.numStates > 0) {
        renum[a.initial] = next++;
        queue.push_back(a.initial);
    }
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (const Transition* t : adj[s]) {
            if (renum[t->to] < 0) {
                renum[t->to] = next++;
                queue.push_back(t->to);
            }
        }
    }
    for (int s = 0; s < a.numStates; ++s)
        if (renum[s] < 0) renum[s] = next++;
    return renum;
}

std::string write_aut(const Automaton& a) {
    std::vector<int> renum = bfs_numbering(a);
    std::vector<Transition> lines;
    lines.reserve(a.transitions.size());
    for (const auto& t : a.transitions)
        lines.push_back(Transition{renum[t.from], t.label, renum[t.to]});
    std::sort(lines.begin(), lines.end());

    std::ostringstream out;
    out << "des (0," << lines.size() << "," << a.numStates << ")\n";
    for (const auto& t : lines)
        out << "(" << t.from << ",\"" << t.label.text() << "\"," << t.to << ")\n";
    return out.str();
}

namespace {

std::vector<int> bisim_blocks(const Automaton& a, const Automaton& b) {
    // Partition refinement on the disjoint union; block ids per state.
    int n = a.numStates + b.numStates;
    std::vector<std::vector<std::pair<std::string, int>>> edges(n);
    for (const auto& t : a.transitions) edges[t.from].push_back({t.label.text(), t.to});
    for (const auto& t : b.transitions)
        edges[a.numStates + t.from].push_back({t.label.text(), a.numStates + t.to});
    std::vector<int> block(n, 0);
    for (;;) {
        std::map<std::pair<int, std::set<std::pair<std::string, int>>>, int> sig;
        std::vector<int> nextBlock(n);
        for (int s = 0; s < n; ++s) {
            std::set<std::pair<std::string, int>> moves;
            for (const auto& [label, to] : edges[s]) moves.insert({label, block[to]});
            auto [it, fresh] = sig.try_emplace({block[s], std::move(moves)}, (int)sig.size());
            nextBlock[s] = it->second;
        }
        if (nextBlock == block) return block;
        block = std::move(nextBlock);
    }
}

}  // namespace

EquivalenceResult strong_bisimilar(const Automaton& a, const Automaton& b) {
    auto block = bisim_blocks(a, b);
    EquivalenceResult r;
    r.equivalent = block[a.initial] == block[a.numStates + b.initial];
    if (!r.equivalent) {
        EquivalenceResult tr = trace_equivalent(a, b, a.numStates + b.numStates);
        if (!tr.equivalent) {
            r.detail = tr.detail;
            r.counterexample = tr.counterexample;
        } else {
            r.detail = "initial states fall into different bisimulation blocks";
        }
    }
    return r;
}

EquivalenceResult trace_equivalent(const Automaton& a, const Automaton& b, int depth) {
    auto adjA = a.adjacency();
    auto adjB = b.adjacency();
    auto enabled = [](const std::vector<std::vector<const Transition*>>& adj, const Automaton& x,
                      const StateSet& s) {
        std::map<Label, StateSet> next;
        for (int q : s)
            for (const Transition* t : adj[q])
                if (!t->label.isTau()) next[t->label].insert(t->to);
        for (auto& [label, targets] : next) targets = tau_closure(x, targets);
        return next;
    };
    std::set<std::pair<StateSet, StateSet>> seen;
    std::deque<std::tuple<Trace, StateSet, StateSet>> queue;
    queue.push_back({{}, tau_closure(a, {a.initial}), tau_closure(b, {b.initial})});
    while (!queue.empty()) {
        auto [trace, sa, sb] = queue.front();
        queue.pop_front();
        auto nextA = enabled(adjA, a, sa);
        auto nextB = enabled(adjB, b, sb);
        for (const auto& [label, targets] : nextA) {
            if (nextB.count(label)) continue;
            EquivalenceResult r;
            r.counterexample = trace;
            r.counterexample.push_back(label);
            r.detail = "trace " + trace_text(r.counterexample) + " only in first automaton";
            return r;
        }
        for (const auto& [label, targets] : nextB) {
            if (nextA.count(label)) continue;
            EquivalenceResult r;
            r.counterexample = trace;
            r.counterexample.push_back(label);
            r.detail = "trace " + trace_text(r.counterexample) + " only in second automaton";
            return r;
        }
        if ((int)trace.size() >= depth) continue;
        for (const auto& [label, ta] : nextA) {
            auto key = std::make_pair(ta, nextB.at(label));
            if (!seen.insert(key).second) continue;
            Trace extended = trace;
            extended.push_back(label);
            queue.push_back({std::move(extended), key.first, key.second});
        }
    }
    EquivalenceResult r;
    r.equivalent = true;
    return r;
}

namespace {

struct IsoSignature {
    std::multiset<std::string> out, in;
    bool operator==(const IsoSignature& o) const { return out == o.out && in == o.in; }
};

std::vector<IsoSignature> signatures(const Automaton& a) {
    std::vector<IsoSignature> sig(a.numStates);
    for (const auto& t : a.transitions) {
        sig[t.from].out.insert(t.label.text());
        sig[t.to].in.insert(t.label.text());
    }
    return sig;
}

bool extend_iso(const Automaton& a, const Automaton& b, const std::vector<IsoSignature>& sa,
                const std::vector<IsoSignature>& sb, const std::vector<int>& order, size_t idx,
                std::vector<int>& map, std::vector<bool>& used,
                const std::set<std::tuple<int, std::string, int>>& edgesB) {
    if (idx == order.size()) return true;
    int s = order[idx];
    for (int cand = 0; cand < b.numStates; ++cand) {
        if (used[cand] || !(sa[s] == sb[cand])) continue;
        map[s] = cand;
        used[cand] = true;
        bool consistent = true;
        for (const auto& t : a.transitions) {
            if (map[t.from] < 0 || map[t.to] < 0) continue;
            if (!edgesB.count({map[t.from], t.label.text(), map[t.to]})) {
                consistent = false;
                break;
            }
        }
        if (consistent && extend_iso(a, b, sa, sb, order, idx + 1, map, used, edgesB)) return true;
        used[cand] = false;
        map[s] = -1;
    }
    return false;
}

}  // namespace

bool isomorphic(const Automaton& a, const Automaton& b) {
    if (a.numStates != b.numStates) return false;
    Automaton na = a, nb = b;
    na.normalize();
    nb.normalize();
    if (na.transitions.size() != nb.transitions.size()) return false;
    auto sa = signatures(na);
    auto sb = signatures(nb);
    if (!(sa[na.initial] == sb[nb.initial])) return false;
    {
        std::multiset<std::string> la, lb;  // label multiset totals must agree
        for (const auto& t : na.transitions) la.insert(t.label.text());
        for (const auto& t : nb.transitions) lb.insert(t.label.text());
        if (la != lb) return false;
    }
    // BFS order from the initial state, unreachable states last.
    std::vector<int> order;
    std::vector<bool> seen(na.numStates, false);
    std::deque<int> queue;
    queue.push_back(na.initial);
    seen[na.initial] = true;
    auto adj = na.adjacency();
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        order.push_back(s);
        for (const Transition* t : adj[s]) {
            if (!seen[t->to]) {
                seen[t->to] = true;
                queue.push_back(t->to);
            }
        }
    }
    for (int s = 0; s < na.numStates; ++s)
        if (!seen[s]) order.push_back(s);

    std::set<std::tuple<int, std::string, int>> edgesB;
    for (const auto& t : nb.transitions) edgesB.insert({t.from, t.label.text(), t.to});
    std::vector<int> map(na.numStates, -1);
    std::vector<bool> used(nb.numStates, false);
    map[na.initial] = nb.initial;
    used[nb.initial] = true;
    // The initial state is first in `order`; re-verify it inside the search by
    // starting at index 1 with the pinned assignment.
    bool ok = extend_iso(na, nb, sa, sb, order, 1, map, used, edgesB);
    if (!ok) return false;
    for (const auto& t : na.transitions)
        if (!edgesB.count({map[t.from], t.label.text(), map[t.to]})) return false;
    return true;
}

}  // namespace reo
