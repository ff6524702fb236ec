#include "reo/ioext.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "reo/lts.hpp"
#include "reo/semantics.hpp"

namespace reo {

namespace {

std::vector<Action> request_actions(const Automaton& a) {
    std::vector<Action> reqs;
    for (const auto& act : a.inputs)
        if (act.isInput()) reqs.push_back(act);
    return reqs;
}

// Per-state singleton request edges: port -> exact {?P} transition target.
std::vector<std::map<std::string, int>> request_edges(const Automaton& a) {
    std::vector<std::map<std::string, int>> edges(a.numStates);
    for (const auto& t : a.transitions)
        if (t.label.isActs() && t.label.acts.size() == 1 && t.label.acts[0].isInput())
            edges[t.from].emplace(t.label.acts[0].port, t.to);
    return edges;
}

}  // namespace

Automaton apply_strategy(const Automaton& a, const RequestStrategy& strategy, int stateCeiling) {
    if (strategy.kind == RequestStrategy::Kind::None) return a;
    auto reqs = request_actions(a);
    auto reqEdges = request_edges(a);

    int extraCap = strategy.kind == RequestStrategy::Kind::Queue ? strategy.bound - 1 : 0;
    if (extraCap < 0) extraCap = 0;
    if (extraCap == 0) {
        // Ignore, Overwrite and Queue(1) all saturate at one pending request;
        // a repeated request self-loops. Requests carry no data, so the
        // ignore/overwrite distinction collapses.
        Automaton out = a;
        for (int s = 0; s < a.numStates; ++s)
            for (const auto& r : reqs)
                if (!reqEdges[s].count(r.port)) out.addTransition(s, Label::single(r), s);
        out.normalize();
        return out;
    }

    // Queue(k): weave an extra per-port counter of queued requests (0..k-1 on
    // top of the one the base automaton already holds) into the state space.
    using Counts = std::vector<int>;
    std::vector<std::string> ports;
    for (const auto& r : reqs) ports.push_back(r.port);
    std::sort(ports.begin(), ports.end());

    Automaton out;
    out.inputs = a.inputs;
    out.outputs = a.outputs;
    std::map<std::pair<int, Counts>, int> ids;
    std::deque<std::pair<int, Counts>> queue;
    auto stateOf = [&](int base, const Counts& c) {
        auto [it, fresh] = ids.try_emplace({base, c}, (int)ids.size());
        if (fresh) {
            if ((int)ids.size() > stateCeiling) throw ExplosionError(stateCeiling);
            out.addState();
            queue.push_back({base, c});
        }
        return it->second;
    };
    auto adj = a.adjacency();
    out.initial = stateOf(a.initial, Counts(ports.size(), 0));
    while (!queue.empty()) {
        auto [base, counts] = queue.front();
        queue.pop_front();
        int from = ids.at({base, counts});
        for (const Transition* t : adj[base]) {
            // Deliver one queued request per port that produced output in this
            // step: the freed pending slot immediately re-fills.
            int target = t->to;
            Counts c = counts;
            for (size_t i = 0; i < ports.size(); ++i) {
                if (c[i] == 0) continue;
                bool produced = std::any_of(
                    t->label.acts.begin(), t->label.acts.end(),
                    [&](const Action& x) { return x.isOutput() && x.port == ports[i]; });
                if (!produced) continue;
                auto it = reqEdges[target].find(ports[i]);
                if (it == reqEdges[target].end()) continue;
                target = it->second;
                --c[i];
            }
            out.addTransition(from, t->label, stateOf(target, c));
        }
        for (size_t i = 0; i < ports.size(); ++i) {
            if (reqEdges[base].count(ports[i])) continue;  // base accepts it directly
            Label req = Label::single(Action(ports[i], ActionKind::Request));
            if (counts[i] < extraCap) {
                Counts c = counts;
                ++c[i];
                out.addTransition(from, req, stateOf(base, c));
            } else {
                out.addTransition(from, req, from);  // overflow: drop the request
            }
        }
    }
    out.normalize();
    return out;
}

Automaton angelic_completion(const Automaton& a) {
    Automaton out = a;
    auto reqEdges = request_edges(a);
    StateSet reach;
    for (int s = 0; s < a.numStates; ++s) reach.insert(s);
    for (int s : reach) {
        StateSet closure = tau_closure(a, {s});
        for (const auto& r : request_actions(a)) {
            bool enabled = std::any_of(closure.begin(), closure.end(),
                                       [&](int q) { return reqEdges[q].count(r.port) != 0; });
            if (!enabled) out.addTransition(s, Label::single(r), s);
        }
    }
    out.normalize();
    return out;
}

std::optional<InputEnabledWitness> input_enabled_witness(const Automaton& a) {
    auto reqEdges = request_edges(a);
    StateSet visited;
    std::deque<int> queue;
    visited.insert(a.initial);
    queue.push_back(a.initial);
    auto adj = a.adjacency();
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        StateSet closure = tau_closure(a, {s});
        for (const auto& r : request_actions(a)) {
            bool enabled = std::any_of(closure.begin(), closure.end(),
                                       [&](int q) { return reqEdges[q].count(r.port) != 0; });
            if (!enabled) return InputEnabledWitness{s, r};
        }
        for (const Transition* t : adj[s])
            if (visited.insert(t->to).second) queue.push_back(t->to);
    }
    return std::nullopt;
}

bool is_input_enabled(const Automaton& a) { return !input_enabled_witness(a).has_value(); }

Automaton compose_systems(const Automaton& a, const Automaton& b,
                          const std::vector<std::string>& sharedPorts) {
    std::vector<FusionPair> sync;
    auto outputsOn = [](const Automaton& x, const std::string& port) {
        std::vector<Action> acts;
        for (const auto& act : x.outputs)
            if (act.port == port) acts.push_back(act);
        return acts;
    };
    auto hasInput = [](const Automaton& x, const std::string& port) {
        return std::any_of(x.inputs.begin(), x.inputs.end(),
                           [&](const Action& act) { return act.port == port; });
    };
    for (const auto& port : sharedPorts) {
        auto outsA = outputsOn(a, port);
        auto outsB = outputsOn(b, port);
        if (!outsA.empty() && hasInput(b, port)) {
            for (const auto& o : outsA)
                sync.push_back(FusionPair{o, Action(port, ActionKind::Request),
                                          Action(port, ActionKind::Flow, o.data)});
        } else if (!outsB.empty() && hasInput(a, port)) {
            for (const auto& o : outsB)
                sync.push_back(FusionPair{Action(port, ActionKind::Request), o,
                                          Action(port, ActionKind::Flow, o.data)});
        } else {
            throw CompileError("port direction mismatch on shared port " + port);
        }
    }
    Automaton composed = product(a, b, sync);
    std::set<std::string> hiddenPorts(sharedPorts.begin(), sharedPorts.end());
    composed = hide_ports(composed, hiddenPorts);
    return composed.reachable();
}

}  // namespace reo
