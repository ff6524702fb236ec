#include "reo/automaton.hpp"

#include <algorithm>
#include <deque>

namespace reo {

void Automaton::normalize() {
    std::sort(transitions.begin(), transitions.end());
    transitions.erase(std::unique(transitions.begin(), transitions.end()), transitions.end());
    std::sort(inputs.begin(), inputs.end());
    inputs.erase(std::unique(inputs.begin(), inputs.end()), inputs.end());
    std::sort(outputs.begin(), outputs.end());
    outputs.erase(std::unique(outputs.begin(), outputs.end()), outputs.end());
}

std::set<std::string> Automaton::actionTexts() const {
    std::set<std::string> out;
    for (const auto& t : transitions)
        for (const auto& a : t.label.acts) out.insert(a.text());
    for (const auto& a : inputs) out.insert(a.text());
    for (const auto& a : outputs) out.insert(a.text());
    return out;
}

std::vector<std::vector<const Transition*>> Automaton::adjacency() const {
    std::vector<std::vector<const Transition*>> adj(numStates);
    for (const auto& t : transitions) adj[t.from].push_back(&t);
    for (auto& v : adj)
        std::sort(v.begin(), v.end(),
                  [](const Transition* a, const Transition* b) { return *a < *b; });
    return adj;
}

Automaton Automaton::reachable() const {
    std::vector<int> renum(numStates, -1);
    auto adj = adjacency();
    std::deque<int> queue;
    Automaton out;
    out.inputs = inputs;
    out.outputs = outputs;
    if (numStates == 0) return out;
    renum[initial] = out.addState();
    queue.push_back(initial);
    std::vector<Transition> kept;
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (const Transition* t : adj[s]) {
            if (renum[t->to] < 0) {
                renum[t->to] = out.addState();
                queue.push_back(t->to);
            }
            kept.push_back(Transition{renum[s], t->label, renum[t->to]});
        }
    }
    out.initial = 0;
    out.transitions = std::move(kept);
    out.normalize();
    return out;
}

}  // namespace reo
