#pragma once

#include <set>
#include <string>
#include <vector>

#include "reo/label.hpp"

namespace reo {

struct Transition {
    int from = 0;
    Label label;
    int to = 0;

    friend bool operator==(const Transition& a, const Transition& b) {
        return a.from == b.from && a.to == b.to && a.label == b.label;
    }
    friend bool operator<(const Transition& a, const Transition& b) {
        if (a.from != b.from) return a.from < b.from;
        if (!(a.label == b.label)) return a.label < b.label;
        return a.to < b.to;
    }
};

/// One automaton representation serving CA, ACA, coloring and IO modes.
/// States are dense ids 0..numStates-1. The inputs/outputs vectors hold the
/// L_I / L_U action partition; both are empty outside IO mode.
struct Automaton {
    int numStates = 0;
    int initial = 0;
    std::vector<Transition> transitions;
    std::vector<Action> inputs;
    std::vector<Action> outputs;

    int addState() { return numStates++; }
    void addTransition(int from, Label label, int to) {
        transitions.push_back(Transition{from, std::move(label), to});
    }

    /// Sort and deduplicate transitions.
    void normalize();

    /// All action texts occurring in labels or declared alphabets.
    std::set<std::string> actionTexts() const;

    /// Outgoing transitions grouped by source state.
    std::vector<std::vector<const Transition*>> adjacency() const;

    /// Reachable part, states renumbered in BFS discovery order (initial = 0,
    /// neighbors explored in canonical transition order).
    Automaton reachable() const;
};

}  // namespace reo
