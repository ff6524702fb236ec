#pragma once

#include <set>
#include <string>
#include <vector>

#include "reo/automaton.hpp"

namespace reo {

using StateSet = std::set<int>;
using Trace = std::vector<Label>;

std::string trace_text(const Trace& t);

/// States reachable from s via tau transitions (including s itself).
StateSet tau_closure(const Automaton& a, const StateSet& s);

/// States reachable from `from` via sigma with arbitrary tau interleaving.
/// Pure-input and theta steps follow exact label edges; output-like steps
/// follow every edge with the same output projection; delta steps follow
/// delta edges and stay at quiescent states.
StateSet after(const Automaton& a, const StateSet& from, const Trace& sigma);

/// True iff no label containing an output action leaves the tau-closure of s.
bool quiescent(const Automaton& a, int s);

/// Output observations enabled in the set: output projections of enabled
/// output-carrying labels, plus delta for each quiescent member.
std::set<Label> out_labels(const Automaton& a, const StateSet& states);

/// Some member of `states` refuses every label in A as well as tau.
bool refuses(const Automaton& a, const StateSet& states, const std::vector<Label>& labels);

/// The automaton plus a delta self-loop on every quiescent state.
Automaton suspension(const Automaton& a);

/// All suspension traces of length <= maxDepth (exact edge labels).
std::set<Trace> straces(const Automaton& a, int maxDepth);

/// Subset construction over observable labels with tau-closure.
Automaton determinize(const Automaton& a);
bool is_deterministic(const Automaton& a);

/// State renumbering used by write_aut: BFS from the initial state in
/// canonical transition order, unreachable states appended.
std::vector<int> bfs_numbering(const Automaton& a);

/// Aldebaran codec. write_aut renumbers states in BFS order from the initial
/// state and quotes every label, including tau; read_aut accepts unquoted tau.
Automaton read_aut(const std::string& text);
std::string write_aut(const Automaton& a);

struct EquivalenceResult {
    bool equivalent = false;
    std::string detail;      // human-readable reason when inequivalent
    Trace counterexample;    // distinguishing trace when one was found
};

/// Strong bisimilarity via partition refinement (tau treated as a label).
EquivalenceResult strong_bisimilar(const Automaton& a, const Automaton& b);

/// Equality of tau-abstracted trace sets up to the given depth.
EquivalenceResult trace_equivalent(const Automaton& a, const Automaton& b, int depth);

/// Exact structural equality modulo state renaming.
bool isomorphic(const Automaton& a, const Automaton& b);

}  // namespace reo
