#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reo/automaton.hpp"

namespace reo {

/// Thrown when a strategy expansion would exceed the configured state ceiling.
struct ExplosionError : std::runtime_error {
    int ceiling;
    explicit ExplosionError(int c)
        : std::runtime_error("state count exceeds ceiling " + std::to_string(c)), ceiling(c) {}
};

/// How a boundary port handles a request arriving while one is already pending.
struct RequestStrategy {
    enum class Kind { None, Ignore, Overwrite, Queue };
    enum class Overflow { IgnoreOverflow, OverwriteOverflow };

    Kind kind = Kind::None;
    int bound = 2;  // Queue only: total pending capacity per port
    Overflow overflow = Overflow::IgnoreOverflow;

    static RequestStrategy none() { return RequestStrategy{}; }
    static RequestStrategy ignore() { return RequestStrategy{Kind::Ignore, 1, Overflow::IgnoreOverflow}; }
    static RequestStrategy overwrite() {
        return RequestStrategy{Kind::Overwrite, 1, Overflow::OverwriteOverflow};
    }
    static RequestStrategy queue(int bound, Overflow o = Overflow::IgnoreOverflow) {
        return RequestStrategy{Kind::Queue, bound, o};
    }
};

/// Weave per-port pending-request bookkeeping into the state space.
Automaton apply_strategy(const Automaton& a, const RequestStrategy& strategy,
                         int stateCeiling = 1 << 20);

/// Add a {?P} self-loop to every reachable state where ?P is not enabled.
Automaton angelic_completion(const Automaton& a);

struct InputEnabledWitness {
    int state = 0;
    Action missing;
};

/// nullopt iff every singleton input label is enabled in every reachable state.
std::optional<InputEnabledWitness> input_enabled_witness(const Automaton& a);
bool is_input_enabled(const Automaton& a);

/// Parallel composition synchronizing one side's !P with the other's ?P on the
/// shared ports, then internalizing the synchronized actions to tau.
Automaton compose_systems(const Automaton& a, const Automaton& b,
                          const std::vector<std::string>& sharedPorts);

}  // namespace reo
