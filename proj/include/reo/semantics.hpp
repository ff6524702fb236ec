#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "reo/automaton.hpp"
#include "reo/circuit.hpp"
#include "reo/ioext.hpp"

namespace reo {

enum class SemMode { CA, ACA, Coloring };

struct CompileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Internal action name for one channel end; unique per (channel, end).
std::string end_action_name(const std::string& port, int channel, int end);

/// Ground automaton for a primitive channel, labelled by its own port names.
Automaton channel_automaton(const ChannelSpec& spec, SemMode mode, const DataDomain& dom);

/// Ground automaton for a node; labels use end_action_name for channel ends
/// and the bare port name (or ?P/!P in ioMode) for the boundary port.
Automaton node_automaton(const NodeSpec& spec, SemMode mode, const DataDomain& dom, bool ioMode);

/// One synchronization constraint of the product: left may only fire together
/// with right, and the pair is replaced by fused in the combined label.
struct FusionPair {
    Action left;
    Action right;
    Action fused;
};

/// Synchronized product. A transition of one operand fires alone only if its
/// label contains no half-fused action; a joint step must match every fusion
/// pair on both sides. Independent transitions may fire simultaneously.
Automaton product(const Automaton& a, const Automaton& b, const std::vector<FusionPair>& sync);

/// Remove the given actions from every label; labels that become empty turn
/// into tau. Alphabet partitions shrink accordingly.
Automaton hide(const Automaton& a, const std::vector<Action>& internal);

/// Remove every action whose port name is in the set.
Automaton hide_ports(const Automaton& a, const std::set<std::string>& ports);

/// Rename every action on one port, including alphabet entries.
Automaton rename_port(const Automaton& a, const std::string& from, const std::string& to);

/// Full pipeline: instantiate primitives, fold the product over coincident
/// ends, hide internals, prune to the reachable part, and in ioMode set the
/// request/observe alphabets and apply the strategy.
Automaton compile_circuit(const Circuit& c, SemMode mode, bool ioMode = false,
                          const RequestStrategy& strategy = RequestStrategy::none());

}  // namespace reo
