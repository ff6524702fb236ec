#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace reo {

struct CircuitError : std::runtime_error {
    int line = 0;
    int column = 0;
    CircuitError(std::string msg, int l = 0, int c = 0)
        : std::runtime_error(std::move(msg)), line(l), column(c) {}
};

struct DataDomain {
    std::vector<std::string> atoms;  // declaration order, no duplicates

    bool singleton() const { return atoms.size() == 1; }
    bool contains(const std::string& a) const;

    static DataDomain agnostic() { return DataDomain{{"*"}}; }
};

enum class ChannelKind { Sync, LossySync, Fifo, SyncDrain, AsyncDrain, Filter, Transform };

const char* channel_kind_name(ChannelKind k);
bool channel_is_directed(ChannelKind k);

struct ChannelSpec {
    ChannelKind kind = ChannelKind::Sync;
    std::array<std::string, 2> ends;  // directed: {source, sink}; drains: both sources
    std::vector<std::string> filterAccept;            // Filter only
    std::map<std::string, std::string> transformTable;  // Transform only
};

enum class NodeKind { Source, Sink, Mixed };
enum class NodeRouting { MergeReplicate, Router };

/// Reference to one end of a channel: channel index and end index (0 or 1).
struct ChannelEnd {
    int channel = 0;
    int end = 0;
    friend bool operator==(const ChannelEnd& a, const ChannelEnd& b) {
        return a.channel == b.channel && a.end == b.end;
    }
};

struct NodeSpec {
    std::string port;
    std::vector<ChannelEnd> sinkEndsIn;    // channel sink ends feeding this node
    std::vector<ChannelEnd> sourceEndsOut; // channel source ends leaving this node
    NodeKind kind = NodeKind::Mixed;
    NodeRouting routing = NodeRouting::MergeReplicate;
};

struct Circuit {
    std::string name;
    DataDomain domain = DataDomain::agnostic();
    std::vector<ChannelSpec> channels;
    std::vector<NodeSpec> nodes;  // derived, sorted by port name
    std::vector<std::string> routerDecls;
    std::vector<std::string> boundaryInputs;
    std::vector<std::string> boundaryOutputs;

    const NodeSpec* findNode(const std::string& port) const;
};

struct Diagnostic {
    std::string subject;  // offending port or channel
    std::string message;
};

/// Parse the textual circuit DSL. Node inference happens here: shared port
/// names join channel ends; `node X : router` switches routing.
Circuit parse_circuit(std::string_view text);

/// Recheck all Circuit invariants; empty result means the circuit is well formed.
std::vector<Diagnostic> validate_circuit(const Circuit& c);

}  // namespace reo
