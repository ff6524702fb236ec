#include "reo/semantics.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <utility>

namespace reo {

std::string end_action_name(const std::string& port, int channel, int end) {
    return port + "_" + std::to_string(channel) + "_" + std::to_string(end);
}

namespace {

std::optional<std::string> datum(const DataDomain& dom, const std::string& d) {
    if (dom.singleton()) return std::nullopt;
    return d;
}

Action flow(const std::string& port, const DataDomain& dom, const std::string& d) {
    return Action(port, ActionKind::Flow, datum(dom, d));
}

[[noreturn]] void unsupported(SemMode mode, const std::string& what) {
    const char* m = mode == SemMode::ACA ? "aca" : "coloring";
    throw CompileError(std::string("no ") + m + " semantics for " + what);
}

// Append a chain of transitions from `from`, creating fresh intermediate
// states, ending in `to`.
void chain(Automaton& a, int from, const std::vector<Label>& labels, int to) {
    int cur = from;
    for (size_t i = 0; i < labels.size(); ++i) {
        int next = i + 1 == labels.size() ? to : a.addState();
        a.addTransition(cur, labels[i], next);
        cur = next;
    }
}

Action act(const std::string& port, ActionKind k) { return Action(port, k); }

Label phase(ActionKind k, const std::vector<std::string>& ports) {
    std::vector<Action> acts;
    for (const auto& p : ports) acts.push_back(act(p, k));
    return Label::of(std::move(acts));
}

// The three f-orderings shared by several SyncDrain branches: fA.fB + fB.fA + fA|fB.
void finish_orders(Automaton& a, int from, const std::string& A, const std::string& B, int to) {
    chain(a, from, {phase(ActionKind::Finish, {A}), phase(ActionKind::Finish, {B})}, to);
    chain(a, from, {phase(ActionKind::Finish, {B}), phase(ActionKind::Finish, {A})}, to);
    a.addTransition(from, phase(ActionKind::Finish, {A, B}), to);
}

Automaton aca_channel(const ChannelSpec& spec) {
    const std::string& A = spec.ends[0];
    const std::string& B = spec.ends[1];
    Automaton a;
    int s0 = a.addState();
    auto cycle4 = [&](const std::vector<std::string>& ports, int from, int to) {
        chain(a, from,
              {phase(ActionKind::Block, ports), phase(ActionKind::Start, ports),
               phase(ActionKind::Finish, ports), phase(ActionKind::Unblock, ports)},
              to);
    };
    switch (spec.kind) {
        case ChannelKind::Sync:
            cycle4({A, B}, s0, s0);
            break;
        case ChannelKind::LossySync:
            cycle4({A, B}, s0, s0);
            cycle4({A}, s0, s0);
            break;
        case ChannelKind::SyncDrain: {
            int p = a.addState();
            int q = a.addState();
            a.addTransition(s0, phase(ActionKind::Block, {A, B}), p);
            a.addTransition(q, phase(ActionKind::Unblock, {A, B}), s0);
            // sA . (sB . F + fA . sB . fB + sB|fA . fB), and the A/B mirror.
            for (bool swap : {false, true}) {
                const std::string& X = swap ? B : A;
                const std::string& Y = swap ? A : B;
                int afterSX = a.addState();
                a.addTransition(p, phase(ActionKind::Start, {X}), afterSX);
                int afterSY = a.addState();
                a.addTransition(afterSX, phase(ActionKind::Start, {Y}), afterSY);
                finish_orders(a, afterSY, X, Y, q);
                chain(a, afterSX,
                      {phase(ActionKind::Finish, {X}), phase(ActionKind::Start, {Y}),
                       phase(ActionKind::Finish, {Y})},
                      q);
                int m = a.addState();
                a.addTransition(afterSX, Label::of({act(Y, ActionKind::Start), act(X, ActionKind::Finish)}), m);
                a.addTransition(m, phase(ActionKind::Finish, {Y}), q);
            }
            int afterBoth = a.addState();
            a.addTransition(p, phase(ActionKind::Start, {A, B}), afterBoth);
            finish_orders(a, afterBoth, A, B, q);
            break;
        }
        case ChannelKind::AsyncDrain:
            cycle4({A}, s0, s0);
            cycle4({B}, s0, s0);
            break;
        case ChannelKind::Fifo: {
            int full = a.addState();
            cycle4({A}, s0, full);
            cycle4({B}, full, s0);
            break;
        }
        case ChannelKind::Filter:
        case ChannelKind::Transform:
            unsupported(SemMode::ACA, channel_kind_name(spec.kind));
    }
    return a;
}

constexpr ActionKind W = ActionKind::ColorFlow;
constexpr ActionKind G = ActionKind::ColorGiveReason;
constexpr ActionKind R = ActionKind::ColorRequireReason;

Label coloring(const std::vector<std::string>& ports, const std::vector<ActionKind>& kinds) {
    std::vector<Action> acts;
    for (size_t i = 0; i < ports.size(); ++i) acts.push_back(Action(ports[i], kinds[i]));
    return Label::of(std::move(acts));
}

void sync_coloring(Automaton& a, int s, const std::string& A, const std::string& B) {
    a.addTransition(s, coloring({A, B}, {W, W}), s);
    a.addTransition(s, coloring({A, B}, {R, G}), s);
    a.addTransition(s, coloring({A, B}, {G, R}), s);
    a.addTransition(s, coloring({A, B}, {G, G}), s);
}

Automaton coloring_channel(const ChannelSpec& spec) {
    const std::string& A = spec.ends[0];
    const std::string& B = spec.ends[1];
    Automaton a;
    int s0 = a.addState();
    switch (spec.kind) {
        case ChannelKind::Sync:
        case ChannelKind::SyncDrain:
            sync_coloring(a, s0, A, B);
            break;
        case ChannelKind::LossySync:
            a.addTransition(s0, coloring({A, B}, {W, W}), s0);
            a.addTransition(s0, coloring({A, B}, {W, G}), s0);
            a.addTransition(s0, coloring({A, B}, {G, R}), s0);
            a.addTransition(s0, coloring({A, B}, {G, G}), s0);
            break;
        case ChannelKind::AsyncDrain:
            a.addTransition(s0, coloring({A, B}, {W, G}), s0);
            a.addTransition(s0, coloring({A, B}, {G, W}), s0);
            a.addTransition(s0, coloring({A, B}, {R, W}), s0);
            a.addTransition(s0, coloring({A, B}, {W, R}), s0);
            a.addTransition(s0, coloring({A, B}, {G, G}), s0);
            break;
        case ChannelKind::Fifo: {
            int full = a.addState();
            a.addTransition(s0, coloring({A, B}, {W, R}), full);
            a.addTransition(s0, coloring({A, B}, {W, G}), full);
            a.addTransition(s0, coloring({A, B}, {G, R}), s0);
            a.addTransition(s0, coloring({A, B}, {G, G}), s0);
            a.addTransition(full, coloring({A, B}, {R, W}), s0);
            a.addTransition(full, coloring({A, B}, {G, W}), s0);
            a.addTransition(full, coloring({A, B}, {R, G}), full);
            a.addTransition(full, coloring({A, B}, {G, G}), full);
            break;
        }
        case ChannelKind::Filter:
        case ChannelKind::Transform:
            unsupported(SemMode::Coloring, channel_kind_name(spec.kind));
    }
    return a;
}

Automaton ca_channel(const ChannelSpec& spec, const DataDomain& dom) {
    const std::string& A = spec.ends[0];
    const std::string& B = spec.ends[1];
    Automaton a;
    int s0 = a.addState();
    switch (spec.kind) {
        case ChannelKind::Sync:
            for (const auto& d : dom.atoms)
                a.addTransition(s0, Label::of({flow(A, dom, d), flow(B, dom, d)}), s0);
            break;
        case ChannelKind::LossySync:
            for (const auto& d : dom.atoms) {
                a.addTransition(s0, Label::of({flow(A, dom, d), flow(B, dom, d)}), s0);
                a.addTransition(s0, Label::single(flow(A, dom, d)), s0);
            }
            break;
        case ChannelKind::SyncDrain:
            for (const auto& d1 : dom.atoms)
                for (const auto& d2 : dom.atoms)
                    a.addTransition(s0, Label::of({flow(A, dom, d1), flow(B, dom, d2)}), s0);
            break;
        case ChannelKind::AsyncDrain:
            for (const auto& d : dom.atoms) {
                a.addTransition(s0, Label::single(flow(A, dom, d)), s0);
                a.addTransition(s0, Label::single(flow(B, dom, d)), s0);
            }
            break;
        case ChannelKind::Fifo:
            for (const auto& d : dom.atoms) {
                int full = a.addState();
                a.addTransition(s0, Label::single(flow(A, dom, d)), full);
                a.addTransition(full, Label::single(flow(B, dom, d)), s0);
            }
            break;
        case ChannelKind::Filter:
            for (const auto& d : dom.atoms) {
                bool accept = std::find(spec.filterAccept.begin(), spec.filterAccept.end(), d) !=
                              spec.filterAccept.end();
                if (accept)
                    a.addTransition(s0, Label::of({flow(A, dom, d), flow(B, dom, d)}), s0);
                else
                    a.addTransition(s0, Label::single(flow(A, dom, d)), s0);
            }
            break;
        case ChannelKind::Transform:
            for (const auto& d : dom.atoms)
                a.addTransition(s0,
                                Label::of({flow(A, dom, d), flow(B, dom, spec.transformTable.at(d))}),
                                s0);
            break;
    }
    a.normalize();
    return a;
}

}  // namespace

Automaton channel_automaton(const ChannelSpec& spec, SemMode mode, const DataDomain& dom) {
    switch (mode) {
        case SemMode::CA: return ca_channel(spec, dom);
        case SemMode::ACA: return aca_channel(spec);
        case SemMode::Coloring: return coloring_channel(spec);
    }
    throw CompileError("unknown semantic mode");
}

namespace {

struct NodeEnds {
    std::vector<std::string> ins;   // dataflow into the node
    std::vector<std::string> outs;  // dataflow out of the node
    std::string boundaryPort;       // nonempty for Source/Sink nodes
};

// Participants of a node automaton: channel ends by internal name, plus the
// boundary port itself on the data-producing/consuming side.
NodeEnds node_ends(const NodeSpec& spec) {
    NodeEnds e;
    for (const auto& in : spec.sinkEndsIn) e.ins.push_back(end_action_name(spec.port, in.channel, in.end));
    for (const auto& out : spec.sourceEndsOut)
        e.outs.push_back(end_action_name(spec.port, out.channel, out.end));
    if (spec.kind == NodeKind::Source) {
        e.ins.push_back(spec.port);
        e.boundaryPort = spec.port;
    } else if (spec.kind == NodeKind::Sink) {
        e.outs.push_back(spec.port);
        e.boundaryPort = spec.port;
    }
    return e;
}

Automaton ca_node(const NodeSpec& spec, const NodeEnds& e, const DataDomain& dom) {
    Automaton a;
    int s0 = a.addState();
    for (const auto& in : e.ins) {
        for (const auto& d : dom.atoms) {
            if (spec.routing == NodeRouting::Router) {
                for (const auto& out : e.outs)
                    a.addTransition(s0, Label::of({flow(in, dom, d), flow(out, dom, d)}), s0);
            } else {
                std::vector<Action> acts{flow(in, dom, d)};
                for (const auto& out : e.outs) acts.push_back(flow(out, dom, d));
                a.addTransition(s0, Label::of(std::move(acts)), s0);
            }
        }
    }
    a.normalize();
    return a;
}

Automaton io_node(const NodeSpec& spec, const NodeEnds& e, const DataDomain& dom) {
    // Two-phase boundary encoding: accept a request, then fire the port
    // together with the coinciding channel ends and observe the dataflow.
    Automaton a;
    int s0 = a.addState();
    int s1 = a.addState();
    a.addTransition(s0, Label::single(Action(spec.port, ActionKind::Request)), s1);
    for (const auto& d : dom.atoms) {
        Action obs(spec.port, ActionKind::Observe, datum(dom, d));
        if (spec.kind == NodeKind::Source) {
            if (spec.routing == NodeRouting::Router) {
                for (const auto& out : e.outs)
                    a.addTransition(s1, Label::of({obs, flow(out, dom, d)}), s0);
            } else {
                std::vector<Action> acts{obs};
                for (const auto& out : e.outs) acts.push_back(flow(out, dom, d));
                a.addTransition(s1, Label::of(std::move(acts)), s0);
            }
        } else {  // Sink: merge one incoming end into the observation
            for (const auto& in : e.ins)
                a.addTransition(s1, Label::of({obs, flow(in, dom, d)}), s0);
        }
    }
    a.normalize();
    return a;
}

Automaton aca_node(const NodeSpec& spec, const NodeEnds& e) {
    if (spec.routing == NodeRouting::Router) unsupported(SemMode::ACA, "router node");
    Automaton a;
    int s0 = a.addState();
    if (e.ins.size() == 1) {
        // Replicator pattern: all participants step through the four phases.
        std::vector<std::string> all = e.ins;
        all.insert(all.end(), e.outs.begin(), e.outs.end());
        chain(a, s0,
              {phase(ActionKind::Block, all), phase(ActionKind::Start, all),
               phase(ActionKind::Finish, all), phase(ActionKind::Unblock, all)},
              s0);
    } else if (e.outs.size() == 1) {
        // Merger pattern: block, combined start/finish, unblock per branch.
        const std::string& c = e.outs[0];
        for (const auto& in : e.ins) {
            Label sf = Label::of({act(in, ActionKind::Start), act(c, ActionKind::Start),
                                  act(in, ActionKind::Finish), act(c, ActionKind::Finish)});
            chain(a, s0, {phase(ActionKind::Block, {in, c}), sf, phase(ActionKind::Unblock, {in, c})},
                  s0);
        }
    } else {
        unsupported(SemMode::ACA, "node '" + spec.port + "' with multiple ends on both sides");
    }
    return a;
}

Automaton coloring_node(const NodeSpec& spec, const NodeEnds& e) {
    if (spec.routing == NodeRouting::Router) unsupported(SemMode::Coloring, "router node");
    Automaton a;
    int s0 = a.addState();
    if (e.ins.size() == 1 && e.outs.size() == 1) {
        sync_coloring(a, s0, e.ins[0], e.outs[0]);
    } else if (e.ins.size() == 1 && e.outs.size() == 2) {
        const std::string& A = e.ins[0];
        const std::string& B = e.outs[0];
        const std::string& C = e.outs[1];
        a.addTransition(s0, coloring({A, B, C}, {W, W, W}), s0);
        a.addTransition(s0, coloring({A, B, C}, {R, R, G}), s0);
        a.addTransition(s0, coloring({A, B, C}, {R, G, R}), s0);
        a.addTransition(s0, coloring({A, B, C}, {G, G, G}), s0);
    } else if (e.ins.size() == 2 && e.outs.size() == 1) {
        const std::string& A = e.ins[0];
        const std::string& B = e.ins[1];
        const std::string& C = e.outs[0];
        a.addTransition(s0, coloring({A, B, C}, {W, G, W}), s0);
        a.addTransition(s0, coloring({A, B, C}, {G, W, W}), s0);
        a.addTransition(s0, coloring({A, B, C}, {R, R, G}), s0);
        a.addTransition(s0, coloring({A, B, C}, {G, G, R}), s0);
    } else {
        unsupported(SemMode::Coloring, "node '" + spec.port + "' of this arity");
    }
    return a;
}

}  // namespace

Automaton node_automaton(const NodeSpec& spec, SemMode mode, const DataDomain& dom, bool ioMode) {
    NodeEnds e = node_ends(spec);
    if (ioMode) {
        if (mode != SemMode::CA) throw CompileError("io extension requires ca semantics");
        if (spec.kind != NodeKind::Mixed) return io_node(spec, e, dom);
        return ca_node(spec, e, dom);
    }
    switch (mode) {
        case SemMode::CA: return ca_node(spec, e, dom);
        case SemMode::ACA: return aca_node(spec, e);
        case SemMode::Coloring: return coloring_node(spec, e);
    }
    throw CompileError("unknown semantic mode");
}

namespace {

// Fusion pairs grouped by the connection (left port, right port) they belong to.
struct Connection {
    std::vector<const FusionPair*> pairs;
};

bool contains_action(const std::vector<Action>& acts, const Action& a) {
    return std::find(acts.begin(), acts.end(), a) != acts.end();
}

// Perfect matching of the left actions against the right actions using the
// connection's allowed pairs; appends the fused actions on success.
bool match_connection(const Connection& c, std::vector<Action> left, std::vector<Action> right,
                      std::vector<Action>& fused) {
    if (left.size() != right.size()) return false;
    if (left.empty()) return true;
    Action l = left.back();
    left.pop_back();
    for (const FusionPair* p : c.pairs) {
        if (!(p->left == l)) continue;
        auto it = std::find(right.begin(), right.end(), p->right);
        if (it == right.end()) continue;
        std::vector<Action> rest = right;
        rest.erase(rest.begin() + (it - right.begin()));
        size_t mark = fused.size();
        fused.push_back(p->fused);
        if (match_connection(c, left, rest, fused)) return true;
        fused.resize(mark);
    }
    return false;
}

}  // namespace

Automaton product(const Automaton& a, const Automaton& b, const std::vector<FusionPair>& sync) {
    auto portsOf = [](const Automaton& x) {
        std::set<std::string> ports;
        for (const auto& t : x.transitions)
            for (const auto& act : t.label.acts) ports.insert(act.port);
        for (const auto& act : x.inputs) ports.insert(act.port);
        for (const auto& act : x.outputs) ports.insert(act.port);
        return ports;
    };
    auto portsA = portsOf(a);
    auto portsB = portsOf(b);
    std::map<std::pair<std::string, std::string>, Connection> connections;
    std::set<std::string> leftFusedTexts, rightFusedTexts;
    for (const auto& p : sync) {
        if (!portsA.count(p.left.port))
            throw CompileError("fusion action " + p.left.text() + " absent from left operand");
        if (!portsB.count(p.right.port))
            throw CompileError("fusion action " + p.right.text() + " absent from right operand");
        connections[{p.left.port, p.right.port}].pairs.push_back(&p);
        leftFusedTexts.insert(p.left.text());
        rightFusedTexts.insert(p.right.text());
    }

    auto adjA = a.adjacency();
    auto adjB = b.adjacency();
    auto soloOk = [](const Transition* t, const std::set<std::string>& fusedTexts) {
        for (const auto& act : t->label.acts)
            if (fusedTexts.count(act.text())) return false;
        return true;
    };

    Automaton out;
    out.inputs = a.inputs;
    out.inputs.insert(out.inputs.end(), b.inputs.begin(), b.inputs.end());
    out.outputs = a.outputs;
    out.outputs.insert(out.outputs.end(), b.outputs.begin(), b.outputs.end());

    std::map<std::pair<int, int>, int> ids;
    std::deque<std::pair<int, int>> queue;
    auto stateOf = [&](int sa, int sb) {
        auto [it, fresh] = ids.try_emplace({sa, sb}, (int)ids.size());
        if (fresh) {
            out.addState();
            queue.push_back({sa, sb});
        }
        return it->second;
    };
    out.initial = stateOf(a.initial, b.initial);

    while (!queue.empty()) {
        auto [sa, sb] = queue.front();
        queue.pop_front();
        int from = ids.at({sa, sb});
        for (const Transition* ta : adjA[sa])
            if (soloOk(ta, leftFusedTexts))
                out.addTransition(from, ta->label, stateOf(ta->to, sb));
        for (const Transition* tb : adjB[sb])
            if (soloOk(tb, rightFusedTexts))
                out.addTransition(from, tb->label, stateOf(sa, tb->to));
        for (const Transition* ta : adjA[sa]) {
            if (ta->label.isDelta() || ta->label.isTheta()) continue;
            for (const Transition* tb : adjB[sb]) {
                if (tb->label.isDelta() || tb->label.isTheta()) continue;
                std::vector<Action> fused;
                std::vector<Action> keepA, keepB;
                bool ok = true;
                for (const auto& [key, conn] : connections) {
                    std::vector<Action> left, right;
                    for (const FusionPair* p : conn.pairs) {
                        if (contains_action(ta->label.acts, p->left) &&
                            !contains_action(left, p->left))
                            left.push_back(p->left);
                        if (contains_action(tb->label.acts, p->right) &&
                            !contains_action(right, p->right))
                            right.push_back(p->right);
                    }
                    if (!match_connection(conn, std::move(left), std::move(right), fused)) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                for (const auto& act : ta->label.acts)
                    if (!leftFusedTexts.count(act.text())) keepA.push_back(act);
                for (const auto& act : tb->label.acts)
                    if (!rightFusedTexts.count(act.text())) keepB.push_back(act);
                std::vector<Action> acts = std::move(keepA);
                acts.insert(acts.end(), keepB.begin(), keepB.end());
                acts.insert(acts.end(), fused.begin(), fused.end());
                out.addTransition(from, Label::of(std::move(acts)), stateOf(ta->to, tb->to));
            }
        }
    }
    out.normalize();
    return out;
}

Automaton hide(const Automaton& a, const std::vector<Action>& internal) {
    auto hidden = [&](const Action& act) {
        return std::find(internal.begin(), internal.end(), act) != internal.end();
    };
    Automaton out = a;
    for (auto& t : out.transitions) {
        if (!t.label.isActs()) continue;
        std::vector<Action> kept;
        for (const auto& act : t.label.acts)
            if (!hidden(act)) kept.push_back(act);
        t.label = kept.empty() ? Label::tau() : Label::of(std::move(kept));
    }
    std::erase_if(out.inputs, hidden);
    std::erase_if(out.outputs, hidden);
    out.normalize();
    return out;
}

Automaton hide_ports(const Automaton& a, const std::set<std::string>& ports) {
    Automaton out = a;
    auto hidden = [&](const Action& act) { return ports.count(act.port) != 0; };
    for (auto& t : out.transitions) {
        if (!t.label.isActs()) continue;
        std::vector<Action> kept;
        for (const auto& act : t.label.acts)
            if (!hidden(act)) kept.push_back(act);
        t.label = kept.empty() ? Label::tau() : Label::of(std::move(kept));
    }
    std::erase_if(out.inputs, hidden);
    std::erase_if(out.outputs, hidden);
    out.normalize();
    return out;
}

Automaton rename_port(const Automaton& a, const std::string& from, const std::string& to) {
    Automaton out = a;
    auto ren = [&](Action& act) {
        if (act.port == from) act.port = to;
    };
    for (auto& t : out.transitions) {
        for (auto& act : t.label.acts) ren(act);
        if (t.label.isActs()) t.label = Label::of(std::move(t.label.acts));
    }
    for (auto& act : out.inputs) ren(act);
    for (auto& act : out.outputs) ren(act);
    out.normalize();
    return out;
}

namespace {

std::vector<FusionPair> fusion_pairs_for(const std::string& name, SemMode mode,
                                         const DataDomain& dom) {
    std::vector<FusionPair> pairs;
    auto same = [&](Action act) { return FusionPair{act, act, act}; };
    switch (mode) {
        case SemMode::CA:
            for (const auto& d : dom.atoms) pairs.push_back(same(flow(name, dom, d)));
            break;
        case SemMode::ACA:
            for (ActionKind k :
                 {ActionKind::Block, ActionKind::Start, ActionKind::Finish, ActionKind::Unblock})
                pairs.push_back(same(Action(name, k)));
            break;
        case SemMode::Coloring: {
            auto mk = [&](ActionKind l, ActionKind r, ActionKind f) {
                pairs.push_back(FusionPair{Action(name, l), Action(name, r), Action(name, f)});
            };
            mk(W, W, W);
            mk(G, R, G);
            mk(R, G, G);
            mk(G, G, G);
            break;
        }
    }
    return pairs;
}

}  // namespace

Automaton compile_circuit(const Circuit& c, SemMode mode, bool ioMode,
                          const RequestStrategy& strategy) {
    auto diags = validate_circuit(c);
    if (!diags.empty())
        throw CompileError("invalid circuit: " + diags.front().subject + ": " +
                           diags.front().message);
    if (ioMode && mode != SemMode::CA) throw CompileError("io extension requires ca semantics");

    // A degree-1 boundary node adds no behavior outside io mode: alias the
    // channel end to the port name and skip the node automaton.
    auto aliased = [&](const NodeSpec& n) {
        return !ioMode && n.kind != NodeKind::Mixed &&
               n.sinkEndsIn.size() + n.sourceEndsOut.size() == 1;
    };

    struct Part {
        Automaton aut;
        std::set<std::string> endNames;  // internal end names this part exposes
    };
    std::vector<Part> parts;
    std::set<std::string> allEndNames;

    for (int i = 0; i < (int)c.channels.size(); ++i) {
        const auto& ch = c.channels[i];
        Part part;
        part.aut = channel_automaton(ch, mode, c.domain);
        for (int e = 0; e < 2; ++e) {
            const NodeSpec* node = c.findNode(ch.ends[e]);
            if (node && aliased(*node)) continue;  // keep the bare port name
            std::string internal = end_action_name(ch.ends[e], i, e);
            part.aut = rename_port(part.aut, ch.ends[e], internal);
            part.endNames.insert(internal);
            allEndNames.insert(internal);
        }
        parts.push_back(std::move(part));
    }
    for (const auto& n : c.nodes) {
        if (aliased(n)) continue;
        Part part;
        part.aut = node_automaton(n, mode, c.domain, ioMode);
        for (const auto& e : n.sinkEndsIn) part.endNames.insert(end_action_name(n.port, e.channel, e.end));
        for (const auto& e : n.sourceEndsOut)
            part.endNames.insert(end_action_name(n.port, e.channel, e.end));
        parts.push_back(std::move(part));
    }

    if (parts.empty()) throw CompileError("empty circuit");
    Automaton acc = parts[0].aut;
    std::set<std::string> accNames = parts[0].endNames;
    for (size_t i = 1; i < parts.size(); ++i) {
        std::vector<FusionPair> sync;
        for (const auto& name : parts[i].endNames) {
            if (!accNames.count(name)) continue;
            auto pairs = fusion_pairs_for(name, mode, c.domain);
            sync.insert(sync.end(), pairs.begin(), pairs.end());
        }
        acc = product(acc, parts[i].aut, sync);
        accNames.insert(parts[i].endNames.begin(), parts[i].endNames.end());
        acc = acc.reachable();
    }
    acc = hide_ports(acc, allEndNames);
    acc = acc.reachable();

    if (ioMode) {
        acc.inputs.clear();
        acc.outputs.clear();
        auto boundary = c.boundaryInputs;
        boundary.insert(boundary.end(), c.boundaryOutputs.begin(), c.boundaryOutputs.end());
        for (const auto& p : boundary) {
            acc.inputs.push_back(Action(p, ActionKind::Request));
            for (const auto& d : c.domain.atoms)
                acc.outputs.push_back(Action(p, ActionKind::Observe, datum(c.domain, d)));
        }
        acc.normalize();
        if (strategy.kind != RequestStrategy::Kind::None) acc = apply_strategy(acc, strategy);
    }
    return acc;
}

}  // namespace reo
