#include "reo/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace reo {

bool DataDomain::contains(const std::string& a) const {
    return std::find(atoms.begin(), atoms.end(), a) != atoms.end();
}

const char* channel_kind_name(ChannelKind k) {
    switch (k) {
        case ChannelKind::Sync: return "sync";
        case ChannelKind::LossySync: return "lossysync";
        case ChannelKind::Fifo: return "fifo";
        case ChannelKind::SyncDrain: return "syncdrain";
        case ChannelKind::AsyncDrain: return "asyncdrain";
        case ChannelKind::Filter: return "filter";
        case ChannelKind::Transform: return "transform";
    }
    return "?";
}

bool channel_is_directed(ChannelKind k) {
    return k != ChannelKind::SyncDrain && k != ChannelKind::AsyncDrain;
}

const NodeSpec* Circuit::findNode(const std::string& port) const {
    for (const auto& n : nodes)
        if (n.port == port) return &n;
    return nullptr;
}

namespace {

struct Token {
    std::string text;
    int line = 0;
    int col = 0;
};

class Lexer {
  public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip();
        Token tok{"", line_, col_};
        if (pos_ >= text_.size()) return tok;  // empty text = EOF
        char c = text_[pos_];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '*') {
            while (pos_ < text_.size()) {
                char d = text_[pos_];
                if (!(std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '*')) break;
                tok.text += d;
                advance();
            }
            return tok;
        }
        if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            advance();
            advance();
            tok.text = "->";
            return tok;
        }
        if (std::string("{},:;").find(c) != std::string::npos) {
            tok.text = std::string(1, c);
            advance();
            return tok;
        }
        throw CircuitError(std::string("unexpected character '") + c + "'", line_, col_);
    }

  private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void skip() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
  public:
    explicit Parser(std::string_view text) : lex_(text) { bump(); }

    Circuit parse() {
        Circuit c;
        expect("circuit");
        c.name = ident("circuit name");
        expect("{");
        bool domainSeen = false;
        while (cur_.text != "}") {
            if (cur_.text.empty()) fail("unexpected end of input, missing '}'");
            if (cur_.text == ";") {
                bump();
                continue;
            }
            if (cur_.text == "domain") {
                if (domainSeen) fail("duplicate domain clause");
                if (!c.channels.empty()) fail("domain clause must precede channels");
                domainSeen = true;
                bump();
                c.domain.atoms = atomSet();
                continue;
            }
            if (cur_.text == "node") {
                bump();
                std::string port = ident("node port");
                expect(":");
                expect("router");
                c.routerDecls.push_back(port);
                continue;
            }
            parseChannel(c);
        }
        expect("}");
        if (!cur_.text.empty()) fail("trailing input after circuit");
        finish(c);
        return c;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) {
        throw CircuitError(msg, cur_.line, cur_.col);
    }
    void bump() { cur_ = lex_.next(); }
    void expect(const std::string& t) {
        if (cur_.text != t) fail("expected '" + t + "', got '" + cur_.text + "'");
        bump();
    }
    std::string ident(const char* what) {
        const std::string& t = cur_.text;
        if (t.empty() || !std::isalpha(static_cast<unsigned char>(t[0])))
            fail(std::string("expected ") + what);
        std::string s = t;
        bump();
        return s;
    }
    std::string atom() {
        if (cur_.text.empty() || cur_.text == "," || cur_.text == "}")
            fail("expected data atom");
        std::string s = cur_.text;
        bump();
        return s;
    }
    std::vector<std::string> atomSet() {
        expect("{");
        std::vector<std::string> atoms;
        atoms.push_back(atom());
        while (cur_.text == ",") {
            bump();
            atoms.push_back(atom());
        }
        expect("}");
        std::set<std::string> seen(atoms.begin(), atoms.end());
        if (seen.size() != atoms.size()) fail("duplicate atom");
        return atoms;
    }

    void parseChannel(Circuit& c) {
        static const std::map<std::string, ChannelKind> kinds = {
            {"sync", ChannelKind::Sync},           {"lossysync", ChannelKind::LossySync},
            {"fifo", ChannelKind::Fifo},           {"syncdrain", ChannelKind::SyncDrain},
            {"asyncdrain", ChannelKind::AsyncDrain}, {"filter", ChannelKind::Filter},
            {"transform", ChannelKind::Transform},
        };
        auto it = kinds.find(cur_.text);
        if (it == kinds.end()) fail("expected channel or node declaration, got '" + cur_.text + "'");
        ChannelSpec ch;
        ch.kind = it->second;
        bump();
        ch.ends[0] = ident("port name");
        if (channel_is_directed(ch.kind)) expect("->");
        ch.ends[1] = ident("port name");
        if (ch.ends[0] == ch.ends[1]) fail("channel ends must be distinct ports");
        if (ch.kind == ChannelKind::Filter) {
            expect("when");
            ch.filterAccept = atomSet();
        } else if (ch.kind == ChannelKind::Transform) {
            expect("map");
            expect("{");
            while (true) {
                std::string from = atom();
                expect(":");
                std::string to = atom();
                if (ch.transformTable.count(from)) fail("duplicate transform entry for " + from);
                ch.transformTable[from] = to;
                if (cur_.text != ",") break;
                bump();
            }
            expect("}");
        }
        for (const auto& prev : c.channels)
            if (prev.kind == ch.kind && prev.ends == ch.ends)
                fail("duplicate channel declaration");
        c.channels.push_back(std::move(ch));
    }

    void finish(Circuit& c) {
        // Data clauses against the domain.
        for (const auto& ch : c.channels) {
            for (const auto& a : ch.filterAccept)
                if (!c.domain.contains(a))
                    throw CircuitError("unknown atom '" + a + "' in filter clause");
            if (ch.kind == ChannelKind::Transform) {
                for (const auto& [from, to] : ch.transformTable) {
                    if (!c.domain.contains(from))
                        throw CircuitError("unknown atom '" + from + "' in transform clause");
                    if (!c.domain.contains(to))
                        throw CircuitError("unknown atom '" + to + "' in transform clause");
                }
                for (const auto& a : c.domain.atoms)
                    if (!ch.transformTable.count(a))
                        throw CircuitError("transform table not total: missing atom '" + a + "'");
            }
        }

        // Node inference from shared port names.
        std::map<std::string, NodeSpec> nodes;
        for (int i = 0; i < static_cast<int>(c.channels.size()); ++i) {
            const auto& ch = c.channels[i];
            for (int e = 0; e < 2; ++e) {
                NodeSpec& n = nodes[ch.ends[e]];
                n.port = ch.ends[e];
                bool isSourceEnd = !channel_is_directed(ch.kind) || e == 0;
                if (isSourceEnd)
                    n.sourceEndsOut.push_back(ChannelEnd{i, e});
                else
                    n.sinkEndsIn.push_back(ChannelEnd{i, e});
            }
        }
        for (auto& [port, n] : nodes) {
            n.kind = n.sinkEndsIn.empty()    ? NodeKind::Source
                     : n.sourceEndsOut.empty() ? NodeKind::Sink
                                               : NodeKind::Mixed;
        }
        for (const auto& port : c.routerDecls) {
            auto it = nodes.find(port);
            if (it == nodes.end()) continue;  // flagged by validate_circuit
            if (it->second.sourceEndsOut.size() < 2)
                throw CircuitError("router annotation on node '" + port +
                                   "' with fewer than 2 outgoing ends");
            it->second.routing = NodeRouting::Router;
        }
        for (auto& [port, n] : nodes) c.nodes.push_back(std::move(n));
        for (const auto& n : c.nodes) {
            if (n.kind == NodeKind::Source) c.boundaryInputs.push_back(n.port);
            if (n.kind == NodeKind::Sink) c.boundaryOutputs.push_back(n.port);
        }
    }

    Lexer lex_;
    Token cur_;
};

}  // namespace

Circuit parse_circuit(std::string_view text) { return Parser(text).parse(); }

std::vector<Diagnostic> validate_circuit(const Circuit& c) {
    std::vector<Diagnostic> diags;
    auto add = [&](std::string subject, std::string msg) {
        diags.push_back(Diagnostic{std::move(subject), std::move(msg)});
    };

    if (c.domain.atoms.empty()) add(c.name, "empty data domain");
    std::set<std::string> atomSet(c.domain.atoms.begin(), c.domain.atoms.end());
    if (atomSet.size() != c.domain.atoms.size()) add(c.name, "duplicate atoms in domain");

    // Every channel-end port appears in exactly one node.
    std::map<std::string, int> portNodeCount;
    for (const auto& n : c.nodes) portNodeCount[n.port]++;
    for (const auto& ch : c.channels)
        for (const auto& p : ch.ends)
            if (portNodeCount[p] != 1)
                add(p, "port must appear in exactly one node");

    // Node kind consistency.
    for (const auto& n : c.nodes) {
        NodeKind expect = n.sinkEndsIn.empty()    ? NodeKind::Source
                          : n.sourceEndsOut.empty() ? NodeKind::Sink
                                                    : NodeKind::Mixed;
        if (n.kind != expect) add(n.port, "node kind inconsistent with its channel ends");
        if (n.routing == NodeRouting::Router && n.sourceEndsOut.size() < 2)
            add(n.port, "router node needs at least 2 outgoing ends");
    }

    // Boundary sets: derived from node kinds and disjoint.
    std::set<std::string> ins(c.boundaryInputs.begin(), c.boundaryInputs.end());
    std::set<std::string> outs(c.boundaryOutputs.begin(), c.boundaryOutputs.end());
    for (const auto& p : ins)
        if (outs.count(p))
            add(p, "boundary node may not serve as both input and output port");
    for (const auto& n : c.nodes) {
        if (n.kind == NodeKind::Source && !ins.count(n.port))
            add(n.port, "source node missing from boundary inputs");
        if (n.kind == NodeKind::Sink && !outs.count(n.port))
            add(n.port, "sink node missing from boundary outputs");
    }

    for (const auto& port : c.routerDecls)
        if (!c.findNode(port)) add(port, "unknown node");

    return diags;
}

}  // namespace reo
