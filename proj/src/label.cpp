#include "reo/label.hpp"

#include <algorithm>
#include <cctype>

namespace reo {

namespace {

// Marker used both for rendering and for the canonical sort order.
const char* kind_marker(ActionKind k) {
    switch (k) {
        case ActionKind::Flow: return "";
        case ActionKind::Request: return "?";
        case ActionKind::Observe: return "!";
        case ActionKind::Block: return "b";
        case ActionKind::Start: return "s";
        case ActionKind::Finish: return "f";
        case ActionKind::Unblock: return "u";
        case ActionKind::ColorFlow: return "w";
        case ActionKind::ColorGiveReason: return "g";
        case ActionKind::ColorRequireReason: return "r";
    }
    return "";
}

int kind_rank(ActionKind k) { return static_cast<int>(k); }

}  // namespace

std::string Action::text() const {
    ActionKind k = kind;
    std::string s;
    switch (k) {
        case ActionKind::Flow:
            s = port;
            break;
        case ActionKind::Request:
        case ActionKind::Observe:
            s = std::string(kind_marker(k)) + port;
            break;
        default:
            s = std::string(kind_marker(k)) + port;
            break;
    }
    if (data) s += "(" + *data + ")";
    return s;
}

bool operator<(const Action& a, const Action& b) {
    if (a.port != b.port) return a.port < b.port;
    if (a.kind != b.kind) return kind_rank(a.kind) < kind_rank(b.kind);
    return a.data < b.data;
}

Label Label::of(std::vector<Action> actions) {
    std::sort(actions.begin(), actions.end());
    actions.erase(std::unique(actions.begin(), actions.end()), actions.end());
    if (actions.empty()) return tau();
    return Label{Kind::Acts, std::move(actions)};
}

bool Label::hasOutput() const {
    return std::any_of(acts.begin(), acts.end(), [](const Action& a) { return a.isOutput(); });
}

bool Label::hasInput() const {
    return std::any_of(acts.begin(), acts.end(), [](const Action& a) { return a.isInput(); });
}

bool Label::isPureInput() const {
    return isActs() &&
           std::all_of(acts.begin(), acts.end(), [](const Action& a) { return a.isInput(); });
}

Label Label::outputProjection() const {
    std::vector<Action> out;
    for (const auto& a : acts)
        if (a.isOutput()) out.push_back(a);
    if (out.empty()) return tau();
    return Label{Kind::Acts, std::move(out)};
}

std::string Label::text() const {
    switch (kind) {
        case Kind::Tau: return "tau";
        case Kind::Delta: return "delta";
        case Kind::Theta: return "theta";
        case Kind::Acts: break;
    }
    std::string s = "{";
    for (size_t i = 0; i < acts.size(); ++i) {
        if (i) s += ",";
        s += acts[i].text();
    }
    s += "}";
    return s;
}

bool operator<(const Label& a, const Label& b) {
    if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    return a.acts < b.acts;
}

bool enumeration_less(const Label& a, const Label& b) {
    auto cls = [](const Label& l) {
        if (l.isDelta()) return 2;
        if (l.isActs() && l.isPureInput()) return 0;
        return 1;
    };
    int ca = cls(a), cb = cls(b);
    if (ca != cb) return ca < cb;
    return a.text() < b.text();
}

namespace {

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}
bool is_atom_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '*';
}

}  // namespace

Action parse_action(const std::string& text) {
    size_t i = 0;
    ActionKind kind = ActionKind::Flow;
    if (i < text.size() && (text[i] == '?' || text[i] == '!')) {
        kind = text[i] == '?' ? ActionKind::Request : ActionKind::Observe;
        ++i;
    }
    size_t start = i;
    if (i >= text.size() || !is_name_start(text[i]))
        throw FormatError("bad action: '" + text + "'");
    while (i < text.size() && is_name_char(text[i])) ++i;
    std::string port = text.substr(start, i - start);
    std::optional<std::string> data;
    if (i < text.size() && text[i] == '(') {
        size_t close = text.find(')', i);
        if (close == std::string::npos || close != text.size() - 1)
            throw FormatError("bad action data in '" + text + "'");
        std::string atom = text.substr(i + 1, close - i - 1);
        if (atom.empty() || !std::all_of(atom.begin(), atom.end(), is_atom_char))
            throw FormatError("bad data atom in '" + text + "'");
        data = atom;
        i = text.size();
    }
    if (i != text.size()) throw FormatError("trailing characters in action '" + text + "'");
    return Action{std::move(port), kind, std::move(data)};
}

Label parse_label(const std::string& text) {
    if (text == "tau") return Label::tau();
    if (text == "delta") return Label::delta();
    if (text == "theta") return Label::theta();
    if (text.size() < 2 || text.front() != '{' || text.back() != '}')
        throw FormatError("bad label: '" + text + "'");
    std::string body = text.substr(1, text.size() - 2);
    if (body.empty()) throw FormatError("empty action set in label");
    std::vector<Action> acts;
    size_t pos = 0;
    while (pos <= body.size()) {
        size_t comma = body.find(',', pos);
        std::string piece =
            comma == std::string::npos ? body.substr(pos) : body.substr(pos, comma - pos);
        acts.push_back(parse_action(piece));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return Label::of(std::move(acts));
}

}  // namespace reo
