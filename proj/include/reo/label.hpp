#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace reo {

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Kind of an observable action on a port. Flow is plain dataflow (CA mode),
/// Request/Observe are the ?/! decorations of IO mode, Block..Unblock are the
/// four ACA phases, Color* are the three connector colors.
enum class ActionKind {
    Flow,
    Request,
    Observe,
    Block,
    Start,
    Finish,
    Unblock,
    ColorFlow,
    ColorGiveReason,
    ColorRequireReason,
};

struct Action {
    std::string port;
    ActionKind kind = ActionKind::Flow;
    std::optional<std::string> data;

    Action() = default;
    Action(std::string p, ActionKind k = ActionKind::Flow,
           std::optional<std::string> d = std::nullopt)
        : port(std::move(p)), kind(k), data(std::move(d)) {}

    /// Canonical rendering: "?A", "!B(1)", "bA", "wA", "A".
    std::string text() const;

    bool isInput() const { return kind == ActionKind::Request; }
    bool isOutput() const { return kind == ActionKind::Observe; }

    // Sort key per the canonical label grammar: port, then kind marker, then data.
    friend bool operator==(const Action& a, const Action& b) {
        return a.port == b.port && a.kind == b.kind && a.data == b.data;
    }
    friend bool operator<(const Action& a, const Action& b);
};

struct Label {
    enum class Kind { Acts, Tau, Delta, Theta };

    Kind kind = Kind::Tau;
    std::vector<Action> acts;  // sorted, duplicate-free; nonempty iff kind == Acts

    static Label tau() { return Label{Kind::Tau, {}}; }
    static Label delta() { return Label{Kind::Delta, {}}; }
    static Label theta() { return Label{Kind::Theta, {}}; }
    static Label of(std::vector<Action> actions);
    static Label single(Action a) { return of({std::move(a)}); }

    bool isTau() const { return kind == Kind::Tau; }
    bool isDelta() const { return kind == Kind::Delta; }
    bool isTheta() const { return kind == Kind::Theta; }
    bool isActs() const { return kind == Kind::Acts; }

    bool hasOutput() const;
    bool hasInput() const;
    /// Label consisting solely of Request actions.
    bool isPureInput() const;
    /// True for delta and for any label containing an Observe action; such
    /// labels count as output observations.
    bool isOutputLike() const { return isDelta() || hasOutput(); }
    /// The label restricted to its Observe actions.
    Label outputProjection() const;

    /// Canonical text: "{?A,!B(1),C}", "tau", "delta", "theta".
    std::string text() const;

    friend bool operator==(const Label& a, const Label& b) {
        return a.kind == b.kind && a.acts == b.acts;
    }
    friend bool operator<(const Label& a, const Label& b);
};

/// Enumeration order used by the conformance checker and test generation:
/// pure-input labels first, then output-like labels, then delta; alphabetical
/// within a class.
bool enumeration_less(const Label& a, const Label& b);

/// Parse an action in canonical syntax. Bare names read back as Flow actions.
Action parse_action(const std::string& text);

/// Parse a label in canonical syntax (throws FormatError).
Label parse_label(const std::string& text);

}  // namespace reo
