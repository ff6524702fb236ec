#include "reo/ioco.hpp"

#include "reo/ioext.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <random>

namespace reo {

namespace {

std::set<std::string> action_texts(const std::vector<Action>& acts) {
    std::set<std::string> out;
    for (const auto& a : acts) out.insert(a.text());
    return out;
}

/// Pure-input labels enabled on exact edges from some member of the set.
std::set<Label> enabled_inputs(const Automaton& a, const StateSet& states, bool composite) {
    std::set<Label> found;
    for (const auto& t : a.transitions) {
        if (!states.count(t.from)) continue;
        if (!t.label.isPureInput()) continue;
        if (!composite && t.label.acts.size() != 1) continue;
        found.insert(t.label);
    }
    return found;
}

}  // namespace

Verdict ioco_check(const Automaton& impl, const Automaton& spec, int maxDepth,
                   const IocoOptions& options) {
    if (action_texts(impl.inputs) != action_texts(spec.inputs) ||
        action_texts(impl.outputs) != action_texts(spec.outputs))
        return Verdict::error("alphabet mismatch between implementation and specification");
    if (auto w = input_enabled_witness(impl))
        return Verdict::error("implementation is not input-enabled: state " +
                              std::to_string(w->state) + " refuses " + w->missing.text());

    Automaton si = suspension(impl);
    Automaton ss = suspension(spec);
    StateSet s0 = tau_closure(ss, {ss.initial});
    StateSet i0 = tau_closure(si, {si.initial});

    struct Node {
        Trace trace;
        StateSet specSet;
        StateSet implSet;
    };
    std::deque<Node> queue;
    std::set<std::pair<StateSet, StateSet>> seen;
    queue.push_back({{}, s0, i0});
    seen.insert({s0, i0});

    while (!queue.empty()) {
        Node n = std::move(queue.front());
        queue.pop_front();

        std::set<Label> outS = out_labels(ss, n.specSet);
        std::set<Label> outI = out_labels(si, n.implSet);
        std::vector<Label> offending;
        std::set_difference(outI.begin(), outI.end(), outS.begin(), outS.end(),
                            std::back_inserter(offending));
        if (!offending.empty()) {
            Label worst = *std::min_element(offending.begin(), offending.end(), enumeration_less);
            return Verdict::failed(n.trace, outS, worst);
        }
        if ((int)n.trace.size() >= maxDepth) continue;

        std::vector<Label> extensions;
        for (const auto& l : enabled_inputs(ss, n.specSet, options.compositeInputs))
            extensions.push_back(l);
        for (const auto& l : outS) extensions.push_back(l);
        std::sort(extensions.begin(), extensions.end(), enumeration_less);
        for (const auto& l : extensions) {
            StateSet specNext = after(ss, n.specSet, {l});
            if (specNext.empty()) continue;
            StateSet implNext = after(si, n.implSet, {l});
            if (implNext.empty()) continue;  // impl cannot follow: no violation down this branch
            if (!seen.insert({specNext, implNext}).second) continue;
            Trace t = n.trace;
            t.push_back(l);
            queue.push_back({std::move(t), std::move(specNext), std::move(implNext)});
        }
    }
    return Verdict::passed();
}

namespace {

std::vector<Label> input_universe(const Automaton& spec) {
    std::vector<Label> inputs;
    for (const auto& a : spec.inputs) inputs.push_back(Label::single(a));
    std::sort(inputs.begin(), inputs.end(), enumeration_less);
    inputs.erase(std::unique(inputs.begin(), inputs.end()), inputs.end());
    return inputs;
}

/// Observation universe: every combination of output actions (one per port).
/// Falls back to the projections occurring in the spec when the alphabet is
/// too wide for the powerset.
std::vector<Label> output_universe(const Automaton& spec) {
    std::map<std::string, std::vector<Action>> byPort;
    for (const auto& a : spec.outputs) byPort[a.port].push_back(a);
    std::size_t combos = 1;
    for (const auto& [port, acts] : byPort) combos *= acts.size() + 1;
    std::set<Label> universe;
    if (combos <= 1024) {
        std::vector<std::vector<Action>> groups;
        for (auto& [port, acts] : byPort) groups.push_back(acts);
        std::vector<Action> pick;
        std::function<void(std::size_t)> build = [&](std::size_t i) {
            if (i == groups.size()) {
                if (!pick.empty()) universe.insert(Label::of(pick));
                return;
            }
            build(i + 1);
            for (const auto& a : groups[i]) {
                pick.push_back(a);
                build(i + 1);
                pick.pop_back();
            }
        };
        build(0);
    }
    for (const auto& t : spec.transitions)
        if (t.label.hasOutput()) universe.insert(t.label.outputProjection());
    return {universe.begin(), universe.end()};
}

/// Build the test automaton for one choice sequence: choice 0 observes, choice
/// i > 0 stimulates the (i-1)-th input. Nodes at the same depth with the same
/// specification subset are shared; exhausted depth and underspecified inputs
/// lead to pass.
TestCase build_test(const Automaton& susp, const std::vector<Label>& inputs,
                    const std::vector<Label>& outputs, const std::vector<int>& choices) {
    TestCase t;
    t.inputLabels = inputs;
    t.outputLabels = outputs;
    t.choices = choices;
    t.passState = t.aut.addState();
    t.failState = t.aut.addState();
    t.aut.initial = t.aut.addState();
    t.aut.inputs = susp.inputs;
    t.aut.outputs = susp.outputs;

    int depth = (int)choices.size();
    std::map<StateSet, int> level;
    level.emplace(tau_closure(susp, {susp.initial}), t.aut.initial);
    for (int d = 0; d < depth; ++d) {
        std::map<StateSet, int> next;
        bool last = d + 1 == depth;
        auto targetFor = [&](StateSet s) {
            if (last || s.empty()) return t.passState;
            auto [it, fresh] = next.try_emplace(std::move(s), 0);
            if (fresh) it->second = t.aut.addState();
            return it->second;
        };
        int c = choices[d];
        for (const auto& [states, id] : level) {
            std::set<Label> outS = out_labels(susp, states);
            if (c > 0) t.aut.addTransition(id, inputs[c - 1], targetFor(after(susp, states, {inputs[c - 1]})));
            for (const auto& o : outputs) {
                if (outS.count(o))
                    t.aut.addTransition(id, o, targetFor(after(susp, states, {o})));
                else
                    t.aut.addTransition(id, o, t.failState);
            }
            if (c == 0) {
                if (outS.count(Label::delta()))
                    t.aut.addTransition(id, Label::theta(),
                                        targetFor(after(susp, states, {Label::delta()})));
                else
                    t.aut.addTransition(id, Label::theta(), t.failState);
            }
        }
        level = std::move(next);
    }
    t.aut.normalize();
    return t;
}

}  // namespace

std::vector<std::string> validate_testcase(const TestCase& t) {
    std::vector<std::string> problems;
    const Automaton& a = t.aut;
    if (t.passState < 0 || t.passState >= a.numStates || t.failState < 0 ||
        t.failState >= a.numStates || t.passState == t.failState) {
        problems.push_back("pass and fail must be distinct valid states");
        return problems;
    }
    if (!is_deterministic(a)) problems.push_back("test automaton is not deterministic");

    auto adj = a.adjacency();
    // Cycle check ignoring anything out of pass/fail.
    std::vector<int> mark(a.numStates, 0);
    std::function<bool(int)> cyclic = [&](int s) -> bool {
        if (s == t.passState || s == t.failState) return false;
        if (mark[s] == 1) return true;
        if (mark[s] == 2) return false;
        mark[s] = 1;
        for (const Transition* tr : adj[s])
            if (cyclic(tr->to)) return true;
        mark[s] = 2;
        return false;
    };
    if (cyclic(a.initial)) problems.push_back("cycle outside the pass/fail states");

    std::set<Label> universe(t.outputLabels.begin(), t.outputLabels.end());
    std::set<Label> inputSet(t.inputLabels.begin(), t.inputLabels.end());
    std::vector<bool> reach(a.numStates, false);
    std::deque<int> q{a.initial};
    reach[a.initial] = true;
    while (!q.empty()) {
        int s = q.front();
        q.pop_front();
        for (const Transition* tr : adj[s])
            if (!reach[tr->to]) {
                reach[tr->to] = true;
                q.push_back(tr->to);
            }
    }
    for (int s = 0; s < a.numStates; ++s) {
        if (!reach[s]) continue;
        if (s == t.passState || s == t.failState) {
            for (const Transition* tr : adj[s])
                if (tr->to != s)
                    problems.push_back("verdict state " + std::to_string(s) + " has an exit edge");
            continue;
        }
        std::set<Label> init;
        for (const Transition* tr : adj[s]) init.insert(tr->label);
        std::set<Label> observe = universe;
        observe.insert(Label::theta());
        if (init == observe) continue;
        bool stimulates = false;
        for (const auto& in : inputSet) {
            std::set<Label> stim = universe;
            stim.insert(in);
            if (init == stim) {
                stimulates = true;
                break;
            }
        }
        if (!stimulates)
            problems.push_back("state " + std::to_string(s) +
                               " neither observes nor stimulates a single input");
    }
    return problems;
}

TestCase gen_test(const Automaton& spec, int maxDepth, uint64_t seed) {
    Automaton susp = suspension(spec);
    auto inputs = input_universe(spec);
    auto outputs = output_universe(spec);

    std::mt19937_64 rng(seed);
    std::vector<int> choices;
    std::map<StateSet, int> level;
    level.emplace(tau_closure(susp, {susp.initial}), 0);
    for (int d = 0; d < maxDepth; ++d) {
        // Stimulate with probability 1/2 when some input is enabled at this level.
        std::vector<int> enabled;
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            bool on = std::any_of(level.begin(), level.end(), [&](const auto& e) {
                return !after(susp, e.first, {inputs[i]}).empty();
            });
            if (on) enabled.push_back((int)i + 1);
        }
        int c = 0;
        if (!enabled.empty() && (rng() & 1))
            c = enabled[rng() % enabled.size()];
        choices.push_back(c);

        std::map<StateSet, int> nextLevel;
        for (const auto& [states, id] : level) {
            std::set<Label> outS = out_labels(susp, states);
            std::vector<Label> moves;
            if (c > 0) moves.push_back(inputs[c - 1]);
            for (const auto& o : outputs)
                if (outS.count(o)) moves.push_back(o);
            if (c == 0 && outS.count(Label::delta())) moves.push_back(Label::delta());
            for (const auto& m : moves) {
                StateSet s = after(susp, states, {m});
                if (!s.empty()) nextLevel.emplace(std::move(s), 0);
            }
        }
        level = std::move(nextLevel);
        if (level.empty()) break;
    }
    while ((int)choices.size() < maxDepth) choices.push_back(0);

    TestCase t = build_test(susp, inputs, outputs, choices);
    t.seed = seed;
    return t;
}

std::vector<TestCase> gen_tests_exhaustive(const Automaton& spec, int maxDepth,
                                           std::size_t maxCount) {
    Automaton susp = suspension(spec);
    auto inputs = input_universe(spec);
    auto outputs = output_universe(spec);

    std::vector<TestCase> tests;
    std::vector<int> choices(maxDepth, 0);
    int radix = (int)inputs.size() + 1;
    while (tests.size() < maxCount) {
        tests.push_back(build_test(susp, inputs, outputs, choices));
        int i = maxDepth - 1;
        while (i >= 0 && choices[i] == radix - 1) choices[i--] = 0;
        if (i < 0) break;
        ++choices[i];
    }
    return tests;
}

namespace {

Verdict run_test_steps(const TestCase& t, SutHandle& sut, const RunOptions& options) {
    std::vector<std::map<Label, int>> edges(t.aut.numStates);
    for (const auto& tr : t.aut.transitions) edges[tr.from].emplace(tr.label, tr.to);
    std::set<std::string> declared;
    for (const auto& a : t.aut.outputs) declared.insert(a.text());

    Trace trace;
    int state = t.aut.initial;
    while (state != t.passState && state != t.failState) {
        const auto& out = edges[state];
        bool observeNode = out.count(Label::theta()) != 0;
        std::optional<Label> obs;
        if (observeNode) {
            obs = sut.awaitOutput(options.timeoutMs);
            if (!obs) obs = Label::theta();
        } else {
            obs = sut.awaitOutput(0);  // a pending output preempts the stimulus
            if (!obs) {
                auto in = std::find_if(out.begin(), out.end(),
                                       [](const auto& e) { return e.first.isPureInput(); });
                if (in == out.end())
                    return Verdict::error("stimulus state without an input edge");
                sut.send(in->first);
                trace.push_back(in->first);
                state = in->second;
                continue;
            }
        }
        if (obs->isActs())
            for (const auto& a : obs->acts)
                if (!declared.count(a.text()))
                    return Verdict::error("undeclared output action " + a.text() + " in " +
                                          obs->text());
        auto it = out.find(*obs);
        if (it == out.end())
            return Verdict::error("no transition for observation " + obs->text());
        if (it->second == t.failState) {
            std::set<Label> allowed;
            for (const auto& [l, to] : out)
                if (to != t.failState && !l.isPureInput()) allowed.insert(l);
            return Verdict::failed(trace, allowed, *obs);
        }
        trace.push_back(*obs);
        state = it->second;
    }
    return Verdict::passed();
}

}  // namespace

Verdict run_test(const TestCase& t, SutHandle& sut, const RunOptions& options) {
    try {
        return run_test_steps(t, sut, options);
    } catch (const std::exception& e) {
        return Verdict::error(e.what());
    }
}

CampaignSummary run_campaign(const Automaton& spec, SutHandle& sut, int nTests, int maxDepth,
                             uint64_t seed, GenPolicy policy, const RunOptions& options) {
    CampaignSummary summary;
    summary.seed = seed;
    std::vector<TestCase> batch;
    if (policy == GenPolicy::Exhaustive)
        batch = gen_tests_exhaustive(spec, maxDepth, (std::size_t)nTests);
    int total = policy == GenPolicy::Exhaustive ? (int)batch.size() : nTests;
    for (int i = 0; i < total; ++i) {
        TestCase t =
            policy == GenPolicy::Exhaustive ? batch[i] : gen_test(spec, maxDepth, seed + i);
        sut.reset();
        Verdict v = run_test(t, sut, options);
        if (v.pass())
            ++summary.passes;
        else if (v.fail())
            ++summary.fails;
        else
            ++summary.errors;
        if (!v.pass() && !summary.firstFailure) summary.firstFailure = v;
    }
    return summary;
}

}  // namespace reo
