#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "reo/automaton.hpp"
#include "reo/lts.hpp"

namespace reo {

struct Verdict {
    enum class Kind { Pass, Fail, ExecError };

    Kind kind = Kind::Pass;
    Trace witness;            // trace leading to the violation (Fail)
    std::set<Label> expected; // allowed observations at the violation point
    Label observed;           // the offending observation
    std::string reason;       // ExecError only

    bool pass() const { return kind == Kind::Pass; }
    bool fail() const { return kind == Kind::Fail; }

    static Verdict passed() { return Verdict{}; }
    static Verdict failed(Trace witness, std::set<Label> expected, Label observed) {
        return Verdict{Kind::Fail, std::move(witness), std::move(expected), std::move(observed), ""};
    }
    static Verdict error(std::string reason) {
        return Verdict{Kind::ExecError, {}, {}, {}, std::move(reason)};
    }
};

struct IocoOptions {
    /// Offer composite request labels as stimuli; by default only singleton
    /// requests are enumerated.
    bool compositeInputs = false;
};

/// Bounded exhaustive check of out(impl after sigma) ⊆ out(spec after sigma)
/// over the specification's suspension traces up to maxDepth, enumerated
/// shortest-first in canonical label order.
Verdict ioco_check(const Automaton& impl, const Automaton& spec, int maxDepth,
                   const IocoOptions& options = {});

/// A finite deterministic acyclic automaton with pass/fail sinks. Every
/// non-sink state either stimulates one input or observes; all output labels
/// of the universe (plus theta at observe states) have an outgoing edge.
struct TestCase {
    Automaton aut;
    int passState = -1;
    int failState = -1;
    std::vector<Label> inputLabels;   // singleton request labels
    std::vector<Label> outputLabels;  // output-observation universe (theta excluded)
    uint64_t seed = 0;
    std::vector<int> choices;  // per-depth choice: 0 = observe, i>0 = stimulate input i-1
};

/// Empty result iff the test case satisfies the test-case invariants.
std::vector<std::string> validate_testcase(const TestCase& t);

enum class GenPolicy { Random, Exhaustive };

TestCase gen_test(const Automaton& spec, int maxDepth, uint64_t seed);

/// All tests for every choice sequence (observe or one stimulus per depth
/// level), capped at maxCount.
std::vector<TestCase> gen_tests_exhaustive(const Automaton& spec, int maxDepth,
                                           std::size_t maxCount = SIZE_MAX);

/// Bridge to a system under test; implementations live in the adapter module.
class SutHandle {
  public:
    virtual ~SutHandle() = default;
    virtual void send(const Label& input) = 0;
    /// Next output, or nullopt after timeoutMs of quiescence. timeoutMs = 0
    /// checks for an already pending output without waiting.
    virtual std::optional<Label> awaitOutput(int timeoutMs) = 0;
    virtual void reset() = 0;
};

struct RunOptions {
    int timeoutMs = 2000;  // quiescence timeout at observe states
};

/// Execute a test case against a SUT per the run rules; a pending output
/// preempts a stimulus.
Verdict run_test(const TestCase& t, SutHandle& sut, const RunOptions& options = {});

struct CampaignSummary {
    int passes = 0;
    int fails = 0;
    int errors = 0;
    std::optional<Verdict> firstFailure;
    uint64_t seed = 0;
};

CampaignSummary run_campaign(const Automaton& spec, SutHandle& sut, int nTests, int maxDepth,
                             uint64_t seed, GenPolicy policy = GenPolicy::Random,
                             const RunOptions& options = {});

}  // namespace reo
