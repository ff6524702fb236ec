#include <doctest.h>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "random_ioca.hpp"
#include "reo/adapter.hpp"
#include "reo/ioco.hpp"

using namespace reo;
using testsupport::fixture_ioca;

namespace {

Label in(const char* p) { return Label::single(Action(p, ActionKind::Request)); }
Label out(const char* p) { return Label::single(Action(p, ActionKind::Observe)); }

}  // namespace

TEST_CASE("the added synchronization is detected with its exact witness") {
    Verdict v = ioco_check(fixture_ioca("ex2-impl.reo"), fixture_ioca("ex2-spec.reo"), 4);
    REQUIRE(v.fail());
    REQUIRE(v.witness.size() == 3);
    CHECK(v.witness[0] == in("A"));
    CHECK(v.witness[1] == in("B"));
    CHECK(v.witness[2] == out("A"));
    CHECK(v.observed == Label::delta());
}

TEST_CASE("the swapped channels are detected within depth 3") {
    Verdict v = ioco_check(fixture_ioca("ex1-impl.reo"), fixture_ioca("ex1-spec.reo"), 3);
    CHECK(v.fail());
}

TEST_CASE("every automaton conforms to itself") {
    for (const char* name : {"ex1-spec.reo", "ex1-impl.reo", "ex2-spec.reo", "ex2-impl.reo"}) {
        CAPTURE(name);
        Automaton a = fixture_ioca(name);
        CHECK(ioco_check(a, a, 4).pass());
    }
}

TEST_CASE("conformance is not symmetric here") {
    // The implementation's joint {!B,!C} output is allowed by the spec, but
    // stimulating only ?B must eventually produce !B under the spec.
    Automaton spec = fixture_ioca("ex2-spec.reo");
    Automaton impl = fixture_ioca("ex2-impl.reo");
    CHECK(ioco_check(impl, spec, 4).fail());
    CHECK(ioco_check(spec, impl, 4).fail());
}

TEST_CASE("non-input-enabled implementations are rejected up front") {
    Automaton raw = testsupport::compile_fixture("ex1-spec.reo", SemMode::CA, true,
                                                 RequestStrategy::none());
    Verdict v = ioco_check(raw, fixture_ioca("ex1-spec.reo"), 3);
    CHECK(v.kind == Verdict::Kind::ExecError);
    CHECK(v.reason.find("input-enabled") != std::string::npos);
}

TEST_CASE("alphabet mismatches are rejected up front") {
    Automaton a = fixture_ioca("ex1-spec.reo");
    Automaton b = a;
    b.inputs.pop_back();
    CHECK(ioco_check(b, a, 2).kind == Verdict::Kind::ExecError);
}

TEST_CASE("engine verdicts equal the brute-force oracle on random pairs") {
    std::mt19937_64 rng(2024);
    testsupport::RandomIocaConfig implConfig;
    implConfig.inputEnable = true;
    int agreements = 0, checked = 0, failsSeen = 0;
    while (checked < 60) {
        Automaton spec = testsupport::random_ioca(rng);
        Automaton impl = (rng() % 2) ? testsupport::random_ioca(rng, implConfig)
                                     : angelic_completion(testsupport::mutate_outputs(spec, rng));
        if (spec.inputs.size() != impl.inputs.size()) continue;
        ++checked;
        Verdict v = ioco_check(impl, spec, 5);
        REQUIRE(v.kind != Verdict::Kind::ExecError);
        bool oracleSays = testsupport::oracle_ioco(impl, spec, 5);
        if (v.pass() == oracleSays) ++agreements;
        if (v.fail()) ++failsSeen;
    }
    CHECK(agreements == checked);
    CHECK(failsSeen > 0);  // the sample exercises both verdicts
}

TEST_CASE("generated tests satisfy the test-case invariants") {
    Automaton spec = fixture_ioca("ex2-spec.reo");
    for (uint64_t seed = 0; seed < 20; ++seed) {
        TestCase t = gen_test(spec, 4, seed);
        CAPTURE(seed);
        CHECK(validate_testcase(t).empty());
        CHECK(t.choices.size() == 4);
    }
}

TEST_CASE("identical seeds generate identical tests") {
    Automaton spec = fixture_ioca("ex1-spec.reo");
    TestCase a = gen_test(spec, 4, 7);
    TestCase b = gen_test(spec, 4, 7);
    CHECK(write_aut(a.aut) == write_aut(b.aut));
    CHECK(a.choices == b.choices);
}

TEST_CASE("exhaustive generation enumerates all choice sequences") {
    Automaton spec = fixture_ioca("ex2-spec.reo");
    auto tests = gen_tests_exhaustive(spec, 4);
    CHECK(tests.size() == 256);  // (1 + three inputs)^4
    for (size_t i = 0; i < tests.size(); i += 37) CHECK(validate_testcase(tests[i]).empty());
    CHECK(gen_tests_exhaustive(spec, 4, 10).size() == 10);
}

TEST_CASE("running tests against a conforming simulator always passes") {
    for (const char* name : {"ex1-spec.reo", "ex2-spec.reo"}) {
        CAPTURE(name);
        Automaton spec = fixture_ioca(name);
        auto sut = lts_sut(spec, 99);
        for (uint64_t seed = 0; seed < 50; ++seed) {
            TestCase t = gen_test(spec, 4, seed);
            sut->reset();
            Verdict v = run_test(t, *sut);
            CAPTURE(seed);
            CHECK(v.pass());
        }
    }
}

TEST_CASE("exhaustive suites catch the faulty implementations") {
    struct Pair {
        const char* spec;
        const char* impl;
        int depth;
    };
    for (auto [specName, implName, depth] :
         {Pair{"ex1-spec.reo", "ex1-impl.reo", 3}, Pair{"ex2-spec.reo", "ex2-impl.reo", 4}}) {
        CAPTURE(specName);
        Automaton spec = fixture_ioca(specName);
        Automaton impl = fixture_ioca(implName);
        auto sut = lts_sut(impl, 5);
        int fails = 0;
        for (const TestCase& t : gen_tests_exhaustive(spec, depth)) {
            sut->reset();
            if (run_test(t, *sut).fail()) ++fails;
        }
        CHECK(fails > 0);
    }
}

TEST_CASE("campaigns summarize and keep the first failure") {
    Automaton spec = fixture_ioca("ex2-spec.reo");
    Automaton impl = fixture_ioca("ex2-impl.reo");
    auto sut = lts_sut(impl, 1);
    CampaignSummary s = run_campaign(spec, *sut, 40, 4, 11);
    CHECK(s.passes + s.fails + s.errors == 40);
    if (s.fails > 0) {
        REQUIRE(s.firstFailure.has_value());
        CHECK(s.firstFailure->fail());
    }
    auto sutOk = lts_sut(spec, 1);
    CampaignSummary ok = run_campaign(spec, *sutOk, 40, 4, 11);
    CHECK(ok.passes == 40);
}

TEST_CASE("verdicts survive undeclared outputs as execution errors") {
    Automaton spec = fixture_ioca("ex1-spec.reo");
    TestCase t = gen_test(spec, 3, 0);
    // A SUT speaking a different alphabet.
    struct Alien : SutHandle {
        void send(const Label&) override {}
        std::optional<Label> awaitOutput(int timeoutMs) override {
            if (timeoutMs == 0) return std::nullopt;
            return Label::single(Action("Z", ActionKind::Observe));
        }
        void reset() override {}
    } alien;
    Verdict v = run_test(t, alien);
    CHECK(v.kind == Verdict::Kind::ExecError);
}
