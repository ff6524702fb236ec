#include <doctest.h>

#include "fixtures.hpp"
#include "reo/adapter.hpp"
#include "reo/ioco.hpp"

using namespace reo;
using testsupport::fixture_ioca;

namespace {

Label in(const char* p) { return Label::single(Action(p, ActionKind::Request)); }
Label out(const char* p) { return Label::single(Action(p, ActionKind::Observe)); }

}  // namespace

TEST_CASE("wire codec round-trips all message kinds") {
    CHECK(wire_encode_input(in("A")) == "INPUT {?A}");
    CHECK(wire_encode_output(parse_label("{!A,!C}")) == "OUTPUT {!A,!C}");

    WireMessage m = wire_decode("INPUT {?A,?B}");
    CHECK(m.kind == WireMessage::Kind::Input);
    CHECK(m.label.text() == "{?A,?B}");
    CHECK(wire_decode("OUTPUT {!B}").label == out("B"));
    CHECK(wire_decode("RESET").kind == WireMessage::Kind::Reset);
    CHECK(wire_decode("ACK").kind == WireMessage::Kind::Ack);
    WireMessage e = wire_decode("ERROR something went wrong");
    CHECK(e.kind == WireMessage::Kind::Error);
    CHECK(e.text == "something went wrong");
    CHECK(wire_decode("OUTPUT {!B}\r").label == out("B"));  // tolerate CRLF
    CHECK_THROWS_AS(wire_decode("BOGUS line"), AdapterError);
}

TEST_CASE("in-process simulator follows exact edges and emits pure outputs") {
    Automaton spec = fixture_ioca("ex2-spec.reo");
    auto sut = lts_sut(spec, 3);
    CHECK(!sut->awaitOutput(1000).has_value());  // initial state is quiescent
    sut->send(in("A"));
    auto o = sut->awaitOutput(1000);
    REQUIRE(o.has_value());
    CHECK(o->text() == "{!A}");  // data enters the circuit
    CHECK(!sut->awaitOutput(0).has_value());  // zero-timeout probe never emits
    sut->reset();
    CHECK(!sut->awaitOutput(1000).has_value());
    CHECK_THROWS_AS(sut->send(parse_label("{?Z}")), AdapterError);
}

TEST_CASE("simulator choices are seed-deterministic") {
    Automaton spec = fixture_ioca("ex2-spec.reo");
    for (uint64_t seed : {1ull, 17ull}) {
        auto s1 = lts_sut(spec, seed);
        auto s2 = lts_sut(spec, seed);
        for (int i = 0; i < 5; ++i) {
            s1->send(in("A"));
            s2->send(in("A"));
            s1->send(in("B"));
            s2->send(in("B"));
            auto o1 = s1->awaitOutput(10), o2 = s2->awaitOutput(10);
            REQUIRE(o1.has_value());
            REQUIRE(o2.has_value());
            CHECK(o1->text() == o2->text());
            while ((o1 = s1->awaitOutput(10))) o2 = s2->awaitOutput(10);
            s1->reset();
            s2->reset();
        }
    }
}

TEST_CASE("tcp server speaks the line protocol") {
    Automaton spec = fixture_ioca("ex2-spec.reo");
    ServeOptions options;
    options.port = 0;
    options.emissionDelayMs = 20;
    options.seed = 3;
    SutServer server(spec, options);
    REQUIRE(server.actualPort() > 0);

    auto sut = tcp_sut("127.0.0.1", server.actualPort());
    sut->reset();  // RESET/ACK round trip
    sut->send(in("A"));
    auto o = sut->awaitOutput(2000);
    REQUIRE(o.has_value());
    CHECK(o->text() == "{!A}");
    sut->reset();
    CHECK(!sut->awaitOutput(200).has_value());  // quiescent again after reset

    SUBCASE("refused inputs surface as errors") {
        Automaton strict = spec;
        // ?Z is not in the automaton: server answers ERROR, client throws.
        sut->send(parse_label("{?Z}"));
        CHECK_THROWS_AS(sut->awaitOutput(500), AdapterError);
    }
    server.stop();
}

TEST_CASE("tcp and in-process campaigns produce identical verdicts") {
    Automaton spec = fixture_ioca("ex2-spec.reo");
    Automaton impl = fixture_ioca("ex2-impl.reo");
    ServeOptions options;
    options.port = 0;
    options.emissionDelayMs = 50;
    options.seed = 0;
    SutServer server(impl, options);
    auto remote = tcp_sut("127.0.0.1", server.actualPort());
    auto local = lts_sut(impl, 0);

    RunOptions run;
    run.timeoutMs = 2000;
    for (uint64_t seed = 100; seed < 104; ++seed) {
        TestCase t = gen_test(spec, 3, seed);
        local->reset();
        remote->reset();
        Verdict vl = run_test(t, *local, run);
        Verdict vr = run_test(t, *remote, run);
        CAPTURE(seed);
        CHECK(vl.kind == vr.kind);
        CHECK(trace_text(vl.witness) == trace_text(vr.witness));
        CHECK(vl.observed == vr.observed);
    }
    server.stop();
}
