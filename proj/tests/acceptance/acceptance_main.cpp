// Acceptance gate: one pass/fail line per criterion, nonzero exit on failure.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "random_ioca.hpp"
#include "reo/adapter.hpp"
#include "reo/ioco.hpp"
#include "reo/ioext.hpp"
#include "reo/lts.hpp"
#include "reo/semantics.hpp"

using namespace reo;
using testsupport::compile_fixture;
using testsupport::fixture_aut;
using testsupport::fixture_ioca;
using testsupport::fixture_path;

namespace {

Label in(const char* p) { return Label::single(Action(p, ActionKind::Request)); }
Label out(const char* p) { return Label::single(Action(p, ActionKind::Observe)); }

struct Criterion {
    int number;
    std::string title;
    std::function<bool(std::string&)> run;
};

bool check(bool ok, std::string& detail, const std::string& msg) {
    if (!ok && detail.empty()) detail = msg;
    return ok;
}

// --- criterion bodies -------------------------------------------------------

bool c1_example1_figures(std::string& detail) {
    bool ok = true;
    ok &= check(strong_bisimilar(compile_fixture("ex1-spec.reo"), fixture_aut("fig3a.aut")).equivalent,
                detail, "spec automaton differs from the 2-state {A,C};{B} reference");
    ok &= check(strong_bisimilar(compile_fixture("ex1-impl.reo"), fixture_aut("fig3b.aut")).equivalent,
                detail, "impl automaton differs from the swapped reference");
    return ok;
}

bool c2_example2_figures(std::string& detail) {
    bool ok = true;
    ok &= check(strong_bisimilar(compile_fixture("ex2-spec.reo"), fixture_aut("fig4a.aut")).equivalent,
                detail, "spec automaton differs from the 4-state reference");
    ok &= check(strong_bisimilar(compile_fixture("ex2-impl.reo"), fixture_aut("fig4b.aut")).equivalent,
                detail, "impl automaton differs from the 2-state reference");
    return ok;
}

bool c3_ioca_construction(std::string& detail) {
    Automaton raw = compile_fixture("ex1-spec.reo", SemMode::CA, true, RequestStrategy::none());
    Automaton ign = apply_strategy(raw, RequestStrategy::ignore());
    bool ok = true;
    ok &= check(ign.numStates == 16, detail,
                "ignore-strategy automaton has " + std::to_string(ign.numStates) + " states");
    ok &= check(isomorphic(raw, fixture_aut("fig6a.aut")), detail,
                "request automaton is not isomorphic to the transcribed reference");
    // The CLI route produces the same 16-state automaton.
    std::string tmp = "/tmp/acceptance_c3.aut";
    std::string cmd = std::string(REO_CLI_PATH) + " compile " + fixture_path("ex1-spec.reo") +
                      " --io --strategy ignore --out " + tmp + " 2>/dev/null";
    ok &= check(std::system(cmd.c_str()) == 0, detail, "CLI compile failed");
    if (ok) {
        Automaton cli = read_aut(testsupport::read_file(tmp));
        ok &= check(cli.numStates == 16, detail, "CLI output is not 16 states");
        ok &= check(strong_bisimilar(cli, ign).equivalent, detail,
                    "CLI output differs from the library compile");
    }
    return ok;
}

bool c4_conformance_verdicts(std::string& detail) {
    Verdict v2 = ioco_check(fixture_ioca("ex2-impl.reo"), fixture_ioca("ex2-spec.reo"), 4);
    bool witnessOk = v2.fail() && v2.witness.size() == 3 && v2.witness[0] == in("A") &&
                     v2.witness[1] == in("B") && v2.witness[2] == out("A") &&
                     v2.observed == Label::delta();
    bool ok = check(witnessOk, detail,
                    "expected Fail with witness {?A}·{?B}·{!A}·delta, got " +
                        (v2.fail() ? trace_text(v2.witness) + "·" + v2.observed.text()
                                   : std::string("a non-Fail verdict")));
    ok &= check(ioco_check(fixture_ioca("ex1-impl.reo"), fixture_ioca("ex1-spec.reo"), 3).fail(),
                detail, "the swapped-channel fault went undetected at depth 3");
    for (const char* name : {"ex1-spec.reo", "ex1-impl.reo", "ex2-spec.reo", "ex2-impl.reo"}) {
        Automaton a = fixture_ioca(name);
        ok &= check(ioco_check(a, a, 4).pass(), detail,
                    std::string(name) + " does not conform to itself");
    }
    return ok;
}

bool c5_oracle_equivalence(std::string& detail) {
    std::mt19937_64 rng(5150);
    testsupport::RandomIocaConfig implConfig;
    implConfig.inputEnable = true;
    int agree = 0, total = 0, fails = 0;
    while (total < 200) {
        Automaton spec = testsupport::random_ioca(rng);
        Automaton impl = (rng() % 2) ? testsupport::random_ioca(rng, implConfig)
                                     : angelic_completion(testsupport::mutate_outputs(spec, rng));
        if (spec.inputs.size() != impl.inputs.size()) continue;
        ++total;
        Verdict v = ioco_check(impl, spec, 5);
        if (v.kind == Verdict::Kind::ExecError) continue;
        bool oracleSays = testsupport::oracle_ioco(impl, spec, 5);
        if (v.pass() == oracleSays) ++agree;
        if (v.fail()) ++fails;
    }
    bool ok = check(agree == total, detail,
                    std::to_string(total - agree) + " of " + std::to_string(total) +
                        " verdicts disagree with the oracle");
    ok &= check(fails > 0, detail, "sample never produced a Fail verdict");
    return ok;
}

bool c6_generation_soundness(std::string& detail) {
    bool ok = true;
    // Soundness: 500 seeded tests never fail a conforming simulator.
    int ran = 0;
    for (const char* name : {"ex1-spec.reo", "ex2-spec.reo"}) {
        Automaton spec = fixture_ioca(name);
        auto sut = lts_sut(spec, 12345);
        for (uint64_t seed = 0; seed < 250; ++seed, ++ran) {
            TestCase t = gen_test(spec, 4, seed);
            sut->reset();
            Verdict v = run_test(t, *sut);
            if (!v.pass()) {
                ok = check(false, detail,
                           std::string("seed ") + std::to_string(seed) + " on " + name +
                               " failed a conforming SUT");
                break;
            }
        }
    }
    ok &= check(ran == 500, detail, "did not run 500 seeded tests");
    // Exhaustiveness: the witness-depth suites expose both faulty circuits.
    struct Pair {
        const char* spec;
        const char* impl;
        int depth;
    };
    for (auto [specName, implName, depth] :
         {Pair{"ex1-spec.reo", "ex1-impl.reo", 3}, Pair{"ex2-spec.reo", "ex2-impl.reo", 4}}) {
        Automaton spec = fixture_ioca(specName);
        auto sut = lts_sut(fixture_ioca(implName), 5);
        int fails = 0;
        for (const TestCase& t : gen_tests_exhaustive(spec, depth)) {
            sut->reset();
            if (run_test(t, *sut).fail()) ++fails;
        }
        ok &= check(fails > 0, detail,
                    std::string("no failing test against ") + implName + " at depth " +
                        std::to_string(depth));
    }
    return ok;
}

bool c7_composition_preserves_pass(std::string& detail) {
    std::mt19937_64 rng(707);
    // Compositionality holds for input-enabled specifications, so sample those.
    testsupport::RandomIocaConfig config;
    config.maxStates = 6;
    config.maxPorts = 2;
    config.inputEnable = true;

    auto disjoint = [](Automaton a) {
        a = rename_port(a, "A", "D");
        a = rename_port(a, "B", "E");
        a = rename_port(a, "C", "F");
        return a;
    };
    auto conforming_pair = [&](Automaton& spec, Automaton& impl) {
        for (int tries = 0; tries < 200; ++tries) {
            spec = testsupport::random_ioca(rng, config);
            impl = (rng() % 2) ? angelic_completion(spec)
                               : angelic_completion(testsupport::mutate_outputs(spec, rng));
            Verdict v = ioco_check(impl, spec, 4);
            if (v.pass()) return true;
        }
        return false;
    };

    for (int i = 0; i < 50; ++i) {
        Automaton s1, i1, s2, i2;
        if (!conforming_pair(s1, i1) || !conforming_pair(s2, i2))
            return check(false, detail, "could not sample a conforming quadruple");
        s2 = disjoint(s2);
        i2 = disjoint(i2);
        Automaton specComp = compose_systems(s1, s2, {});
        Automaton implComp = compose_systems(i1, i2, {});
        Verdict v = ioco_check(implComp, specComp, 4);
        if (!v.pass())
            return check(false, detail,
                         "composition broke conformance on quadruple " + std::to_string(i) +
                             (v.fail() ? " at " + trace_text(v.witness) : ""));
    }
    return true;
}

bool c8_transport_parity(std::string& detail) {
    struct Campaign {
        const char* spec;
        const char* sutAut;
    };
    const Campaign campaigns[] = {
        {"ex1-spec.reo", "ex1-spec.reo"},
        {"ex1-spec.reo", "ex1-impl.reo"},
        {"ex2-spec.reo", "ex2-spec.reo"},
        {"ex2-spec.reo", "ex2-impl.reo"},
    };
    auto verdict_text = [](const std::optional<Verdict>& v) {
        if (!v) return std::string("none");
        std::ostringstream s;
        s << (int)v->kind << "|" << trace_text(v->witness) << "|" << v->observed.text() << "|"
          << v->reason;
        return s.str();
    };

    std::vector<std::string> problems(4);
    std::vector<std::thread> workers;
    for (int i = 0; i < 4; ++i) {
        workers.emplace_back([&, i] {
            try {
                Automaton spec = fixture_ioca(campaigns[i].spec);
                Automaton sutAut = fixture_ioca(campaigns[i].sutAut);
                ServeOptions serveOptions;
                serveOptions.port = 0;
                serveOptions.emissionDelayMs = 50;
                serveOptions.seed = 0;
                SutServer server(sutAut, serveOptions);
                auto remote = tcp_sut("127.0.0.1", server.actualPort());
                auto local = lts_sut(sutAut, 0);
                RunOptions run;
                run.timeoutMs = 2000;
                uint64_t seed = 900 + 10 * (uint64_t)i;
                CampaignSummary lc = run_campaign(spec, *local, 3, 3, seed, GenPolicy::Random, run);
                CampaignSummary rc = run_campaign(spec, *remote, 3, 3, seed, GenPolicy::Random, run);
                std::ostringstream l, r;
                l << lc.passes << "/" << lc.fails << "/" << lc.errors << "/"
                  << verdict_text(lc.firstFailure);
                r << rc.passes << "/" << rc.fails << "/" << rc.errors << "/"
                  << verdict_text(rc.firstFailure);
                if (l.str() != r.str())
                    problems[i] = std::string(campaigns[i].sutAut) + ": local " + l.str() +
                                  " vs tcp " + r.str();
                server.stop();
            } catch (const std::exception& e) {
                problems[i] = std::string(campaigns[i].sutAut) + ": " + e.what();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (const auto& p : problems)
        if (!p.empty()) return check(false, detail, p);
    return true;
}

bool c9_semantics_coverage(std::string& detail) {
    ChannelSpec sync;
    sync.kind = ChannelKind::Sync;
    sync.ends = {"A", "B"};

    Automaton aca = channel_automaton(sync, SemMode::ACA, DataDomain::agnostic());
    Automaton cycle;
    for (int i = 0; i < 4; ++i) cycle.addState();
    cycle.addTransition(0, parse_label("{bA,bB}"), 1);
    cycle.addTransition(1, parse_label("{sA,sB}"), 2);
    cycle.addTransition(2, parse_label("{fA,fB}"), 3);
    cycle.addTransition(3, parse_label("{uA,uB}"), 0);
    bool ok = check(isomorphic(aca, cycle), detail, "four-phase cycle mismatch");

    Automaton col = channel_automaton(sync, SemMode::Coloring, DataDomain::agnostic());
    std::set<std::string> labels;
    for (const auto& t : col.transitions) {
        labels.insert(t.label.text());
        ok &= check(t.from == 0 && t.to == 0, detail, "coloring automaton is not single-state");
    }
    ok &= check(col.numStates == 1, detail, "coloring automaton is not single-state");
    ok &= check(labels == std::set<std::string>{"{wA,wB}", "{gA,gB}", "{gA,rB}", "{rA,gB}"},
                detail, "coloring summands mismatch");
    return ok;
}

bool c10_format(std::string& detail) {
    bool ok = true;
    for (const char* name :
         {"fig3a.aut", "fig3b.aut", "fig4a.aut", "fig4b.aut", "fig6a.aut", "fig6b.aut"}) {
        Automaton a = fixture_aut(name);
        ok &= check(strong_bisimilar(a, read_aut(write_aut(a))).equivalent, detail,
                    std::string(name) + " does not round-trip");
    }
    std::mt19937_64 rng(1000);
    static const char* ports[] = {"A", "B", "C", "qq", "p_7"};
    static const ActionKind kinds[] = {ActionKind::Flow, ActionKind::Request, ActionKind::Observe};
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        Label l;
        switch (rng() % 8) {
            case 0: l = Label::tau(); break;
            case 1: l = Label::delta(); break;
            case 2: l = Label::theta(); break;
            default: {
                std::vector<Action> acts;
                int n = 1 + (int)(rng() % 3);
                for (int k = 0; k < n; ++k) {
                    Action a(ports[rng() % 5], kinds[rng() % 3]);
                    if (rng() % 3 == 0) a.data = std::to_string(rng() % 100);
                    acts.push_back(a);
                }
                l = Label::of(acts);
            }
        }
        if (parse_label(l.text()).text() != l.text()) ++mismatches;
    }
    ok &= check(mismatches == 0, detail,
                std::to_string(mismatches) + " label round-trip mismatches");
    return ok;
}

}  // namespace

int main() {
    const Criterion criteria[] = {
        {1, "connector compile matches the first example's reference automata", c1_example1_figures},
        {2, "connector compile matches the second example's reference automata", c2_example2_figures},
        {3, "request/observe construction yields the 16-state reference", c3_ioca_construction},
        {4, "conformance verdicts and the narrated witness", c4_conformance_verdicts},
        {5, "engine agrees with the brute-force oracle on 200 random pairs", c5_oracle_equivalence},
        {6, "test generation is sound and exhaustive at witness depth", c6_generation_soundness},
        {7, "parallel composition preserves Pass on 50 random quadruples", c7_composition_preserves_pass},
        {8, "TCP campaigns reproduce in-process verdicts bit-for-bit", c8_transport_parity},
        {9, "four-phase and coloring encodings are exact", c9_semantics_coverage},
        {10, "automaton files round-trip; canonical labels fuzz clean", c10_format},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        std::string detail;
        bool ok = false;
        auto start = std::chrono::steady_clock::now();
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        std::cout << "criterion " << c.number << ": " << (ok ? "pass" : "FAIL") << " — "
                  << c.title << " (" << ms << " ms)";
        if (!ok && !detail.empty()) std::cout << " [" << detail << "]";
        std::cout << "\n";
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
