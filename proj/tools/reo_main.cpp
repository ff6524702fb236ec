#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "reo/adapter.hpp"
#include "reo/circuit.hpp"
#include "reo/ioco.hpp"
#include "reo/ioext.hpp"
#include "reo/lts.hpp"
#include "reo/semantics.hpp"

namespace {

using namespace reo;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitCompile = 2;
constexpr int kExitIo = 3;
constexpr int kExitFail = 4;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << data)) throw std::ios_base::failure("cannot write " + path);
}

RequestStrategy parse_strategy(const std::string& text) {
    if (text == "none") return RequestStrategy::none();
    if (text == "ignore") return RequestStrategy::ignore();
    if (text == "overwrite") return RequestStrategy::overwrite();
    if (text.rfind("queue:", 0) == 0) return RequestStrategy::queue(std::stoi(text.substr(6)));
    throw CLI::ValidationError("--strategy", "expected none|ignore|overwrite|queue:N");
}

SemMode parse_mode(const std::string& text) {
    if (text == "ca") return SemMode::CA;
    if (text == "aca") return SemMode::ACA;
    if (text == "coloring") return SemMode::Coloring;
    throw CLI::ValidationError("--semantics", "expected ca|aca|coloring");
}

/// Witness rendering used by ioco/testrun: trace labels joined by a
/// middle dot with the offending observation appended.
std::string witness_text(const Verdict& v) {
    std::string out;
    for (const auto& l : v.witness) {
        out += l.text();
        out += "·";
    }
    out += v.observed.text();
    return out;
}

void print_failure(const Verdict& v) {
    std::cout << "Fail\n";
    std::cout << "witness: " << witness_text(v) << "\n";
    std::cout << "allowed:";
    for (const auto& l : v.expected) std::cout << " " << l.text();
    std::cout << "\n";
}

int cmd_compile(const std::string& file, const std::string& semantics, bool io,
                const std::string& strategy, bool noComplete, bool stats,
                const std::string& outPath) {
    std::string text;
    try {
        text = slurp(file);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    Circuit circuit;
    try {
        circuit = parse_circuit(text);
    } catch (const CircuitError& e) {
        std::cerr << file << ":" << e.line << ":" << e.column << ": error: " << e.what() << "\n";
        return kExitParse;
    }
    auto problems = validate_circuit(circuit);
    if (!problems.empty()) {
        for (const auto& d : problems) std::cerr << file << ": error: " << d.message << "\n";
        return kExitParse;
    }
    Automaton a;
    try {
        a = compile_circuit(circuit, parse_mode(semantics), io, parse_strategy(strategy));
        if (io && !noComplete) a = angelic_completion(a);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCompile;
    }
    if (stats)
        std::cerr << "states: " << a.numStates << "\ntransitions: " << a.transitions.size()
                  << "\n";
    std::string aut = write_aut(a);
    try {
        if (outPath.empty())
            std::cout << aut;
        else
            spit(outPath, aut);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_ioco(const std::string& specPath, const std::string& implPath, int depth,
             bool compositeInputs) {
    Automaton spec, impl;
    try {
        spec = read_aut(slurp(specPath));
        impl = read_aut(slurp(implPath));
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    Verdict v = ioco_check(impl, spec, depth, IocoOptions{compositeInputs});
    if (v.pass()) {
        std::cout << "Pass\n";
        return kExitOk;
    }
    if (v.fail()) {
        print_failure(v);
        return kExitFail;
    }
    std::cerr << "error: " << v.reason << "\n";
    return kExitCompile;
}

int cmd_testgen(const std::string& specPath, int depth, uint64_t seed, int count, bool exhaustive,
                const std::string& outDir) {
    Automaton spec;
    try {
        spec = read_aut(slurp(specPath));
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    std::vector<TestCase> tests;
    if (exhaustive)
        tests = gen_tests_exhaustive(spec, depth,
                                     count < 0 ? SIZE_MAX : (std::size_t)count);
    else
        for (int i = 0; i < (count < 0 ? 10 : count); ++i)
            tests.push_back(gen_test(spec, depth, seed + i));
    try {
        fs::create_directories(outDir);
        std::ofstream sidecar(fs::path(outDir) / "tests.jsonl");
        for (std::size_t i = 0; i < tests.size(); ++i) {
            const TestCase& t = tests[i];
            char name[32];
            std::snprintf(name, sizeof name, "test_%04zu.aut", i);
            spit((fs::path(outDir) / name).string(), write_aut(t.aut));
            std::vector<int> renum = bfs_numbering(t.aut);
            nlohmann::json line = {{"file", name},
                                   {"pass", renum[t.passState]},
                                   {"fail", renum[t.failState]},
                                   {"seed", t.seed},
                                   {"choices", t.choices}};
            sidecar << line.dump() << "\n";
        }
        if (!sidecar) throw std::ios_base::failure("cannot write sidecar");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    std::cout << "wrote " << tests.size() << " tests to " << outDir << "\n";
    return kExitOk;
}

TestCase load_test(const fs::path& dir, const nlohmann::json& meta) {
    TestCase t;
    t.aut = read_aut(slurp((dir / meta.at("file").get<std::string>()).string()));
    t.passState = meta.at("pass").get<int>();
    t.failState = meta.at("fail").get<int>();
    std::set<Label> ins, outs;
    for (const auto& tr : t.aut.transitions) {
        if (tr.label.isPureInput())
            ins.insert(tr.label);
        else if (tr.label.isActs())
            outs.insert(tr.label);
    }
    t.inputLabels.assign(ins.begin(), ins.end());
    t.outputLabels.assign(outs.begin(), outs.end());
    return t;
}

int cmd_testrun(const std::string& suiteDir, const std::string& implPath,
                const std::string& connect, uint64_t seed, int timeoutMs) {
    std::vector<TestCase> tests;
    try {
        std::istringstream sidecar(slurp((fs::path(suiteDir) / "tests.jsonl").string()));
        std::string line;
        while (std::getline(sidecar, line)) {
            if (line.empty()) continue;
            tests.push_back(load_test(suiteDir, nlohmann::json::parse(line)));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    std::unique_ptr<SutHandle> sut;
    try {
        if (!connect.empty()) {
            auto colon = connect.rfind(':');
            if (colon == std::string::npos)
                throw AdapterError("--connect expects host:port");
            sut = tcp_sut(connect.substr(0, colon), std::stoi(connect.substr(colon + 1)));
        } else if (!implPath.empty()) {
            sut = lts_sut(read_aut(slurp(implPath)), seed);
        } else {
            std::cerr << "error: need --impl or --connect\n";
            return kExitCompile;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    RunOptions options;
    options.timeoutMs = timeoutMs;
    int passes = 0, fails = 0, errors = 0;
    std::optional<Verdict> first;
    for (const auto& t : tests) {
        sut->reset();
        Verdict v = run_test(t, *sut, options);
        if (v.pass())
            ++passes;
        else if (v.fail())
            ++fails;
        else
            ++errors;
        if (!v.pass() && !first) first = v;
    }
    std::cout << "passes=" << passes << " fails=" << fails << " errors=" << errors << "\n";
    if (first && first->fail()) {
        print_failure(*first);
        return kExitFail;
    }
    if (first) {
        std::cerr << "error: " << first->reason << "\n";
        return kExitCompile;
    }
    return kExitOk;
}

int cmd_serve(const std::string& autPath, int port, uint64_t seed, int emissionDelayMs) {
    Automaton a;
    try {
        a = read_aut(slurp(autPath));
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    try {
        ServeOptions options;
        options.port = port;
        options.seed = seed;
        options.emissionDelayMs = emissionDelayMs;
        SutServer server(a, options);
        std::cout << "listening on " << server.actualPort() << std::endl;
        // Serve until stdin closes so scripted callers can shut us down.
        std::string line;
        while (std::getline(std::cin, line)) {
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_compare(const std::string& leftPath, const std::string& rightPath, int traceDepth) {
    Automaton left, right;
    try {
        left = read_aut(slurp(leftPath));
        right = read_aut(slurp(rightPath));
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    EquivalenceResult bisim = strong_bisimilar(left, right);
    if (bisim.equivalent) {
        std::cout << "strongly bisimilar\n";
        return kExitOk;
    }
    std::cout << "not strongly bisimilar: " << bisim.detail << "\n";
    EquivalenceResult traces = trace_equivalent(left, right, traceDepth);
    if (traces.equivalent)
        std::cout << "trace equivalent up to depth " << traceDepth << "\n";
    else
        std::cout << "trace inequivalent: " << trace_text(traces.counterexample) << "\n";
    return kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reo circuit compiler and ioco conformance tester"};
    app.require_subcommand(1);

    std::string file, outPath, semantics = "ca", strategy = "none";
    bool io = false, noComplete = false, stats = false;
    auto* compile = app.add_subcommand("compile", "compile a circuit to an .aut automaton");
    compile->add_option("file", file, "circuit file")->required();
    compile->add_option("--semantics", semantics, "ca|aca|coloring");
    compile->add_flag("--io", io, "attach input/output request actions");
    compile->add_option("--strategy", strategy, "none|ignore|overwrite|queue:N");
    compile->add_flag("--no-complete", noComplete, "skip angelic completion");
    compile->add_flag("--stats", stats, "print state/transition counts to stderr");
    compile->add_option("--out", outPath, "output path (default stdout)");

    std::string specPath, implPath;
    int depth = 5;
    bool compositeInputs = false;
    auto* ioco = app.add_subcommand("ioco", "bounded ioco conformance check");
    ioco->add_option("spec", specPath, "specification .aut")->required();
    ioco->add_option("impl", implPath, "implementation .aut")->required();
    ioco->add_option("--depth", depth, "trace depth bound");
    ioco->add_flag("--composite-inputs", compositeInputs, "stimulate composite request labels");

    std::string genSpec, outDir;
    int genDepth = 4, count = -1;
    uint64_t seed = 0;
    bool exhaustive = false;
    auto* testgen = app.add_subcommand("testgen", "generate test cases from a specification");
    testgen->add_option("spec", genSpec, "specification .aut")->required();
    testgen->add_option("--depth", genDepth, "test depth");
    testgen->add_option("--seed", seed, "random seed");
    testgen->add_option("--count", count, "number of tests (default 10 random / all exhaustive)");
    testgen->add_flag("--exhaustive", exhaustive, "enumerate all choice sequences");
    testgen->add_option("--out", outDir, "suite directory")->required();

    std::string suiteDir, runImpl, connect;
    uint64_t runSeed = 0;
    int timeoutMs = 2000;
    auto* testrun = app.add_subcommand("testrun", "execute a test suite against a SUT");
    testrun->add_option("suite", suiteDir, "suite directory from testgen")->required();
    testrun->add_option("--impl", runImpl, "simulate this .aut as the SUT");
    testrun->add_option("--connect", connect, "host:port of a served SUT");
    testrun->add_option("--seed", runSeed, "simulator seed");
    testrun->add_option("--timeout-ms", timeoutMs, "quiescence timeout");

    std::string servePath;
    int port = 0, emissionDelayMs = 10;
    uint64_t serveSeed = 0;
    auto* serve = app.add_subcommand("serve", "expose an .aut automaton over TCP");
    serve->add_option("file", servePath, "automaton .aut")->required();
    serve->add_option("--port", port, "TCP port (0 = ephemeral)");
    serve->add_option("--seed", serveSeed, "simulator seed");
    serve->add_option("--emission-delay-ms", emissionDelayMs, "autonomous emission delay");

    std::string leftPath, rightPath;
    int traceDepth = 10;
    auto* compare = app.add_subcommand("compare", "compare two .aut automata");
    compare->add_option("left", leftPath, "first .aut")->required();
    compare->add_option("right", rightPath, "second .aut")->required();
    compare->add_option("--trace-depth", traceDepth, "depth for the trace fallback");

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand(compile))
        return cmd_compile(file, semantics, io, strategy, noComplete, stats, outPath);
    if (app.got_subcommand(ioco)) return cmd_ioco(specPath, implPath, depth, compositeInputs);
    if (app.got_subcommand(testgen))
        return cmd_testgen(genSpec, genDepth, seed, count, exhaustive, outDir);
    if (app.got_subcommand(testrun)) return cmd_testrun(suiteDir, runImpl, connect, runSeed, timeoutMs);
    if (app.got_subcommand(serve)) return cmd_serve(servePath, port, serveSeed, emissionDelayMs);
    if (app.got_subcommand(compare)) return cmd_compare(leftPath, rightPath, traceDepth);
    return kExitOk;
}
