#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "reo/circuit.hpp"
#include "reo/ioext.hpp"
#include "reo/lts.hpp"
#include "reo/semantics.hpp"

namespace testsupport {

inline std::string fixture_path(const std::string& name) {
    return std::string(FIXTURES_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline reo::Automaton fixture_aut(const std::string& name) {
    return reo::read_aut(read_file(fixture_path(name)));
}

inline reo::Circuit fixture_circuit(const std::string& name) {
    return reo::parse_circuit(read_file(fixture_path(name)));
}

inline reo::Automaton compile_fixture(const std::string& name,
                                      reo::SemMode mode = reo::SemMode::CA, bool io = false,
                                      reo::RequestStrategy strategy = reo::RequestStrategy::none()) {
    return reo::compile_circuit(fixture_circuit(name), mode, io, strategy);
}

/// The four strategy-completed IOCAs used by the conformance tests.
inline reo::Automaton fixture_ioca(const std::string& name) {
    return compile_fixture(name, reo::SemMode::CA, true, reo::RequestStrategy::ignore());
}

}  // namespace testsupport
