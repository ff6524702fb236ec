#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <thread>

#include "reo/automaton.hpp"
#include "reo/ioco.hpp"

namespace reo {

struct AdapterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// In-process SUT simulating an IOCA. send() follows an edge with exactly the
/// given label; awaitOutput() fires a pure-output edge when one is enabled and
/// reports quiescence immediately otherwise. Nondeterministic choices are
/// resolved by a seeded generator; reset() restores the initial state and the
/// seed.
std::unique_ptr<SutHandle> lts_sut(const Automaton& a, uint64_t seed = 0);

/// Line protocol codec: "INPUT <label>", "OUTPUT <label>", "RESET", "ACK",
/// "ERROR <text>".
std::string wire_encode_input(const Label& l);
std::string wire_encode_output(const Label& l);

struct WireMessage {
    enum class Kind { Input, Output, Reset, Ack, Error };
    Kind kind;
    Label label;       // Input / Output
    std::string text;  // Error
};
WireMessage wire_decode(const std::string& line);

struct ServeOptions {
    int port = 0;  // 0 picks an ephemeral port
    int emissionDelayMs = 10;
    uint64_t seed = 0;
};

/// TCP server exposing an automaton as a SUT. Serves one client at a time;
/// autonomously emits an output once the connector stays output-enabled for
/// the emission delay without a new stimulus arriving.
class SutServer {
  public:
    SutServer(Automaton a, ServeOptions options);
    ~SutServer();
    SutServer(const SutServer&) = delete;
    SutServer& operator=(const SutServer&) = delete;

    int actualPort() const { return port_; }
    void stop();

  private:
    void serveLoop();
    void handleClient(int fd);

    Automaton aut_;
    ServeOptions options_;
    int listenFd_ = -1;
    int port_ = 0;
    std::atomic<bool> stopping_{false};
    std::thread thread_;
};

/// SUT handle speaking the line protocol over TCP.
std::unique_ptr<SutHandle> tcp_sut(const std::string& host, int port);

}  // namespace reo
