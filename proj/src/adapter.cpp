#include "reo/adapter.hpp"

#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <arpa/inet.h>

#include <chrono>
#include <cstring>
#include <deque>
#include <random>

namespace reo {

namespace {

bool pure_output(const Label& l) {
    return l.isActs() && std::all_of(l.acts.begin(), l.acts.end(),
                                     [](const Action& a) { return a.isOutput(); });
}

/// Shared simulation core: exact-edge inputs, pure-output emission.
class Machine {
  public:
    Machine(const Automaton& a, uint64_t seed) : aut_(a), seed_(seed), rng_(seed) {
        adj_ = aut_.adjacency();
        state_ = aut_.initial;
    }

    // Returns false when no edge with this exact label is enabled.
    bool apply(const Label& l) {
        std::vector<int> targets;
        for (const Transition* t : adj_[state_])
            if (t->label == l) targets.push_back(t->to);
        if (targets.empty()) return false;
        state_ = targets[rng_() % targets.size()];
        return true;
    }

    std::optional<Label> emit() {
        std::vector<const Transition*> outs;
        for (const Transition* t : adj_[state_])
            if (pure_output(t->label)) outs.push_back(t);
        if (outs.empty()) return std::nullopt;
        const Transition* pick = outs[rng_() % outs.size()];
        state_ = pick->to;
        return pick->label;
    }

    bool outputEnabled() const {
        return std::any_of(adj_[state_].begin(), adj_[state_].end(),
                           [](const Transition* t) { return pure_output(t->label); });
    }

    void reset() {
        state_ = aut_.initial;
        rng_.seed(seed_);
    }

  private:
    Automaton aut_;
    std::vector<std::vector<const Transition*>> adj_;
    int state_ = 0;
    uint64_t seed_;
    std::mt19937_64 rng_;
};

class LtsSut final : public SutHandle {
  public:
    LtsSut(const Automaton& a, uint64_t seed) : machine_(a, seed) {}

    void send(const Label& input) override {
        if (!machine_.apply(input))
            throw AdapterError("simulated SUT refuses input " + input.text());
    }

    std::optional<Label> awaitOutput(int timeoutMs) override {
        // Emission takes nonzero time, so a zero-timeout probe sees nothing;
        // with a positive timeout the machine either emits or is quiescent,
        // and quiescence is reported without waiting.
        if (timeoutMs <= 0) return std::nullopt;
        return machine_.emit();
    }

    void reset() override { machine_.reset(); }

  private:
    Machine machine_;
};

}  // namespace

std::unique_ptr<SutHandle> lts_sut(const Automaton& a, uint64_t seed) {
    return std::make_unique<LtsSut>(a, seed);
}

std::string wire_encode_input(const Label& l) { return "INPUT " + l.text(); }
std::string wire_encode_output(const Label& l) { return "OUTPUT " + l.text(); }

WireMessage wire_decode(const std::string& line) {
    auto space = line.find(' ');
    std::string head = line.substr(0, space);
    std::string rest = space == std::string::npos ? "" : line.substr(space + 1);
    while (!rest.empty() && (rest.back() == '\r' || rest.back() == ' ')) rest.pop_back();
    if (head == "INPUT") return {WireMessage::Kind::Input, parse_label(rest), ""};
    if (head == "OUTPUT") return {WireMessage::Kind::Output, parse_label(rest), ""};
    if (head == "RESET") return {WireMessage::Kind::Reset, {}, ""};
    if (head == "ACK") return {WireMessage::Kind::Ack, {}, ""};
    if (head == "ERROR") return {WireMessage::Kind::Error, {}, rest};
    throw AdapterError("unknown wire message: " + line);
}

namespace {

void write_all(int fd, const std::string& data) {
    std::size_t sent = 0;
    while (sent < data.size()) {
        ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n <= 0) throw AdapterError("socket write failed");
        sent += (std::size_t)n;
    }
}

/// Buffered newline-delimited reader over a socket.
class LineReader {
  public:
    explicit LineReader(int fd) : fd_(fd) {}

    /// Next complete line (without the newline), waiting up to timeoutMs.
    /// nullopt on timeout; throws on disconnect.
    std::optional<std::string> readLine(int timeoutMs) {
        auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeoutMs);
        for (;;) {
            auto nl = buffer_.find('\n');
            if (nl != std::string::npos) {
                std::string line = buffer_.substr(0, nl);
                buffer_.erase(0, nl + 1);
                return line;
            }
            int remain = (int)std::chrono::duration_cast<std::chrono::milliseconds>(
                             deadline - std::chrono::steady_clock::now())
                             .count();
            if (remain < 0) remain = 0;
            pollfd p{fd_, POLLIN, 0};
            int r = ::poll(&p, 1, remain);
            if (r == 0) {
                if (remain == 0) return std::nullopt;
                continue;
            }
            if (r < 0) {
                if (errno == EINTR) continue;
                throw AdapterError("poll failed");
            }
            char chunk[4096];
            ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
            if (n == 0) throw AdapterError("peer closed the connection");
            if (n < 0) {
                if (errno == EINTR) continue;
                throw AdapterError("socket read failed");
            }
            buffer_.append(chunk, (std::size_t)n);
        }
    }

  private:
    int fd_;
    std::string buffer_;
};

}  // namespace

SutServer::SutServer(Automaton a, ServeOptions options) : aut_(std::move(a)), options_(options) {
    listenFd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listenFd_ < 0) throw AdapterError("socket creation failed");
    int one = 1;
    ::setsockopt(listenFd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons((uint16_t)options_.port);
    if (::bind(listenFd_, (sockaddr*)&addr, sizeof addr) < 0) {
        ::close(listenFd_);
        throw AdapterError("bind failed on port " + std::to_string(options_.port));
    }
    if (::listen(listenFd_, 1) < 0) {
        ::close(listenFd_);
        throw AdapterError("listen failed");
    }
    socklen_t len = sizeof addr;
    ::getsockname(listenFd_, (sockaddr*)&addr, &len);
    port_ = ntohs(addr.sin_port);
    thread_ = std::thread([this] { serveLoop(); });
}

SutServer::~SutServer() { stop(); }

void SutServer::stop() {
    if (stopping_.exchange(true)) return;
    if (listenFd_ >= 0) {
        ::shutdown(listenFd_, SHUT_RDWR);
        ::close(listenFd_);
        listenFd_ = -1;
    }
    if (thread_.joinable()) thread_.join();
}

void SutServer::serveLoop() {
    while (!stopping_) {
        pollfd p{listenFd_, POLLIN, 0};
        int r = ::poll(&p, 1, 100);
        if (stopping_) break;
        if (r <= 0) continue;
        int client = ::accept(listenFd_, nullptr, nullptr);
        if (client < 0) continue;
        int one = 1;
        ::setsockopt(client, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        try {
            handleClient(client);
        } catch (const AdapterError&) {
            // client vanished; wait for the next one
        }
        ::close(client);
    }
}

void SutServer::handleClient(int fd) {
    Machine machine(aut_, options_.seed);
    LineReader reader(fd);
    while (!stopping_) {
        // A stimulus arriving within the emission delay wins over emission.
        std::optional<std::string> line;
        try {
            line = reader.readLine(options_.emissionDelayMs);
        } catch (const AdapterError&) {
            return;  // disconnect
        }
        if (!line) {
            if (auto out = machine.emit()) write_all(fd, wire_encode_output(*out) + "\n");
            continue;
        }
        if (line->empty()) continue;
        WireMessage msg;
        try {
            msg = wire_decode(*line);
        } catch (const std::exception& e) {
            write_all(fd, std::string("ERROR ") + e.what() + "\n");
            continue;
        }
        switch (msg.kind) {
            case WireMessage::Kind::Input:
                if (!machine.apply(msg.label))
                    write_all(fd, "ERROR input refused: " + msg.label.text() + "\n");
                break;
            case WireMessage::Kind::Reset:
                machine.reset();
                write_all(fd, "ACK\n");
                break;
            default:
                write_all(fd, "ERROR unexpected message: " + *line + "\n");
                break;
        }
    }
}

namespace {

class TcpSut final : public SutHandle {
  public:
    TcpSut(const std::string& host, int port) {
        fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
        if (fd_ < 0) throw AdapterError("socket creation failed");
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons((uint16_t)port);
        if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
            throw AdapterError("bad host address: " + host);
        if (::connect(fd_, (sockaddr*)&addr, sizeof addr) < 0) {
            ::close(fd_);
            fd_ = -1;
            throw AdapterError("connect to " + host + ":" + std::to_string(port) + " failed");
        }
        int one = 1;
        ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        reader_ = std::make_unique<LineReader>(fd_);
    }

    ~TcpSut() override {
        if (fd_ >= 0) ::close(fd_);
    }

    void send(const Label& input) override { write_all(fd_, wire_encode_input(input) + "\n"); }

    std::optional<Label> awaitOutput(int timeoutMs) override {
        if (!pending_.empty()) {
            Label l = pending_.front();
            pending_.pop_front();
            return l;
        }
        auto line = reader_->readLine(timeoutMs);
        if (!line) return std::nullopt;
        WireMessage msg = wire_decode(*line);
        if (msg.kind == WireMessage::Kind::Output) return msg.label;
        if (msg.kind == WireMessage::Kind::Error)
            throw AdapterError("SUT error: " + msg.text);
        throw AdapterError("unexpected message while awaiting output: " + *line);
    }

    void reset() override {
        write_all(fd_, "RESET\n");
        // Outputs racing the reset are discarded; the ACK marks the new round.
        for (;;) {
            auto line = reader_->readLine(5000);
            if (!line) throw AdapterError("no ACK after RESET");
            WireMessage msg = wire_decode(*line);
            if (msg.kind == WireMessage::Kind::Ack) break;
            if (msg.kind == WireMessage::Kind::Error)
                throw AdapterError("SUT error: " + msg.text);
        }
        pending_.clear();
    }

  private:
    int fd_ = -1;
    std::unique_ptr<LineReader> reader_;
    std::deque<Label> pending_;
};

}  // namespace

std::unique_ptr<SutHandle> tcp_sut(const std::string& host, int port) {
    return std::make_unique<TcpSut>(host, port);
}

}  // namespace reo
