#pragma once

#include <cstdint>
#include <memory>
#include <string>

namespace chaoskit::service {

inline constexpr std::uint64_t kMaxTargetLength = 2'000'000;
inline constexpr std::uint64_t kMaxInlineSequence = 100'000;
inline constexpr std::uint64_t kMaxSequenceLength = 2'000'000;
inline constexpr std::uint64_t kMaxSampleIterations = 1'000'000;
inline constexpr int kMaxServiceResolution = 10;
inline constexpr int kDefaultResolution = 8;
inline constexpr std::uint64_t kDefaultSampleIterations = 1000;
inline constexpr std::uint64_t kDefaultSeed = 42;

struct Response {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

// Handlers take the raw request body and never throw; failures come back as
// {"error": "..."} with 400 (malformed), 413 (over a size cap) or 422 (the
// distribution is not on the simplex).
Response reconstruct(const std::string& body);
Response sample(const std::string& body);
Response cgr(const std::string& body);
Response healthz();

// Routes a request to the handlers above; unknown routes give 404.
Response dispatch(const std::string& method, const std::string& path, const std::string& body);

// HTTP/1.1 front end over dispatch(), with permissive CORS headers.
class Server {
public:
    Server();
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    // Throws IoError when the socket cannot be bound. Port 0 picks a free
    // port; the bound port is returned either way.
    int bind(const std::string& host, int port);
    // Blocks until stop() is called from another thread.
    void listen();
    void stop();
    bool running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// bind + listen; blocks until the process is stopped.
void serve(const std::string& host, int port);

}  // namespace chaoskit::service
