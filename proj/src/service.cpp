#include "chaoskit/service.hpp"

#include <cmath>
#include <optional>

// Eigen before httplib: <resolv.h> defines a `_res` macro that breaks Eigen's headers.
#include "chaoskit/debruijn.hpp"
#include "chaoskit/errors.hpp"
#include "chaoskit/imaging.hpp"
#include "chaoskit/sampler.hpp"

#include <httplib.h>
#include <json.hpp>

namespace chaoskit::service {

namespace {

using nlohmann::json;

// Error carrying the HTTP status it should be reported with.
struct HttpError {
    int status;
    std::string message;
};

Response error_response(int status, const std::string& message) {
    return {status, json{{"error", message}}.dump()};
}

json parse_body(const std::string& body) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded()) throw HttpError{400, "request body is not valid JSON"};
    if (!j.is_object()) throw HttpError{400, "request body must be a JSON object"};
    return j;
}

std::int64_t require_integer(const json& j, const char* key) {
    if (!j.contains(key)) throw HttpError{400, std::string("missing field '") + key + "'"};
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw HttpError{400, std::string("field '") + key + "' must be an integer"};
    return v.get<std::int64_t>();
}

std::int64_t optional_integer(const json& j, const char* key, std::int64_t fallback) {
    return j.contains(key) ? require_integer(j, key) : fallback;
}

std::uint64_t optional_seed(const json& j) {
    if (!j.contains("seed")) return kDefaultSeed;
    const json& v = j.at("seed");
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw HttpError{400, "field 'seed' must be a nonnegative integer"};
}

std::vector<double> number_array(const json& j, const char* key) {
    const json& v = j.at(key);
    if (!v.is_array()) throw HttpError{400, std::string("field '") + key + "' must be an array of numbers"};
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (!x.is_number()) throw HttpError{400, std::string("field '") + key + "' must be an array of numbers"};
        out.push_back(x.get<double>());
    }
    return out;
}

int checked_order(std::int64_t k) {
    if (k < kMinConstraintOrder || k > kMaxConstraintOrder)
        throw HttpError{400, "k must be between 2 and 6, got " + std::to_string(k)};
    return static_cast<int>(k);
}

int checked_resolution(const json& j) {
    const std::int64_t r = optional_integer(j, "resolution", kDefaultResolution);
    if (r < 1 || r > kMaxServiceResolution) throw HttpError{400, "resolution must be between 1 and 10"};
    return static_cast<int>(r);
}

std::uint64_t checked_iterations(const json& j) {
    const std::int64_t it = optional_integer(j, "iterations", static_cast<std::int64_t>(kDefaultSampleIterations));
    if (it < 1) throw HttpError{400, "iterations must be positive"};
    if (static_cast<std::uint64_t>(it) > kMaxSampleIterations) throw HttpError{413, "iterations exceed 1000000"};
    return static_cast<std::uint64_t>(it);
}

// Explicit theta: entries must be nonnegative and sum to 1 within 1e-6.
KmerDistribution theta_from_values(int k, std::vector<double> theta) {
    if (theta.size() != kmer_space(k))
        throw HttpError{422, "theta must have " + std::to_string(kmer_space(k)) + " entries for k=" + std::to_string(k)};
    double sum = 0.0;
    for (double v : theta) {
        if (!std::isfinite(v) || v < 0.0) throw HttpError{422, "theta entries must be finite and nonnegative"};
        sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-6) throw HttpError{422, "theta must sum to 1"};
    for (double& v : theta) v /= sum;
    return KmerDistribution(k, std::move(theta));
}

std::string base64_pgm(const GrayImage& img) { return httplib::detail::base64_encode(encode_pgm(img)); }

template <typename Fn>
Response guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const HttpError& e) {
        return error_response(e.status, e.message);
    } catch (const ValidationError& e) {
        return error_response(400, e.what());
    } catch (const std::exception& e) {
        return error_response(500, e.what());
    }
}

}  // namespace

Response reconstruct(const std::string& body) {
    return guarded([&] {
        const json req = parse_body(body);
        const int k = checked_order(require_integer(req, "k"));
        const std::int64_t n = require_integer(req, "n");
        if (n <= k) throw HttpError{400, "n must exceed k"};
        if (static_cast<std::uint64_t>(n) > kMaxTargetLength) throw HttpError{413, "n exceeds 2000000"};
        const int r = checked_resolution(req);

        const int sources = static_cast<int>(req.contains("theta")) + static_cast<int>(req.contains("sliders")) +
                            static_cast<int>(req.contains("sample"));
        if (sources != 1) throw HttpError{400, "exactly one of theta, sliders, sample must be given"};

        std::optional<KmerDistribution> theta;
        if (req.contains("theta")) {
            theta = theta_from_values(k, number_array(req, "theta"));
        } else if (req.contains("sliders")) {
            if (k != 2) throw HttpError{400, "sliders are only available for k=2"};
            const auto weights = number_array(req, "sliders");
            if (weights.size() != 16) throw HttpError{400, "sliders must have 16 entries"};
            try {
                theta = normalize_weights(k, weights);
            } catch (const ValidationError& e) {
                throw HttpError{422, e.what()};
            }
        } else {
            const json& s = req.at("sample");
            if (!s.is_object()) throw HttpError{400, "sample must be an object"};
            theta = hit_and_run_sample(k, checked_iterations(s), optional_seed(s));
        }

        const Reconstruction rec = reconstruct(*theta, static_cast<std::uint64_t>(n));
        const KmerDistribution empirical = empirical_distribution(count_kmers(rec.sequence, k));
        json out;
        if (static_cast<std::uint64_t>(n) <= kMaxInlineSequence) {
            out["sequence"] = rec.sequence.str();
        } else {
            out["note"] = "sequence omitted for n above 100000; download is not supported";
        }
        out["sequenceLength"] = rec.sequence.size();
        out["empiricalTheta"] = empirical.theta();
        out["achievedL1"] = rec.report.achieved_l1;
        out["boundL1"] = rec.report.bound_l1;
        out["nArtificial"] = rec.report.n_artificial();
        out["image"] = base64_pgm(render_cgr(rec.sequence, r));
        out["thetaUsed"] = theta->theta();
        return Response{200, out.dump()};
    });
}

Response sample(const std::string& body) {
    return guarded([&] {
        const json req = parse_body(body);
        const int k = checked_order(require_integer(req, "k"));
        const KmerDistribution theta = hit_and_run_sample(k, checked_iterations(req), optional_seed(req));
        return Response{200, json{{"theta", theta.theta()}}.dump()};
    });
}

Response cgr(const std::string& body) {
    return guarded([&] {
        const json req = parse_body(body);
        if (!req.contains("sequence") || !req.at("sequence").is_string())
            throw HttpError{400, "field 'sequence' must be a string"};
        const auto& text = req.at("sequence").get_ref<const std::string&>();
        if (text.size() > kMaxSequenceLength) throw HttpError{413, "sequence exceeds 2000000 letters"};
        const int r = checked_resolution(req);
        const DnaSequence s = DnaSequence::from_string(text);
        const GrayImage img = render_cgr(s, r);
        json out{{"image", base64_pgm(img)}, {"fcgrSum", s.size() - static_cast<std::size_t>(r) + 1}};
        return Response{200, out.dump()};
    });
}

Response healthz() { return {200, "ok", "text/plain"}; }

Response dispatch(const std::string& method, const std::string& path, const std::string& body) {
    if (method == "GET" && path == "/healthz") return healthz();
    if (method == "POST") {
        if (path == "/api/reconstruct") return reconstruct(body);
        if (path == "/api/sample") return sample(body);
        if (path == "/api/cgr") return cgr(body);
    }
    return error_response(404, "no route for " + method + " " + path);
}

struct Server::Impl {
    httplib::Server http;
};

Server::Server() : impl_(std::make_unique<Impl>()) {
    auto& http = impl_->http;
    http.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
    auto route = [](const httplib::Request& req, httplib::Response& res) {
        const Response r = dispatch(req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    };
    http.Get(R"(/.*)", route);
    http.Post(R"(/.*)", route);
    http.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
    const int bound = port == 0 ? impl_->http.bind_to_any_port(host) : (impl_->http.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw IoError("cannot bind " + host + ":" + std::to_string(port));
    return bound;
}

void Server::listen() {
    if (!impl_->http.listen_after_bind()) throw IoError("HTTP server stopped with an error");
}

void Server::stop() { impl_->http.stop(); }

bool Server::running() const { return impl_->http.is_running(); }

void serve(const std::string& host, int port) {
    Server server;
    server.bind(host, port);
    server.listen();
}

}  // namespace chaoskit::service
