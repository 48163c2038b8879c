#include "chaoskit/distribution.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "chaoskit/errors.hpp"
#include "chaoskit/simd/kernels.hpp"

namespace chaoskit {

namespace {

void check_distribution_order(int k) {
    if (k < 1 || k > kMaxDenseOrder) throw RangeError("distribution order out of range");
}

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

KmerDistribution::KmerDistribution(int k, std::vector<double> theta) : k_(k), theta_(std::move(theta)) {
    check_distribution_order(k);
    if (theta_.size() != kmer_space(k))
        throw ValidationError("distribution of order " + std::to_string(k) + " needs " +
                              std::to_string(kmer_space(k)) + " entries, got " + std::to_string(theta_.size()));
    double sum = 0.0;
    for (double v : theta_) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("distribution entries must be finite and >= 0");
        sum += v;
    }
    if (std::fabs(sum - 1.0) > kSimplexSumTolerance)
        throw ValidationError("distribution sums to " + format_double(sum) + ", not 1");
}

KmerDistribution KmerDistribution::uniform(int k) {
    check_distribution_order(k);
    return KmerDistribution(k, std::vector<double>(kmer_space(k), 1.0 / static_cast<double>(kmer_space(k))));
}

KmerDistribution KmerDistribution::point_mass(const Kmer& w) {
    check_distribution_order(w.size());
    std::vector<double> theta(kmer_space(w.size()), 0.0);
    theta[kmer_index(w)] = 1.0;
    return KmerDistribution(w.size(), std::move(theta));
}

KmerDistribution empirical_distribution(const KmerFrequencyVector& counts) {
    const std::uint64_t total = counts.total();
    if (total == 0) throw ValidationError("cannot normalise an all-zero frequency vector");
    std::vector<double> theta(counts.counts.size());
    const double denom = static_cast<double>(total);
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = static_cast<double>(counts.counts[i]) / denom;
    return KmerDistribution(counts.k, std::move(theta));
}

std::vector<double> marginal_residual(const KmerDistribution& theta) {
    const int k = theta.order();
    if (k < 2) throw RangeError("marginal residuals need k >= 2");
    const std::uint64_t vertices = kmer_space(k - 1);
    std::vector<double> out(vertices, 0.0);
    for (std::uint64_t w = 0; w < theta.size(); ++w) {
        out[w >> 2] += theta[w];           // w has prefix v
        out[w & (vertices - 1)] -= theta[w];  // w has suffix v
    }
    return out;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

bool is_marginal_consistent(const KmerDistribution& theta, double tolerance) {
    return max_abs(marginal_residual(theta)) <= tolerance;
}

double total_variation_l1(const KmerDistribution& a, const KmerDistribution& b) {
    if (a.order() != b.order() || a.size() != b.size())
        throw ValidationError("cannot compare distributions of different order");
    return simd::active_kernels().l1_distance(a.theta().data(), b.theta().data(), a.size());
}

void write_counts_csv(std::ostream& out, const KmerFrequencyVector& counts) {
    out << "kmer,count\n";
    for (std::uint64_t i = 0; i < counts.counts.size(); ++i)
        out << Kmer(i, counts.k).str() << ',' << counts.counts[i] << '\n';
    if (!out) throw IoError("write failure while emitting counts CSV");
}

void write_distribution_csv(std::ostream& out, const KmerDistribution& theta) {
    out << "kmer,theta\n";
    for (std::uint64_t i = 0; i < theta.size(); ++i)
        out << Kmer(i, theta.order()).str() << ',' << format_double(theta[i]) << '\n';
    if (!out) throw IoError("write failure while emitting distribution CSV");
}

ParsedDistribution read_distribution_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    int k = 0;
    std::vector<double> theta;
    std::vector<bool> seen;
    bool header_done = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header_done) {
            header_done = true;
            if (line != "kmer,theta") throw ValidationError("distribution CSV must start with header 'kmer,theta'");
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ValidationError("line " + std::to_string(line_no) + ": expected kmer,theta");
        const std::string word = line.substr(0, comma);
        const std::string value = line.substr(comma + 1);
        const Kmer w = Kmer::from_string(word);
        if (k == 0) {
            k = w.size();
            check_distribution_order(k);
            theta.assign(kmer_space(k), 0.0);
            seen.assign(kmer_space(k), false);
        } else if (w.size() != k) {
            throw ValidationError("line " + std::to_string(line_no) + ": mixed k-mer lengths");
        }
        double v = 0.0;
        const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
        if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
            throw ValidationError("line " + std::to_string(line_no) + ": cannot parse '" + value + "'");
        if (!std::isfinite(v) || v < 0.0) throw ValidationError("line " + std::to_string(line_no) + ": theta must be >= 0");
        if (seen[kmer_index(w)]) throw ValidationError("duplicate k-mer " + word);
        seen[kmer_index(w)] = true;
        theta[kmer_index(w)] = v;
    }
    if (in.bad()) throw IoError("read failure while parsing distribution CSV");
    if (k == 0) throw ValidationError("distribution CSV has no rows");
    double sum = 0.0;
    for (double v : theta) sum += v;
    if (std::fabs(sum - 1.0) > 1e-6)
        throw ValidationError("distribution sums to " + format_double(sum) + " (must be within 1e-6 of 1)");
    const bool renormalized = std::fabs(sum - 1.0) > kSimplexSumTolerance;
    for (double& v : theta) v /= sum;
    return {KmerDistribution(k, std::move(theta)), renormalized};
}

ParsedDistribution read_distribution_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_distribution_csv(in);
}

KmerDistribution normalize_weights(int k, const std::vector<double>& weights) {
    check_distribution_order(k);
    if (weights.size() != kmer_space(k))
        throw ValidationError("expected " + std::to_string(kmer_space(k)) + " weights");
    double sum = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) throw ValidationError("weights must be finite and >= 0");
        sum += w;
    }
    if (!(sum > 0.0)) throw ValidationError("weights sum to zero");
    std::vector<double> theta(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) theta[i] = weights[i] / sum;
    return KmerDistribution(k, std::move(theta));
}

}  // namespace chaoskit
