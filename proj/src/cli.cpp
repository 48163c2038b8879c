#include "chaoskit/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "chaoskit/debruijn.hpp"
#include "chaoskit/errors.hpp"
#include "chaoskit/fasta.hpp"
#include "chaoskit/imaging.hpp"
#include "chaoskit/sampler.hpp"
#include "chaoskit/service.hpp"
#include "chaoskit/symmetry.hpp"

namespace chaoskit::cli {

namespace {

// Writes through `fn` to `path`, or to `fallback` when the path is empty or "-".
void emit(const std::string& path, std::ostream& fallback, bool binary, const std::function<void(std::ostream&)>& fn) {
    if (path.empty() || path == "-") {
        fn(fallback);
        fallback.flush();
        return;
    }
    std::ofstream file(path, binary ? std::ios::out | std::ios::binary : std::ios::out);
    if (!file) throw IoError("cannot open '" + path + "' for writing");
    fn(file);
    file.flush();
    if (!file) throw IoError("write failure on '" + path + "'");
}

// Runs fn(index) for every record index on up to thread_budget() workers.
void for_each_record(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = std::min<std::size_t>(thread_budget(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<DnaSequence> usable_records(const std::vector<FastaRecord>& records, int k, std::ostream& err) {
    std::vector<DnaSequence> out;
    for (const auto& r : records) {
        if (r.sequence.size() >= static_cast<std::size_t>(k)) {
            out.push_back(r.sequence);
        } else {
            err << "warning: skipping record '" << r.id << "' (" << r.sequence.size() << " letters < k=" << k << ")\n";
        }
    }
    if (out.empty()) throw EmptyWindowError("no record has at least k=" + std::to_string(k) + " letters");
    return out;
}

KmerFrequencyVector summed_counts(const std::vector<DnaSequence>& seqs, int k) {
    std::vector<KmerFrequencyVector> parts(seqs.size());
    for_each_record(seqs.size(), [&](std::size_t i) { parts[i] = count_kmers(seqs[i], k); });
    KmerFrequencyVector total{k, std::vector<std::uint64_t>(kmer_space(k), 0)};
    for (const auto& p : parts)
        for (std::size_t w = 0; w < p.counts.size(); ++w) total.counts[w] += p.counts[w];
    return total;
}

FcgrMatrix summed_fcgr(const std::vector<DnaSequence>& seqs, int k, FcgrMode mode) {
    std::vector<FcgrMatrix> parts(seqs.size());
    for_each_record(seqs.size(), [&](std::size_t i) { parts[i] = fcgr(seqs[i], k, mode); });
    FcgrMatrix total(k);
    for (const auto& p : parts) total += p;
    return total;
}

struct Options {
    std::string policy = "split";
    std::string input;
    std::string output;
    int k = 0;
    int resolution = 8;
    std::string mode = "count";
    std::string image;
    std::string scale = "log";
    bool check_marginals = false;
    std::uint64_t iterations = 0;
    std::uint64_t seed = service::kDefaultSeed;
    std::string theta_path;
    std::uint64_t n = 0;
    std::string report;
    std::string sigma;
    std::string host = "0.0.0.0";
    int port = 8080;
    int depth_cap = kDefaultDepthCap;
};

}  // namespace

unsigned thread_budget() {
    if (const char* env = std::getenv("CHAOSKIT_THREADS")) {
        unsigned v = 0;
        const std::string_view s(env);
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec == std::errc{} && res.ptr == s.data() + s.size() && v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Chaos game representation and k-mer distribution toolkit", "chaoskit"};
    app.require_subcommand(1);
    app.add_option("--policy", o.policy, "Handling of non-ACGT letters in FASTA input: skip, split or fail")
        ->check(CLI::IsMember({"skip", "split", "fail"}));

    auto* cgr_cmd = app.add_subcommand("cgr", "Chaos game representation of a FASTA file");
    cgr_cmd->require_subcommand(1);
    auto* render_cmd = cgr_cmd->add_subcommand("render", "Occupancy image of the order-r grid");
    render_cmd->add_option("-i,--input", o.input, "FASTA input")->required();
    render_cmd->add_option("-r,--resolution", o.resolution, "Image is 2^r x 2^r")->check(CLI::Range(1, kMaxRenderOrder));
    render_cmd->add_option("-o,--output", o.output, "PGM output")->required();
    auto* traj_cmd = cgr_cmd->add_subcommand("trajectory", "Trajectory points of the first record as TSV");
    traj_cmd->add_option("-i,--input", o.input, "FASTA input")->required();
    traj_cmd->add_option("-o,--output", o.output, "TSV output (stdout if omitted)");
    traj_cmd->add_option("--depth-cap", o.depth_cap, "Exact dyadic coordinates up to this many letters")
        ->check(CLI::Range(0, kMaxDepthCap));

    auto* fcgr_cmd = app.add_subcommand("fcgr", "Frequency matrix of order k, summed over records");
    fcgr_cmd->add_option("-i,--input", o.input, "FASTA input")->required();
    fcgr_cmd->add_option("-k", o.k, "Order")->required()->check(CLI::Range(1, kMaxDenseOrder));
    fcgr_cmd->add_option("--mode", o.mode, "count, grid or kronecker")->check(CLI::IsMember({"count", "grid", "kronecker"}));
    fcgr_cmd->add_option("-o,--output", o.output, "CSV output (stdout if omitted)");
    fcgr_cmd->add_option("--image", o.image, "Also write a PGM of the matrix");
    fcgr_cmd->add_option("--scale", o.scale, "Image intensity: linear or log")->check(CLI::IsMember({"linear", "log"}));

    auto* kmers_cmd = app.add_subcommand("kmers", "k-mer counts, summed over records");
    kmers_cmd->add_option("-i,--input", o.input, "FASTA input")->required();
    kmers_cmd->add_option("-k", o.k, "k-mer length")->required()->check(CLI::Range(1, kMaxDenseOrder));
    kmers_cmd->add_option("-o,--output", o.output, "CSV output (stdout if omitted)");

    auto* dist_cmd = app.add_subcommand("dist", "Empirical k-mer distribution, summed over records");
    dist_cmd->add_option("-i,--input", o.input, "FASTA input")->required();
    dist_cmd->add_option("-k", o.k, "k-mer length")->required()->check(CLI::Range(1, kMaxDenseOrder));
    dist_cmd->add_option("-o,--output", o.output, "CSV output (stdout if omitted)");
    dist_cmd->add_flag("--check-marginals", o.check_marginals, "Report the largest marginal residual on stderr");

    auto* sample_cmd = app.add_subcommand("sample", "Hit-and-run draw from the marginal-consistent simplex");
    sample_cmd->add_option("-k", o.k, "k-mer length")->required()->check(CLI::Range(2, 6));
    sample_cmd->add_option("--iterations", o.iterations, "Chain steps (default 1000 x kernel dimension)");
    sample_cmd->add_option("--seed", o.seed, "Generator seed");
    sample_cmd->add_option("-o,--output", o.output, "CSV output (stdout if omitted)");

    auto* rec_cmd = app.add_subcommand("reconstruct", "Build a sequence realising a k-mer distribution");
    rec_cmd->add_option("--theta", o.theta_path, "Distribution CSV")->required();
    rec_cmd->add_option("-n", o.n, "Target length")->required();
    rec_cmd->add_option("--seed", o.seed, "Accepted for symmetry with sample; reconstruction is deterministic");
    rec_cmd->add_option("-o,--output", o.output, "FASTA output (stdout if omitted)");
    rec_cmd->add_option("--report", o.report, "JSON report output");
    rec_cmd->add_option("--image", o.image, "Occupancy image of the result");
    rec_cmd->add_option("-r,--resolution", o.resolution, "Image is 2^r x 2^r")->check(CLI::Range(1, kMaxRenderOrder));

    auto* sym_cmd = app.add_subcommand("symmetry", "Apply a letter permutation from the square's symmetry set");
    sym_cmd->add_option("-i,--input", o.input, "FASTA input")->required();
    sym_cmd->add_option("--sigma", o.sigma, "Cycle notation, e.g. \"(A G)(C T)\"")->required();
    sym_cmd->add_option("-o,--output", o.output, "FASTA output (stdout if omitted)");

    auto* serve_cmd = app.add_subcommand("serve", "HTTP JSON API");
    serve_cmd->add_option("--port", o.port, "TCP port")->check(CLI::Range(1, 65535));
    serve_cmd->add_option("--host", o.host, "Bind address");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitValidation;
    }

    try {
        const NonAcgtPolicy policy = parse_policy(o.policy);
        auto records = [&] { return read_fasta_file(o.input, policy); };

        if (render_cmd->parsed()) {
            const auto seqs = usable_records(records(), o.resolution, err);
            const GrayImage img = render_cgr(std::span<const DnaSequence>(seqs), o.resolution);
            emit(o.output, out, true, [&](std::ostream& s) { write_pgm(s, img); });
        } else if (traj_cmd->parsed()) {
            const auto recs = records();
            if (recs.empty()) throw ValidationError("FASTA input has no records");
            const CgrTrajectory t = cgr_trajectory(recs.front().sequence, o.depth_cap);
            emit(o.output, out, false, [&](std::ostream& s) { write_trajectory_tsv(s, t); });
        } else if (fcgr_cmd->parsed()) {
            const auto seqs = usable_records(records(), o.k, err);
            const FcgrMatrix f = summed_fcgr(seqs, o.k, parse_fcgr_mode(o.mode));
            emit(o.output, out, false, [&](std::ostream& s) { write_fcgr_csv(s, f); });
            if (!o.image.empty()) write_pgm_file(o.image, render_fcgr(f, parse_scale(o.scale)));
        } else if (kmers_cmd->parsed()) {
            const KmerFrequencyVector counts = summed_counts(usable_records(records(), o.k, err), o.k);
            emit(o.output, out, false, [&](std::ostream& s) { write_counts_csv(s, counts); });
        } else if (dist_cmd->parsed()) {
            const KmerDistribution theta =
                empirical_distribution(summed_counts(usable_records(records(), o.k, err), o.k));
            emit(o.output, out, false, [&](std::ostream& s) { write_distribution_csv(s, theta); });
            if (o.check_marginals) {
                if (o.k < 2) throw ValidationError("--check-marginals needs k >= 2");
                const double residual = max_abs(marginal_residual(theta));
                err << "max marginal residual " << residual << " ("
                    << (residual <= kMarginalTolerance ? "consistent" : "not consistent") << " at tolerance "
                    << kMarginalTolerance << ")\n";
            }
        } else if (sample_cmd->parsed()) {
            const std::uint64_t iterations = o.iterations ? o.iterations : default_iterations(o.k);
            const KmerDistribution theta = hit_and_run_sample(o.k, iterations, o.seed);
            emit(o.output, out, false, [&](std::ostream& s) { write_distribution_csv(s, theta); });
        } else if (rec_cmd->parsed()) {
            const ParsedDistribution parsed = read_distribution_file(o.theta_path);
            if (parsed.renormalized) err << "warning: distribution renormalised to sum to 1\n";
            const Reconstruction rec = reconstruct(parsed.distribution, o.n);
            const FastaRecord record{fasta_header(rec.report), rec.sequence};
            emit(o.output, out, false, [&](std::ostream& s) { write_fasta(s, record); });
            if (!o.report.empty())
                emit(o.report, out, false, [&](std::ostream& s) { s << report_to_json(rec.report) << '\n'; });
            if (!o.image.empty()) write_pgm_file(o.image, render_cgr(rec.sequence, o.resolution));
        } else if (sym_cmd->parsed()) {
            const LetterPermutation sigma = LetterPermutation::parse(o.sigma);
            if (!sigma.in_dihedral_set())
                throw UnsupportedPermutationError("permutation " + sigma.cycle_notation() +
                                                  " is not induced by a symmetry of the square");
            const auto recs = records();
            emit(o.output, out, false, [&](std::ostream& s) {
                for (const auto& r : recs) write_fasta(s, {r.id, apply_permutation(sigma, r.sequence)});
            });
        } else if (serve_cmd->parsed()) {
            err << "listening on " << o.host << ':' << o.port << '\n';
            service::serve(o.host, o.port);
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::bad_alloc&) {
        err << "error: out of memory\n";
        return kExitValidation;
    }
    return kExitOk;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace chaoskit::cli
