#include "chaoskit/fasta.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "chaoskit/errors.hpp"

namespace chaoskit {

NonAcgtPolicy parse_policy(std::string_view name) {
    if (name == "skip") return NonAcgtPolicy::Skip;
    if (name == "split") return NonAcgtPolicy::Split;
    if (name == "fail") return NonAcgtPolicy::Fail;
    throw ValidationError("unknown non-ACGT policy '" + std::string(name) + "' (skip|split|fail)");
}

namespace {

// Accumulates one record's letters under the chosen policy. For Split, the
// current fragment competes with the best so far each time it is cut.
class RecordBuilder {
public:
    RecordBuilder(std::string id, NonAcgtPolicy policy) : id_(std::move(id)), policy_(policy) {}

    void feed(std::string_view line, std::size_t line_no) {
        for (char c : line) {
            if (auto n = nucleotide_from_char(c)) {
                current_.push_back(*n);
                continue;
            }
            switch (policy_) {
                case NonAcgtPolicy::Skip: break;
                case NonAcgtPolicy::Split: cut(); break;
                case NonAcgtPolicy::Fail:
                    throw ValidationError("non-ACGT symbol '" + std::string(1, c) + "' in record '" + id_ +
                                          "' at line " + std::to_string(line_no));
            }
        }
    }

    FastaRecord finish() {
        if (policy_ == NonAcgtPolicy::Split) {
            cut();
            return {std::move(id_), DnaSequence(std::move(best_))};
        }
        return {std::move(id_), DnaSequence(std::move(current_))};
    }

private:
    void cut() {
        if (!current_.empty() && current_.size() >= best_.size()) best_.swap(current_);
        current_.clear();
    }

    std::string id_;
    NonAcgtPolicy policy_;
    std::vector<Nucleotide> current_;
    std::vector<Nucleotide> best_;
};

std::string_view trim(std::string_view s) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

}  // namespace

std::vector<FastaRecord> parse_fasta(std::istream& in, NonAcgtPolicy policy) {
    std::vector<FastaRecord> records;
    std::optional<RecordBuilder> current;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
        if (!view.empty() && view.front() == '>') {
            if (current) records.push_back(current->finish());
            current.emplace(std::string(view.substr(1)), policy);
            continue;
        }
        view = trim(view);
        if (view.empty()) continue;
        if (!current) throw ValidationError("sequence data before the first FASTA header (line " +
                                            std::to_string(line_no) + ")");
        current->feed(view, line_no);
    }
    if (in.bad()) throw IoError("read failure while parsing FASTA");
    if (current) records.push_back(current->finish());
    return records;
}

std::vector<FastaRecord> read_fasta_file(const std::string& path, NonAcgtPolicy policy) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return parse_fasta(in, policy);
}

void write_fasta(std::ostream& out, const FastaRecord& record, std::size_t line_width) {
    out << '>' << record.id << '\n';
    const std::string text = record.sequence.str();
    for (std::size_t pos = 0; pos < text.size(); pos += line_width)
        out << std::string_view(text).substr(pos, line_width) << '\n';
    if (!out) throw IoError("write failure while emitting FASTA");
}

}  // namespace chaoskit
