#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "chaoskit/sequence.hpp"

namespace chaoskit {

// What to do with letters outside {A,C,G,T} (N runs, IUPAC codes, ...).
enum class NonAcgtPolicy {
    Skip,   // drop the symbol, join the neighbours
    Split,  // cut at the symbol and keep the longest clean fragment (later one on ties)
    Fail,   // raise ValidationError
};

NonAcgtPolicy parse_policy(std::string_view name);

struct FastaRecord {
    std::string id;  // full header text after '>'
    DnaSequence sequence;
};

// Streams records from `in`. Letters are case-folded and lines joined; blank
// lines and trailing '\r' are ignored. Sequence data before the first header
// is rejected.
std::vector<FastaRecord> parse_fasta(std::istream& in, NonAcgtPolicy policy = NonAcgtPolicy::Split);
std::vector<FastaRecord> read_fasta_file(const std::string& path, NonAcgtPolicy policy = NonAcgtPolicy::Split);

void write_fasta(std::ostream& out, const FastaRecord& record, std::size_t line_width = 80);

}  // namespace chaoskit
