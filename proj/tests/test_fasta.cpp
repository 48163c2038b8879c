#include <doctest.h>

#include <sstream>

#include "chaoskit/errors.hpp"
#include "chaoskit/fasta.hpp"

using namespace chaoskit;

namespace {
std::vector<FastaRecord> parse(const std::string& text, NonAcgtPolicy policy = NonAcgtPolicy::Split) {
    std::istringstream in(text);
    return parse_fasta(in, policy);
}
}  // namespace

TEST_CASE("basic records") {
    auto r = parse(">x\nACGT\n");
    REQUIRE(r.size() == 1);
    CHECK(r[0].id == "x");
    CHECK(r[0].sequence.str() == "ACGT");
    r = parse(">x\nacg\nt\n");
    CHECK(r[0].sequence.str() == "ACGT");
    r = parse(">first record\r\nAC\r\n\r\nGT\r\n>second\nTTTT");
    REQUIRE(r.size() == 2);
    CHECK(r[0].id == "first record");
    CHECK(r[0].sequence.str() == "ACGT");
    CHECK(r[1].sequence.str() == "TTTT");
    CHECK(parse("").empty());
    CHECK(parse(">empty\n")[0].sequence.empty());
    CHECK_THROWS_AS(parse("ACGT\n>x\nA\n"), ValidationError);
}

TEST_CASE("non-ACGT policies") {
    CHECK(parse(">x\nACNNGT\n")[0].sequence.str() == "GT");
    CHECK(parse(">x\nACGNNT\n")[0].sequence.str() == "ACG");
    CHECK(parse(">x\nAC\nNN\nGTA\n")[0].sequence.str() == "GTA");
    CHECK(parse(">x\nACNNGT\n", NonAcgtPolicy::Skip)[0].sequence.str() == "ACGT");
    CHECK_THROWS_AS(parse(">x\nACNNGT\n", NonAcgtPolicy::Fail), ValidationError);
    CHECK(parse_policy("skip") == NonAcgtPolicy::Skip);
    CHECK_THROWS_AS(parse_policy("drop"), ValidationError);
}

TEST_CASE("write_fasta wraps lines") {
    std::ostringstream out;
    write_fasta(out, {"r", DnaSequence::from_string("ACGTACGTAC")}, 4);
    CHECK(out.str() == ">r\nACGT\nACGT\nAC\n");
    std::istringstream back(out.str());
    CHECK(parse_fasta(back)[0].sequence.str() == "ACGTACGTAC");
}

TEST_CASE("missing file is an I/O error") {
    CHECK_THROWS_AS(read_fasta_file("/nonexistent/input.fa"), IoError);
}
