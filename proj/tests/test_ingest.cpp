#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "helpers.hpp"
#include "residua/ingest.hpp"

using namespace residua;
namespace fs = std::filesystem;

TEST_CASE("submission id parsing") {
    auto id = parse_submission_id("2403.01234");
    REQUIRE(id.has_value());
    CHECK(id->year == 24);
    CHECK(id->month == 3);
    CHECK(id->serial == 1234);
    CHECK(id->str() == "2403.01234");
    CHECK_FALSE(parse_submission_id("2413.00001").has_value());  // month 13
    CHECK_FALSE(parse_submission_id("2400.00001").has_value());  // month 0
    CHECK_FALSE(parse_submission_id("240.00001").has_value());
    CHECK_FALSE(parse_submission_id("2403.1234").has_value());
    CHECK_FALSE(parse_submission_id("2403-01234").has_value());
    CHECK_FALSE(parse_submission_id("a403.01234").has_value());
}

TEST_CASE("corpus scan over chunks and loose files") {
    testutil::TempDir corpus("ingest-scan");
    SubmissionId a{24, 1, 1}, b{24, 1, 2}, c{24, 2, 9};
    testutil::write_chunk(corpus.path / "arXiv_src_2401_001.tar",
                          {{a.str() + ".gz", testutil::gz_single_tex("\\x y", "a.tex")},
                           {b.str() + ".pdf", "%PDF-1.4"},
                           {"oddball.txt", "not a submission"}});
    testutil::write_file(corpus.path / (c.str() + ".gz"),
                         testutil::gz_single_tex("\\documentclass{x}", "c.tex"));
    testutil::write_file(corpus.path / "README", "ignore me");

    ScanResult r = scan_corpus(corpus.str());
    REQUIRE(r.entries.size() == 3);
    CHECK(r.errors.empty());
    // Ordered by container filename then entry name; the loose file
    // "2402...gz" sorts before "arXiv_src_...tar".
    CHECK(r.entries[0].id == c);
    CHECK(r.entries[1].id == a);
    CHECK(r.entries[2].id == b);
    CHECK(r.entries[0].chunk_path.empty());
    CHECK_FALSE(r.entries[0].loose_path.empty());
    REQUIRE(r.irregular.size() == 2);

    // Loading a chunked and a loose entry returns the stored payload.
    auto blob = r.entries[2].load();
    REQUIRE(blob.has_value());
    CHECK(*blob == "%PDF-1.4");
    CHECK(r.entries[0].load().has_value());
}

TEST_CASE("corrupt chunk contributes its parseable prefix and an error") {
    testutil::TempDir corpus("ingest-corrupt");
    SubmissionId a{24, 1, 1}, b{24, 1, 2}, c{24, 1, 3};
    TarWriter tw;
    tw.add_file(a.str() + ".gz", std::string(600, 'a'));
    tw.add_file(b.str() + ".gz", std::string(600, 'b'));
    tw.add_file(c.str() + ".gz", std::string(600, 'c'));
    std::string tar = tw.finish();
    testutil::write_file(corpus.path / "chunk.tar", tar.substr(0, 3584 + 40));

    ScanResult r = scan_corpus(corpus.str());
    REQUIRE(r.entries.size() == 2);
    CHECK(r.entries[0].id == a);
    CHECK(r.entries[1].id == b);
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].find("chunk.tar") != std::string::npos);
    // The surviving members still load.
    auto data = r.entries[1].load();
    REQUIRE(data.has_value());
    CHECK(*data == std::string(600, 'b'));
}

TEST_CASE("classification: pdf requires extension plus magic") {
    SubmissionId id{24, 5, 77};
    Classification c1 =
        classify_submission({id, "", id.str() + ".pdf", "%PDF-1.5 stuff"});
    CHECK(c1.kind == SubmissionKind::PdfOnly);
    // .pdf extension without the magic is not a PDF submission.
    Classification c2 =
        classify_submission({id, "", id.str() + ".pdf", "binary junk"});
    CHECK(c2.kind == SubmissionKind::UnrecognizedType);
    CHECK_FALSE(c2.note.empty());
    // Raw PDF bytes under a .gz entry are not gzip either.
    Classification c3 = classify_submission({id, "", id.str() + ".gz", "%PDF-1.5"});
    CHECK(c3.kind == SubmissionKind::UnrecognizedType);
}

TEST_CASE("classification: withdrawn marker") {
    SubmissionId id{24, 5, 78};
    std::string gz = gzip_compress("This submission has been withdrawn.", "withdrawn");
    Classification c = classify_submission({id, "", id.str() + ".gz", gz});
    CHECK(c.kind == SubmissionKind::Withdrawn);
    // An extension keeps it a normal file, not a marker.
    std::string gz2 = gzip_compress("\\documentclass{a}", "withdrawn.tex");
    CHECK(classify_submission({id, "", id.str() + ".gz", gz2}).kind ==
          SubmissionKind::SingleTex);
}

TEST_CASE("classification: project blob requires the id as member name") {
    SubmissionId id{24, 5, 79};
    TarWriter tw;
    tw.add_file("main.tex", "\\documentclass{article}");
    std::string tar = tw.finish();
    Classification c =
        classify_submission({id, "", id.str() + ".gz", gzip_compress(tar, id.str())});
    CHECK(c.kind == SubmissionKind::ProjectBlob);
    CHECK(c.inner_data == tar);

    // Same bytes under a mismatched name: the tar magic still reads, but the
    // name contract is broken; text heuristic fails on tar bytes.
    Classification other = classify_submission(
        {id, "", id.str() + ".gz", gzip_compress(tar, "something-else")});
    CHECK(other.kind == SubmissionKind::UnrecognizedType);
}

TEST_CASE("classification: single TeX and name fallback") {
    SubmissionId id{24, 5, 80};
    std::string gz = gzip_compress("\\documentclass{article}\nHi.\n", "paper.tex");
    Classification c = classify_submission({id, "", id.str() + ".gz", gz});
    CHECK(c.kind == SubmissionKind::SingleTex);
    CHECK(c.inner_name == "paper.tex");

    // No FNAME header: fall back to the submission id.
    std::string anon = gzip_compress("\\documentclass{article}\n");
    Classification c2 = classify_submission({id, "", id.str() + ".gz", anon});
    CHECK(c2.kind == SubmissionKind::SingleTex);
    CHECK(c2.inner_name == id.str());
}

TEST_CASE("classification: undecodable and unknown payloads") {
    SubmissionId id{24, 5, 81};
    Classification bad = classify_submission({id, "", id.str() + ".gz", "garbage"});
    CHECK(bad.kind == SubmissionKind::UnrecognizedType);
    CHECK_FALSE(bad.note.empty());

    std::string zip = gzip_compress(std::string("PK\x03\x04") + "zipdata", id.str());
    Classification z = classify_submission({id, "", id.str() + ".gz", zip});
    CHECK(z.kind == SubmissionKind::UnrecognizedType);
    CHECK(z.note.find("zip") != std::string::npos);

    std::string bin = gzip_compress(std::string("\xff\xfe\0\0garbage", 11), "blob.bin");
    CHECK(classify_submission({id, "", id.str() + ".gz", bin}).kind ==
          SubmissionKind::UnrecognizedType);
}

TEST_CASE("classification: multi-member gzip violates the container contract") {
    SubmissionId id{24, 5, 82};
    std::string gz =
        gzip_compress("\\documentclass{a}\n", "x.tex") + gzip_compress("extra", "y");
    Classification c = classify_submission({id, "", id.str() + ".gz", gz});
    CHECK(c.kind == SubmissionKind::UnrecognizedType);
    CHECK(c.note.find("more than one file") != std::string::npos);
}

TEST_CASE("unpack rejects traversal before writing anything") {
    testutil::TempDir tmp("ingest-unpack");
    TarWriter evil;
    evil.add_file("fine.tex", "ok");
    evil.add_file("../../escape.sh", "payload");
    auto dest = tmp.path / "dest";
    fs::create_directories(dest);
    UnpackResult r = unpack_blob(evil.finish(), dest.string());
    CHECK_FALSE(r.ok);
    CHECK(r.error.find("..") != std::string::npos);
    CHECK(fs::is_empty(dest));

    TarWriter abs;
    abs.add_file("/etc/owned", "payload");
    UnpackResult r2 = unpack_blob(abs.finish(), dest.string());
    CHECK_FALSE(r2.ok);
    CHECK(fs::is_empty(dest));
}

TEST_CASE("unpack writes normalized trees and notes duplicates") {
    testutil::TempDir tmp("ingest-unpack-ok");
    TarWriter tw;
    tw.add_file("./main.tex", "one");
    tw.add_file("sub/fig.png", "img");
    tw.add_file("main.tex", "two");  // duplicate wins, with a note
    auto dest = tmp.path / "dest";
    UnpackResult r = unpack_blob(tw.finish(), dest.string());
    REQUIRE(r.ok);
    CHECK(r.file_count == 3);
    CHECK(testutil::read_file(dest / "main.tex") == "two");
    CHECK(testutil::read_file(dest / "sub/fig.png") == "img");
    bool dup_note = false;
    for (const auto& n : r.notes)
        if (n.find("main.tex") != std::string::npos) dup_note = true;
    CHECK(dup_note);
}
