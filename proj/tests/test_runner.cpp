#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <set>

#include "helpers.hpp"
#include "residua/aggregate.hpp"
#include "residua/classify.hpp"
#include "residua/ingest.hpp"
#include "residua/report.hpp"
#include "residua/runner.hpp"

using namespace residua;
namespace fs = std::filesystem;

namespace {

RawSubmission raw_from(const SubmissionId& id, std::string payload) {
    return RawSubmission{id, "", id.str() + ".gz", std::move(payload)};
}

AnalysisOutcome analyze_payload(const SubmissionId& id, std::string payload,
                                const std::string& scratch) {
    RawSubmission raw = raw_from(id, std::move(payload));
    Classification cls = classify_submission(raw);
    return analyze_submission(raw, cls, scratch, PatternConfig::defaults());
}

}  // namespace

TEST_CASE("single TeX submission produces used file and comments") {
    testutil::TempDir tmp("runner-single");
    SubmissionId id{24, 3, 42};
    std::string tex = "\\documentclass{article} % note\n\\begin{document}x\\end{document}\n";
    auto out = analyze_payload(id, testutil::gz_single_tex(tex, "main.tex"), tmp.str());
    CHECK(out.report.kind == SubmissionKind::SingleTex);
    REQUIRE(out.report.used.size() == 1);
    CHECK(out.report.used[0].path == "main.tex");
    CHECK(out.report.used[0].bytes == tex.size());
    CHECK(out.report.root.value_or("") == "main.tex");
    CHECK_FALSE(out.report.exclusion_reason.has_value());
    CHECK(out.has_comments_doc);
    REQUIRE(out.comments.entries.size() == 1);
    CHECK(out.comments.entries[0].block.text == " note");
    CHECK(out.report.comment_bytes == 5);
}

TEST_CASE("project blob partitions used, residual, and ancillary files") {
    testutil::TempDir tmp("runner-blob");
    SubmissionId id{24, 3, 43};
    std::map<std::string, std::string> files{
        {"main.tex",
         "\\documentclass{article}\n\\begin{document}\n"
         "\\input{chapter}\n\\includegraphics{fig1}\n\\end{document}\n"},
        {"chapter.tex", "text % leftover\n"},
        {"fig1.png", std::string(100, 'P')},
        {"fig2.png", std::string(50, 'Q')},
        {"anc/video.mp4", std::string(10, 'V')},
    };
    auto out = analyze_payload(id, testutil::gz_project(id, files), tmp.str());
    CHECK(out.report.kind == SubmissionKind::ProjectBlob);
    CHECK(out.report.root.value_or("") == "main.tex");
    REQUIRE(out.report.root_heuristic.has_value());
    CHECK(*out.report.root_heuristic == RootHeuristic::SoleCandidate);
    std::set<std::string> used;
    for (const auto& f : out.report.used) used.insert(f.path);
    CHECK(used == std::set<std::string>{"main.tex", "chapter.tex", "fig1.png"});
    REQUIRE(out.report.residual.size() == 1);
    CHECK(out.report.residual[0].path == "fig2.png");
    CHECK(out.report.residual[0].bytes == 50);
    CHECK(out.report.residual[0].group == TypeGroup::Image);
    REQUIRE(out.report.anc.size() == 1);
    CHECK(out.report.anc[0].path == "anc/video.mp4");
    CHECK(out.report.comment_bytes == 9);  // " leftover"
    // Scratch must be cleaned up afterwards.
    CHECK_FALSE(fs::exists(tmp.path / id.str()));
}

TEST_CASE("blob without a document class is excluded as unclear root") {
    testutil::TempDir tmp("runner-noroot");
    SubmissionId id{24, 3, 44};
    std::map<std::string, std::string> files{
        {"notes.tex", "just text, no class\n"},
        {"data.csv", "1,2\n"},
    };
    auto out = analyze_payload(id, testutil::gz_project(id, files), tmp.str());
    CHECK(out.report.kind == SubmissionKind::ProjectBlob);
    REQUIRE(out.report.exclusion_reason.has_value());
    CHECK(*out.report.exclusion_reason == ExclusionReason::UnclearRoot);
    CHECK(out.report.used.empty());
    CHECK_FALSE(out.has_comments_doc);
}

TEST_CASE("withdrawn and pdf-only kinds map to their reports") {
    testutil::TempDir tmp("runner-kinds");
    SubmissionId id{24, 3, 45};
    auto w = analyze_payload(id, gzip_compress("removed by author", "withdrawn"),
                             tmp.str());
    CHECK(w.report.kind == SubmissionKind::Withdrawn);
    CHECK(w.report.exclusion_reason == ExclusionReason::Withdrawn);

    RawSubmission pdf{id, "", id.str() + ".pdf", "%PDF-1.5 ..."};
    Classification cls = classify_submission(pdf);
    auto p = analyze_submission(pdf, cls, tmp.str(), PatternConfig::defaults());
    CHECK(p.report.kind == SubmissionKind::PdfOnly);
    CHECK_FALSE(p.report.exclusion_reason.has_value());
}

TEST_CASE("traversal blob is refused and marked unrecognized") {
    testutil::TempDir tmp("runner-traversal");
    SubmissionId id{24, 3, 46};
    TarWriter tw;
    tw.add_file("ok.tex", "\\documentclass{article}\n");
    tw.add_file("../evil.txt", "outside\n");
    auto out = analyze_payload(id, gzip_compress(tw.finish(), id.str()), tmp.str());
    CHECK(out.report.kind == SubmissionKind::UnrecognizedType);
    CHECK(out.report.exclusion_reason == ExclusionReason::UnclearType);
    CHECK_FALSE(fs::exists(tmp.path / id.str() / "ok.tex"));
    bool noted = false;
    for (const auto& d : out.report.diagnostics)
        if (d.find("..") != std::string::npos) noted = true;
    CHECK(noted);
}

TEST_CASE("scratch dir resolution: flag beats environment beats default") {
    RunConfig cfg;
    ::setenv(kScratchEnvVar, "/tmp/env-scratch", 1);
    cfg.scratch_dir = "/tmp/flag-scratch";
    CHECK(resolve_scratch_dir(cfg) == "/tmp/flag-scratch");
    cfg.scratch_dir.clear();
    CHECK(resolve_scratch_dir(cfg) == "/tmp/env-scratch");
    ::unsetenv(kScratchEnvVar);
    CHECK(resolve_scratch_dir(cfg).find("residua-scratch") != std::string::npos);
}

TEST_CASE("cmd_scan end to end: reports, resume, determinism") {
    testutil::TempDir corpus("runner-corpus");
    testutil::TempDir reports("runner-reports");
    testutil::TempDir reports2("runner-reports2");
    testutil::TempDir scratch("runner-scratch");

    std::vector<std::pair<std::string, std::string>> members;
    SubmissionId a{24, 1, 1}, b{24, 1, 2}, c{24, 2, 3}, d{23, 12, 4};
    members.push_back({a.str() + ".gz",
                       testutil::gz_single_tex("\\documentclass{article} % hi\n"
                                               "\\begin{document}.\\end{document}\n",
                                               "a.tex")});
    members.push_back({b.str() + ".gz",
                       testutil::gz_project(b, {{"main.tex",
                                                 "\\documentclass{article}\n"
                                                 "\\begin{document}.\\end{document}\n"},
                                                {"unused.dat", "xyz"}})});
    members.push_back({c.str() + ".pdf", "%PDF-1.4 content"});
    members.push_back({d.str() + ".gz", gzip_compress("withdrawn marker", "withdrawn")});
    testutil::write_chunk(corpus.path / "arXiv_src_2401_001.tar", members);

    RunConfig cfg;
    cfg.corpus_dir = corpus.str();
    cfg.report_dir = reports.str();
    cfg.scratch_dir = scratch.str();
    cfg.workers = 2;

    ScanOutcome out = cmd_scan(cfg);
    CHECK(out.exit_code == 0);
    CHECK(out.processed == 4);
    CHECK(out.failed == 0);
    CHECK(fs::exists(reports.path / (a.str() + ".json")));
    CHECK(fs::exists(reports.path / (a.str() + ".comments.txt")));
    CHECK(fs::exists(reports.path / (b.str() + ".json")));
    CHECK(fs::exists(reports.path / (c.str() + ".json")));
    CHECK_FALSE(fs::exists(reports.path / (c.str() + ".comments.txt")));
    CHECK(fs::exists(reports.path / "run.log.jsonl"));

    // Resume: nothing left to do.
    cfg.resume = true;
    ScanOutcome again = cmd_scan(cfg);
    CHECK(again.exit_code == 0);
    CHECK(again.processed == 0);
    CHECK(again.skipped_existing == 4);

    // A second directory gets byte-identical reports.
    RunConfig cfg2 = cfg;
    cfg2.resume = false;
    cfg2.report_dir = reports2.str();
    cmd_scan(cfg2);
    for (const SubmissionId& id : {a, b, c, d}) {
        auto p1 = reports.path / (id.str() + ".json");
        auto p2 = reports2.path / (id.str() + ".json");
        REQUIRE(fs::exists(p1));
        REQUIRE(fs::exists(p2));
        CHECK(testutil::read_file(p1) == testutil::read_file(p2));
    }

    // Year filtering selects only matching submissions.
    testutil::TempDir reports3("runner-reports3");
    RunConfig cfg3 = cfg;
    cfg3.resume = false;
    cfg3.report_dir = reports3.str();
    cfg3.year_min = 2024;
    cmd_scan(cfg3);
    CHECK(fs::exists(reports3.path / (a.str() + ".json")));
    CHECK_FALSE(fs::exists(reports3.path / (d.str() + ".json")));
}

TEST_CASE("cmd_scan reports duplicate ids once") {
    testutil::TempDir corpus("runner-dup");
    testutil::TempDir reports("runner-dup-reports");
    testutil::TempDir scratch("runner-dup-scratch");
    SubmissionId a{24, 5, 7};
    std::string payload = testutil::gz_single_tex(
        "\\documentclass{article}\n\\begin{document}.\\end{document}\n", "a.tex");
    testutil::write_chunk(corpus.path / "chunk1.tar", {{a.str() + ".gz", payload}});
    testutil::write_chunk(corpus.path / "chunk2.tar", {{a.str() + ".gz", payload}});
    RunConfig cfg;
    cfg.corpus_dir = corpus.str();
    cfg.report_dir = reports.str();
    cfg.scratch_dir = scratch.str();
    ScanOutcome out = cmd_scan(cfg);
    CHECK(out.exit_code == 0);
    CHECK(out.processed == 1);
}

TEST_CASE("cmd_aggregate and cmd_search run over scan output") {
    testutil::TempDir corpus("runner-agg-corpus");
    testutil::TempDir reports("runner-agg-reports");
    testutil::TempDir scratch("runner-agg-scratch");
    testutil::TempDir out("runner-agg-out");

    SubmissionId a{24, 6, 10};
    std::map<std::string, std::string> files{
        {"main.tex",
         "\\documentclass{article}\n% TODO fix the proof\n"
         "\\begin{document}.\\end{document}\n"},
        {"secret.xlsx", std::string(2000, 'x')},
    };
    testutil::write_chunk(corpus.path / "c.tar",
                          {{a.str() + ".gz", testutil::gz_project(a, files)}});
    RunConfig cfg;
    cfg.corpus_dir = corpus.str();
    cfg.report_dir = reports.str();
    cfg.scratch_dir = scratch.str();
    REQUIRE(cmd_scan(cfg).exit_code == 0);

    fs::path tables = out.path / "tables";
    CHECK(cmd_aggregate(reports.str(), tables.string(), "") == 0);
    CHECK(fs::exists(tables / "kinds.tsv"));
    CHECK(fs::exists(tables / "residual_bytes.tsv"));
    CHECK(fs::exists(tables / "corpus_report.json"));

    fs::path hits = out.path / "hits";
    CHECK(cmd_search(reports.str(), hits.string(), "", false) == 0);
    std::string counts = testutil::read_file(hits / "term_counts.tsv");
    CHECK(counts.find("todo\t1\t1") != std::string::npos);
    CHECK(counts.find(".xlsx\t1\t1") != std::string::npos);
    std::string chits = testutil::read_file(hits / "comment_hits.tsv");
    CHECK(chits.find("TODO fix the proof") != std::string::npos);
}

TEST_CASE("cmd_clean exports the used set only") {
    testutil::TempDir corpus("runner-clean-corpus");
    testutil::TempDir reports("runner-clean-reports");
    testutil::TempDir scratch("runner-clean-scratch");
    testutil::TempDir out("runner-clean-out");

    SubmissionId a{24, 7, 11};
    std::map<std::string, std::string> files{
        {"main.tex",
         "\\documentclass{article}\n\\begin{document}\\input{used}\\end{document}\n"},
        {"used.tex", "ok\n"},
        {"unused.log", "junk\n"},
        {"anc/extra.txt", "bonus\n"},
    };
    testutil::write_chunk(corpus.path / "c.tar",
                          {{a.str() + ".gz", testutil::gz_project(a, files)}});
    RunConfig cfg;
    cfg.corpus_dir = corpus.str();
    cfg.report_dir = reports.str();
    cfg.scratch_dir = scratch.str();
    REQUIRE(cmd_scan(cfg).exit_code == 0);

    fs::path dest = out.path / "cleaned";
    CHECK(cmd_clean(cfg, a.str(), dest.string(), false, false) == 0);
    CHECK(fs::exists(dest / "main.tex"));
    CHECK(fs::exists(dest / "used.tex"));
    CHECK_FALSE(fs::exists(dest / "unused.log"));
    CHECK_FALSE(fs::exists(dest / "anc/extra.txt"));

    // Second run without --force refuses to overwrite.
    CHECK(cmd_clean(cfg, a.str(), dest.string(), false, false) == 1);
    // With anc included and force set it succeeds.
    CHECK(cmd_clean(cfg, a.str(), dest.string(), true, true) == 0);
    CHECK(fs::exists(dest / "anc/extra.txt"));

    // Unknown id is a runtime failure, malformed id a usage error.
    CHECK(cmd_clean(cfg, "2407.99999", (out.path / "x").string(), false, false) == 1);
    CHECK(cmd_clean(cfg, "banana", (out.path / "x").string(), false, false) == 2);
}
