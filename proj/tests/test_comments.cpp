#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "residua/comments.hpp"

using namespace residua;
namespace fs = std::filesystem;

TEST_CASE("golden fixtures match byte for byte") {
    const char* data = std::getenv("RESIDUA_TEST_DATA");
    REQUIRE_MESSAGE(data != nullptr, "RESIDUA_TEST_DATA must point at tests/");
    fs::path dir = fs::path(data) / "golden" / "comments";
    REQUIRE(fs::is_directory(dir));
    std::vector<fs::path> inputs;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".tex") inputs.push_back(e.path());
    std::sort(inputs.begin(), inputs.end());
    REQUIRE(inputs.size() >= 20);

    for (const fs::path& tex : inputs) {
        CAPTURE(tex.filename().string());
        std::string source = testutil::read_file(tex);
        CommentScan scan = extract_comments(source);
        CommentsDoc doc;
        for (CommentBlock& b : scan.blocks)
            doc.entries.push_back({tex.filename().string(), std::move(b)});
        fs::path expected_path = tex;
        expected_path.replace_extension(".expected");
        REQUIRE(fs::exists(expected_path));
        std::string expected = testutil::read_file(expected_path);
        CHECK(doc.serialize() == expected);
    }
}

TEST_CASE("masking blanks comment bytes but keeps line structure") {
    std::string src = "keep % gone\nnext\n\\iffalse\nX\n\\fi\nlast\n";
    CommentScan scan = extract_comments(src);
    std::string masked = mask_comments(src, scan);
    CHECK(masked.size() == src.size());
    CHECK(std::count(masked.begin(), masked.end(), '\n') ==
          std::count(src.begin(), src.end(), '\n'));
    CHECK(masked.find("gone") == std::string::npos);
    CHECK(masked.find("X") == std::string::npos);
    CHECK(masked.find("keep") != std::string::npos);
    CHECK(masked.find("next") != std::string::npos);
    CHECK(masked.find("last") != std::string::npos);
}

TEST_CASE("spans cover delimiters, blocks exclude them") {
    std::string src = "a%bc\n";
    CommentScan scan = extract_comments(src);
    REQUIRE(scan.blocks.size() == 1);
    CHECK(scan.blocks[0].text == "bc");
    REQUIRE(scan.spans.size() == 1);
    CHECK(scan.spans[0].first == 1);   // the '%' itself
    CHECK(scan.spans[0].second == 4);  // newline survives
}

TEST_CASE("unterminated blocks add diagnostics") {
    CHECK_FALSE(extract_comments("\\begin{comment}\nx").diagnostics.empty());
    CHECK_FALSE(extract_comments("\\iffalse\nx").diagnostics.empty());
    CHECK_FALSE(extract_comments("\\if0\nx").diagnostics.empty());
    CHECK(extract_comments("% fine\n").diagnostics.empty());
}

TEST_CASE("iffalse nesting tracks every conditional opener") {
    std::string src = "\\iffalse\n\\ifdim x\n\\ifx y\n\\fi\n\\fi\nstill\n\\fi\nout\n";
    CommentScan scan = extract_comments(src);
    REQUIRE(scan.blocks.size() == 1);
    CHECK(scan.blocks[0].text.find("still") != std::string::npos);
    CHECK(scan.blocks[0].text.find("out") == std::string::npos);
}

TEST_CASE("comment size oracle: 1000 one-line comments sum exactly") {
    // Line i carries a comment of i % 7 + 1 'c' bytes plus a leading space.
    std::string src;
    uint64_t expected = 0;
    for (int i = 0; i < 1000; ++i) {
        size_t n = static_cast<size_t>(i % 7) + 1;
        src += "text % ";
        src += std::string(n, 'c');
        src += "\n";
        expected += 1 + n;  // " " + c...c
    }
    CommentScan scan = extract_comments(src);
    REQUIRE(scan.blocks.size() == 1000);
    CommentsDoc doc;
    for (CommentBlock& b : scan.blocks) doc.entries.push_back({"f.tex", std::move(b)});
    CHECK(doc.total_text_bytes() == expected);
    for (size_t i = 0; i < doc.entries.size(); ++i)
        CHECK(doc.entries[i].block.start_line == i + 1);
}

TEST_CASE("comments document serialization roundtrip") {
    CommentsDoc doc;
    doc.entries.push_back({"a.tex", {CommentKind::LinePercent, 3, " note"}});
    doc.entries.push_back(
        {"b/c.tex", {CommentKind::IfFalse, 10, "multi\nline\ntext"}});
    doc.entries.push_back({"d.tex", {CommentKind::CommentEnvironment, 1, ""}});
    std::string ser = doc.serialize();
    auto parsed = CommentsDoc::parse(ser);
    REQUIRE(parsed.has_value());
    CHECK(parsed->entries == doc.entries);
    CHECK(parsed->total_text_bytes() == doc.total_text_bytes());

    CHECK_FALSE(CommentsDoc::parse("not a doc").has_value());
    CHECK_FALSE(CommentsDoc::parse("%% residua-comments v1\ngarbage\n").has_value());
    // Truncated payload (bytes= promises more than present).
    std::string cut = ser.substr(0, ser.size() - 4);
    CHECK_FALSE(CommentsDoc::parse(cut).has_value());
}

TEST_CASE("binary-ish comment text survives the framing") {
    std::string weird = "tab\thigh\xff nul";
    weird += '\0';
    weird += "end";
    CommentsDoc doc;
    doc.entries.push_back({"x.tex", {CommentKind::LinePercent, 1, weird}});
    auto parsed = CommentsDoc::parse(doc.serialize());
    REQUIRE(parsed.has_value());
    CHECK(parsed->entries[0].block.text == weird);
}
