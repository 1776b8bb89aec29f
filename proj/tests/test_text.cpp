#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "residua/text.hpp"

using namespace residua;

TEST_CASE("utf8 validation") {
    CHECK(is_valid_utf8(""));
    CHECK(is_valid_utf8("plain ascii"));
    CHECK(is_valid_utf8("caf\xc3\xa9"));
    CHECK(is_valid_utf8("\xe2\x82\xac"));      // euro sign
    CHECK(is_valid_utf8("\xf0\x9f\x98\x80"));  // emoji
    CHECK_FALSE(is_valid_utf8("\xc3"));        // truncated sequence
    CHECK_FALSE(is_valid_utf8("\xc0\xaf"));    // overlong encoding
    CHECK_FALSE(is_valid_utf8("\xff"));
    CHECK_FALSE(is_valid_utf8("\xed\xa0\x80"));  // surrogate half
}

TEST_CASE("lossy conversion keeps valid text and replaces bad bytes") {
    CHECK(to_utf8_lossy("hello") == "hello");
    CHECK(to_utf8_lossy("caf\xc3\xa9") == "caf\xc3\xa9");
    std::string fixed = to_utf8_lossy("a\xffz");
    CHECK(is_valid_utf8(fixed));
    CHECK(fixed.find("a") == 0);
    CHECK(fixed.find('z') != std::string::npos);
    CHECK(fixed.find("\xef\xbf\xbd") != std::string::npos);  // U+FFFD
}

TEST_CASE("latin1 conversion") {
    CHECK(latin1_to_utf8("abc") == "abc");
    CHECK(latin1_to_utf8("\xe9") == "\xc3\xa9");
    CHECK(is_valid_utf8(latin1_to_utf8("\x80\xff")));
}

TEST_CASE("ascii case helpers") {
    CHECK(ascii_lower_copy("MiXeD123") == "mixed123");
    CHECK(iequals_ascii("TeX", "tex"));
    CHECK_FALSE(iequals_ascii("tex", "text"));
}

TEST_CASE("trim and split") {
    CHECK(trim("  x  ") == "x");
    CHECK(trim("\t\r\n a b \n") == "a b");
    CHECK(trim("") == "");
    auto parts = split("a,b,,c", ',');
    REQUIRE(parts.size() == 4);
    CHECK(parts[0] == "a");
    CHECK(parts[2] == "");
    CHECK(split("", ',').size() == 1);
}

TEST_CASE("extension extraction with compound suffixes") {
    CHECK(lower_extension("a/b/Main.TEX") == ".tex");
    CHECK(lower_extension("noext") == "");
    CHECK(lower_extension("dir.d/noext") == "");
    CHECK(lower_extension(".hidden") == "");
    CHECK(lower_extension("x.tar.gz") == ".gz");
    std::vector<std::string> compound{".synctex.gz"};
    CHECK(lower_extension("paper.synctex.gz", compound) == ".synctex.gz");
    CHECK(lower_extension("PAPER.SYNCTEX.GZ", compound) == ".synctex.gz");
    CHECK(lower_extension("paper.tar.gz", compound) == ".gz");
}

TEST_CASE("path component helpers") {
    CHECK(basename_of("a/b/c.tex") == "c.tex");
    CHECK(basename_of("c.tex") == "c.tex");
    CHECK(dirname_of("a/b/c.tex") == "a/b");
    CHECK(dirname_of("c.tex") == "");
    CHECK(stem_of("a/b/c.tex") == "c");
    CHECK(stem_of("a/b/noext") == "noext");
}

TEST_CASE("relative path normalization") {
    CHECK(normalize_relpath("a/b.tex").value_or("") == "a/b.tex");
    CHECK(normalize_relpath("./a//b.tex").value_or("") == "a/b.tex");
    CHECK(normalize_relpath("a\\b\\c.png").value_or("") == "a/b/c.png");
    CHECK(normalize_relpath("a/../b.tex").value_or("") == "b.tex");
    CHECK(normalize_relpath("a/./b.tex").value_or("") == "a/b.tex");
    CHECK_FALSE(normalize_relpath("../escape").has_value());
    CHECK_FALSE(normalize_relpath("a/../../escape").has_value());
    CHECK_FALSE(normalize_relpath("/absolute").has_value());
    CHECK_FALSE(normalize_relpath("C:\\windows").has_value());
}

TEST_CASE("TeX text heuristic") {
    CHECK(looks_like_tex_text("\\documentclass{article}\n"));
    CHECK(looks_like_tex_text("plain prose with \\emph{markup}"));
    CHECK_FALSE(looks_like_tex_text(std::string("bin\0ary", 7)));
    std::string controls(100, '\x01');
    CHECK_FALSE(looks_like_tex_text(controls));
    CHECK_FALSE(looks_like_tex_text("no backslash commands at all"));
}
