#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "helpers.hpp"
#include "residua/archive.hpp"

using namespace residua;

TEST_CASE("magic byte sniffing") {
    CHECK(looks_like_gzip("\x1f\x8b\x08rest"));
    CHECK_FALSE(looks_like_gzip("\x1f"));
    CHECK(looks_like_pdf("%PDF-1.7\n"));
    CHECK_FALSE(looks_like_pdf(" %PDF"));
    CHECK(looks_like_zip("PK\x03\x04" "data"));
    std::string tar(512, '\0');
    tar.replace(257, 5, "ustar");
    CHECK(looks_like_tar(tar));
    CHECK_FALSE(looks_like_tar(std::string(100, 'x')));
}

TEST_CASE("gzip roundtrip preserves data and member name") {
    std::string data = "hello \x00 binary \xff world";
    data[6] = '\0';
    std::string gz = gzip_compress(data, "inner.tex");
    CHECK(looks_like_gzip(gz));
    GzipResult r = gzip_decompress(gz);
    REQUIRE(r.ok);
    CHECK(r.data == data);
    CHECK(r.member_name == "inner.tex");
    CHECK_FALSE(r.trailing_members);

    GzipResult anon = gzip_decompress(gzip_compress("x"));
    REQUIRE(anon.ok);
    CHECK(anon.member_name == "");
}

TEST_CASE("gzip trailing members are detected") {
    std::string two = gzip_compress("first", "a") + gzip_compress("second", "b");
    GzipResult r = gzip_decompress(two);
    REQUIRE(r.ok);
    CHECK(r.data == "first");
    CHECK(r.trailing_members);
}

TEST_CASE("corrupt gzip fails with an error") {
    std::string gz = gzip_compress("payload", "x");
    gz[gz.size() / 2] ^= 0x5a;
    GzipResult r = gzip_decompress(gz);
    bool intact = r.ok && r.data == "payload";
    CHECK_FALSE(intact);
    CHECK_FALSE(gzip_decompress("not gzip at all").ok);
    CHECK_FALSE(gzip_decompress("").ok);
}

TEST_CASE("gzip output cap refuses oversized expansion") {
    std::string big(1 << 20, 'a');
    std::string gz = gzip_compress(big);
    GzipResult r = gzip_decompress(gz, 1024);
    CHECK_FALSE(r.ok);
}

TEST_CASE("tar roundtrip with directories and long names") {
    TarWriter tw;
    tw.add_dir("sub/");
    tw.add_file("a.tex", "alpha");
    std::string long_name(150, 'n');
    long_name += ".png";
    tw.add_file(long_name, "img");
    tw.add_file("sub/b.bib", std::string(513, 'b'));  // forces block padding
    std::string tar = tw.finish();
    CHECK(tar.size() % 512 == 0);

    TarReadResult r = list_tar_entries(tar);
    REQUIRE(r.ok);
    REQUIRE(r.entries.size() == 4);
    CHECK(r.entries[0].path == "sub/");
    CHECK(r.entries[0].type == TarEntryType::Directory);
    CHECK(r.entries[1].path == "a.tex");
    CHECK(r.entries[1].data == "alpha");
    CHECK(r.entries[2].path == long_name);
    CHECK(r.entries[2].data == "img");
    CHECK(r.entries[3].data.size() == 513);
}

TEST_CASE("truncated chunk yields parsed prefix plus error") {
    // Three members; cut the archive in the middle of the third's data.
    TarWriter tw;
    tw.add_file("one.gz", std::string(600, '1'));
    tw.add_file("two.gz", std::string(600, '2'));
    tw.add_file("three.gz", std::string(600, '3'));
    std::string tar = tw.finish();
    // Header sizes: each member = 512 header + 1024 data (600 padded). The
    // third member's data begins at 2*(512+1024)+512 = 3584; cut inside it.
    std::string cut = tar.substr(0, 3584 + 100);
    TarReadResult r = list_tar_entries(cut);
    CHECK_FALSE(r.ok);
    CHECK_FALSE(r.error.empty());
    REQUIRE(r.entries.size() == 2);
    CHECK(r.entries[0].path == "one.gz");
    CHECK(r.entries[1].path == "two.gz");
    CHECK(r.entries[1].data == std::string(600, '2'));
}

TEST_CASE("bad checksum stops parsing") {
    TarWriter tw;
    tw.add_file("ok.tex", "fine");
    std::string tar = tw.finish();
    tar[148] = '9';  // clobber checksum field
    TarReadResult r = list_tar_entries(tar);
    CHECK_FALSE(r.ok);
    CHECK(r.entries.empty());
}

TEST_CASE("pax path override and link entries") {
    // pax extended header: "x" member whose data sets path=override.tex
    std::string record = "path=override.tex\n";
    std::string payload = std::to_string(record.size() + 3) + " " + record;
    // length prefix counts itself; recompute until stable
    for (int i = 0; i < 3; ++i) {
        size_t total = payload.find(' ') + 1 + record.size();
        payload = std::to_string(total) + " " + record;
    }
    TarWriter tw;
    tw.add_raw("ignored", 'x', payload);
    tw.add_file("fallback.tex", "data");
    tw.add_raw("alink", '2', "");
    tw.add_file("after.tex", "tail");
    TarReadResult r = list_tar_entries(tw.finish());
    REQUIRE(r.ok);
    // Link members are skipped (never materialized), leaving a note.
    REQUIRE(r.entries.size() == 2);
    CHECK(r.entries[0].path == "override.tex");
    CHECK(r.entries[0].data == "data");
    CHECK(r.entries[1].path == "after.tex");
    bool link_note = false;
    for (const auto& n : r.notes)
        if (n.find("alink") != std::string::npos) link_note = true;
    CHECK(link_note);
}

TEST_CASE("file-backed index and member reads") {
    testutil::TempDir tmp("archive-index");
    TarWriter tw;
    tw.add_file("x.gz", "XXXX");
    tw.add_file("y.gz", "YYYYYYYY");
    auto path = tmp.path / "chunk.tar";
    testutil::write_file(path, tw.finish());

    TarReadResult r = index_tar_file(path.string());
    REQUIRE(r.ok);
    REQUIRE(r.entries.size() == 2);
    CHECK(r.entries[0].data.empty());  // index never materializes data
    CHECK(r.entries[0].size == 4);
    auto x = read_tar_member(path.string(), r.entries[0]);
    REQUIRE(x.has_value());
    CHECK(*x == "XXXX");
    auto y = read_tar_member(path.string(), r.entries[1]);
    REQUIRE(y.has_value());
    CHECK(*y == "YYYYYYYY");
}
