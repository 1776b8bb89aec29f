#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace residua {

// Content sniffing by magic bytes.
bool looks_like_gzip(std::string_view data);
bool looks_like_pdf(std::string_view data);
bool looks_like_tar(std::string_view data);   // "ustar" at offset 257
bool looks_like_zip(std::string_view data);

struct GzipResult {
    bool ok = false;
    std::string error;
    std::string data;          // first member, decompressed
    std::string member_name;   // FNAME header field, "" when absent
    bool trailing_members = false;  // bytes after the first member
};

// Decompresses the first gzip member of `raw`.
GzipResult gzip_decompress(std::string_view raw, size_t max_output = 1ull << 32);

// Single-member gzip with an optional FNAME header. Used by tests and
// corpus generators.
std::string gzip_compress(std::string_view data, const std::string& member_name = "");

enum class TarEntryType { File, Directory, Link, Other };

struct TarEntry {
    std::string path;      // raw name from the header chain (prefix/pax/longname applied)
    TarEntryType type = TarEntryType::File;
    uint64_t size = 0;
    uint64_t data_offset = 0;  // offset of the data region in the source buffer/file
    std::string data;          // filled by list_tar_entries, empty for index_tar_file
};

struct TarReadResult {
    bool ok = false;            // false when parsing stopped early
    std::string error;          // first fatal problem (truncation, bad header)
    std::vector<TarEntry> entries;  // entries successfully parsed before any error
    std::vector<std::string> notes; // non-fatal oddities (skipped link members, ...)
};

// Parses an in-memory tar, materializing file data.
TarReadResult list_tar_entries(std::string_view tar);

// Walks headers of a tar file on disk without loading data; entries carry
// data_offset/size for later random-access reads.
TarReadResult index_tar_file(const std::string& tar_path);

// Reads one indexed member from a tar file on disk.
std::optional<std::string> read_tar_member(const std::string& tar_path,
                                           const TarEntry& entry);

// Minimal ustar writer (files and directories), for tests and generators.
class TarWriter {
public:
    void add_file(const std::string& path, std::string_view data);
    void add_dir(const std::string& path);
    // Raw header escape hatch: emits a header with the given name/type/size
    // followed by `data` padded to block size. Lets tests craft hostile archives.
    void add_raw(const std::string& name, char typeflag, std::string_view data);
    std::string finish();  // appends the two terminating zero blocks

private:
    std::string buf_;
};

}  // namespace residua
