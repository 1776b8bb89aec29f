#pragma once

// Shared helpers for building synthetic corpora and projects in tests.

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "residua/archive.hpp"
#include "residua/submission.hpp"

namespace testutil {

// Self-deleting unique temp directory.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        auto base = std::filesystem::temp_directory_path();
        path = base / ("residua-test-" + tag + "-" + std::to_string(::getpid()) +
                       "-" + std::to_string(counter.fetch_add(1)));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string str() const { return path.string(); }
};

inline void write_file(const std::filesystem::path& p, std::string_view data) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    os.write(data.data(), static_cast<std::streamsize>(data.size()));
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// Payload of a single-TeX submission: gzip with FNAME = member_name.
inline std::string gz_single_tex(std::string_view tex,
                                 const std::string& member_name) {
    return residua::gzip_compress(tex, member_name);
}

// Payload of a multi-file project submission: gzip(FNAME = id) around a tar.
inline std::string gz_project(const residua::SubmissionId& id,
                              const std::map<std::string, std::string>& files) {
    residua::TarWriter tw;
    for (const auto& [path, data] : files) tw.add_file(path, data);
    return residua::gzip_compress(tw.finish(), id.str());
}

// Writes one corpus chunk tar holding (entry_name, payload) members.
inline void write_chunk(
    const std::filesystem::path& chunk_path,
    const std::vector<std::pair<std::string, std::string>>& members) {
    residua::TarWriter tw;
    for (const auto& [name, payload] : members) tw.add_file(name, payload);
    write_file(chunk_path, tw.finish());
}

inline residua::SubmissionId make_id(int year, int month, int serial) {
    return residua::SubmissionId{year, month, serial};
}

}  // namespace testutil
