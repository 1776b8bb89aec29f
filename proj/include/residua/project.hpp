#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace residua {

// One file inside an unpacked submission.
struct FileEntry {
    std::string relative_path;  // normalized, '/'-separated, no leading "./"
    uint64_t size = 0;
    bool is_tex = false;  // ".tex" extension, case-insensitive
    bool in_anc = false;  // under the top-level ancillary dir "anc/"

    bool operator==(const FileEntry&) const = default;
};

// Read access to a project's files, independent of where they live.
class ProjectFiles {
public:
    virtual ~ProjectFiles() = default;
    // Sorted by relative_path.
    virtual const std::vector<FileEntry>& files() const = 0;
    virtual std::optional<std::string> read(const std::string& relative_path) const = 0;
};

// Project unpacked into a directory on disk.
class DirProject final : public ProjectFiles {
public:
    explicit DirProject(std::string root_dir);
    const std::vector<FileEntry>& files() const override { return files_; }
    std::optional<std::string> read(const std::string& relative_path) const override;
    const std::string& root_dir() const { return root_dir_; }

private:
    std::string root_dir_;
    std::vector<FileEntry> files_;
};

// In-memory project, mainly for tests.
class MemProject final : public ProjectFiles {
public:
    void add(const std::string& relative_path, std::string content);
    const std::vector<FileEntry>& files() const override;
    std::optional<std::string> read(const std::string& relative_path) const override;

private:
    std::map<std::string, std::string> contents_;
    mutable std::vector<FileEntry> files_;
};

FileEntry make_file_entry(const std::string& relative_path, uint64_t size);

}  // namespace residua
