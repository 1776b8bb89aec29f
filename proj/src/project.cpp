#include "residua/project.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "residua/text.hpp"

namespace fs = std::filesystem;

namespace residua {

FileEntry make_file_entry(const std::string& relative_path, uint64_t size) {
    FileEntry e;
    e.relative_path = relative_path;
    e.size = size;
    e.is_tex = lower_extension(relative_path) == ".tex";
    e.in_anc = relative_path.rfind("anc/", 0) == 0;
    return e;
}

DirProject::DirProject(std::string root_dir) : root_dir_(std::move(root_dir)) {
    fs::path root(root_dir_);
    std::error_code ec;
    for (auto it = fs::recursive_directory_iterator(root, ec);
         !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (!it->is_regular_file(ec)) continue;
        std::string rel = fs::relative(it->path(), root, ec).generic_string();
        if (ec || rel.empty()) continue;
        uint64_t size = static_cast<uint64_t>(it->file_size(ec));
        if (ec) size = 0;
        files_.push_back(make_file_entry(rel, size));
    }
    std::sort(files_.begin(), files_.end(),
              [](const FileEntry& a, const FileEntry& b) {
                  return a.relative_path < b.relative_path;
              });
}

std::optional<std::string> DirProject::read(const std::string& relative_path) const {
    std::ifstream in(fs::path(root_dir_) / fs::path(relative_path),
                     std::ios::binary);
    if (!in) return std::nullopt;
    std::string data((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return data;
}

void MemProject::add(const std::string& relative_path, std::string content) {
    contents_[relative_path] = std::move(content);
    files_.clear();
}

const std::vector<FileEntry>& MemProject::files() const {
    if (files_.empty() && !contents_.empty()) {
        for (const auto& [path, data] : contents_)
            files_.push_back(make_file_entry(path, data.size()));
    }
    return files_;
}

std::optional<std::string> MemProject::read(const std::string& relative_path) const {
    auto it = contents_.find(relative_path);
    if (it == contents_.end()) return std::nullopt;
    return it->second;
}

}  // namespace residua
