#include "residua/ingest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "residua/archive.hpp"
#include "residua/text.hpp"

namespace fs = std::filesystem;

namespace residua {

namespace {

std::optional<std::string> read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::string data((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return data;
}

bool has_suffix_ci(std::string_view name, std::string_view suffix) {
    if (name.size() < suffix.size()) return false;
    return iequals_ascii(name.substr(name.size() - suffix.size()), suffix);
}

// Accepts "YYMM.XXXXX.pdf" or "YYMM.XXXXX.gz".
std::optional<SubmissionId> conforming_entry_id(std::string_view name) {
    std::string_view stem;
    if (has_suffix_ci(name, ".pdf")) stem = name.substr(0, name.size() - 4);
    else if (has_suffix_ci(name, ".gz")) stem = name.substr(0, name.size() - 3);
    else return std::nullopt;
    return parse_submission_id(stem);
}

}  // namespace

std::optional<std::string> CorpusEntryRef::load() const {
    if (chunk_path.empty()) return read_file(loose_path);
    TarEntry e;
    e.path = entry_name;
    e.data_offset = offset;
    e.size = size;
    return read_tar_member(chunk_path, e);
}

ScanResult scan_corpus(const std::string& corpus_dir) {
    ScanResult res;
    std::vector<fs::path> items;
    std::error_code ec;
    for (auto it = fs::directory_iterator(corpus_dir, ec);
         !ec && it != fs::directory_iterator(); it.increment(ec)) {
        if (it->is_regular_file(ec)) items.push_back(it->path());
    }
    if (ec) {
        res.errors.push_back("cannot read corpus directory '" + corpus_dir +
                             "': " + ec.message());
        return res;
    }
    std::sort(items.begin(), items.end(),
              [](const fs::path& a, const fs::path& b) {
                  return a.filename().string() < b.filename().string();
              });

    for (const auto& item : items) {
        std::string name = item.filename().string();
        if (has_suffix_ci(name, ".tar")) {
            auto idx = index_tar_file(item.string());
            if (!idx.error.empty() && idx.entries.empty()) {
                res.errors.push_back("corrupt chunk '" + name + "': " + idx.error);
                continue;
            }
            if (!idx.ok)
                res.errors.push_back("chunk '" + name + "' partially read: " + idx.error);
            std::sort(idx.entries.begin(), idx.entries.end(),
                      [](const TarEntry& a, const TarEntry& b) { return a.path < b.path; });
            for (const auto& e : idx.entries) {
                if (e.type != TarEntryType::File) continue;
                std::string base(basename_of(to_utf8_lossy(e.path)));
                auto id = conforming_entry_id(base);
                if (!id) {
                    res.irregular.push_back(name + ":" + base);
                    continue;
                }
                CorpusEntryRef ref;
                ref.chunk_path = item.string();
                ref.entry_name = base;
                ref.id = *id;
                ref.offset = e.data_offset;
                ref.size = e.size;
                res.entries.push_back(std::move(ref));
            }
        } else {
            auto id = conforming_entry_id(name);
            if (!id) {
                res.irregular.push_back(name);
                continue;
            }
            CorpusEntryRef ref;
            ref.loose_path = item.string();
            ref.entry_name = name;
            ref.id = *id;
            ref.size = static_cast<uint64_t>(fs::file_size(item, ec));
            res.entries.push_back(std::move(ref));
        }
    }
    return res;
}

Classification classify_submission(const RawSubmission& raw) {
    Classification c;
    if (has_suffix_ci(raw.entry_name, ".pdf")) {
        if (looks_like_pdf(raw.bytes)) {
            c.kind = SubmissionKind::PdfOnly;
        } else {
            c.kind = SubmissionKind::UnrecognizedType;
            c.note = "pdf extension without PDF magic";
        }
        return c;
    }
    if (!looks_like_gzip(raw.bytes)) {
        c.kind = SubmissionKind::UnrecognizedType;
        c.note = "payload is neither PDF nor gzip";
        return c;
    }
    auto gz = gzip_decompress(raw.bytes);
    if (!gz.ok) {
        c.kind = SubmissionKind::UnrecognizedType;
        c.note = "gzip decode failure: " + gz.error;
        return c;
    }
    if (gz.trailing_members) {
        c.kind = SubmissionKind::UnrecognizedType;
        c.note = "more than one file inside the gzip container";
        return c;
    }
    c.inner_name = gz.member_name.empty() ? raw.id.str()
                                          : to_utf8_lossy(gz.member_name);

    std::string base(basename_of(c.inner_name));
    bool extensionless = base.find('.') == std::string::npos;
    if (extensionless && base == "withdrawn") {
        c.kind = SubmissionKind::Withdrawn;
        return c;
    }
    if (looks_like_tar(gz.data)) {
        if (c.inner_name == raw.id.str()) {
            c.kind = SubmissionKind::ProjectBlob;
            c.inner_data = std::move(gz.data);
        } else {
            c.kind = SubmissionKind::UnrecognizedType;
            c.note = "inner archive '" + c.inner_name + "' not named after submission";
        }
        return c;
    }
    if (looks_like_zip(gz.data)) {
        c.kind = SubmissionKind::UnrecognizedType;
        c.note = "unsupported inner archive format (zip)";
        return c;
    }
    if (looks_like_tex_text(gz.data)) {
        c.kind = SubmissionKind::SingleTex;
        c.inner_data = std::move(gz.data);
        return c;
    }
    c.kind = SubmissionKind::UnrecognizedType;
    c.note = "inner file '" + c.inner_name + "' is not TeX, an archive, or a withdrawal marker";
    return c;
}

UnpackResult unpack_blob(const std::string& tar_bytes, const std::string& dest_dir) {
    UnpackResult res;
    auto tar = list_tar_entries(tar_bytes);
    if (!tar.ok) {
        res.error = "corrupt project archive: " + tar.error;
        return res;
    }
    res.notes = tar.notes;

    fs::path dest(dest_dir);
    std::error_code ec;
    fs::create_directories(dest, ec);
    if (ec) {
        res.error = "cannot create work dir: " + ec.message();
        return res;
    }

    // Refuse the whole blob on the first hostile path: extraction must never
    // touch anything outside dest_dir.
    for (const auto& e : tar.entries) {
        std::string name = to_utf8_lossy(e.path);
        for (const auto& seg : split(name, '/')) {
            if (seg == "..") {
                res.error = "path traversal attempt in member '" + name + "'";
                return res;
            }
        }
        if (!name.empty() && (name.front() == '/' ||
                              (name.size() >= 2 && name[1] == ':'))) {
            res.error = "absolute member path '" + name + "'";
            return res;
        }
    }

    for (const auto& e : tar.entries) {
        auto norm = normalize_relpath(to_utf8_lossy(e.path));
        if (!norm || norm->empty()) continue;  // ".", "./" and friends
        fs::path target = dest / fs::path(*norm);
        if (e.type == TarEntryType::Directory) {
            fs::create_directories(target, ec);
            continue;
        }
        if (e.type != TarEntryType::File) continue;
        fs::create_directories(target.parent_path(), ec);
        if (fs::exists(target, ec))
            res.notes.push_back("duplicate member '" + *norm + "' overwritten");
        std::ofstream out(target, std::ios::binary | std::ios::trunc);
        if (!out) {
            res.notes.push_back("cannot write member '" + *norm + "'");
            continue;
        }
        out.write(e.data.data(), static_cast<std::streamsize>(e.data.size()));
        out.close();
        ++res.file_count;
    }
    res.ok = true;
    return res;
}

}  // namespace residua
