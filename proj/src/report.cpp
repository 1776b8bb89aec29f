#include "residua/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "residua/text.hpp"

namespace fs = std::filesystem;

namespace residua {

using nlohmann::json;

std::string AnalysisReport::to_json() const {
    json j;
    j["schema_version"] = schema_version;
    j["submission"] = submission.str();
    j["kind"] = std::string(to_string(kind));
    j["source_chunk"] = to_utf8_lossy(source_chunk);
    if (root) j["root"] = to_utf8_lossy(*root);
    else j["root"] = nullptr;
    if (root_heuristic) j["root_heuristic"] = std::string(to_string(*root_heuristic));
    else j["root_heuristic"] = nullptr;
    if (exclusion_reason)
        j["exclusion_reason"] = std::string(to_string(*exclusion_reason));
    else j["exclusion_reason"] = nullptr;

    json jused = json::array();
    for (const auto& f : used) jused.push_back({to_utf8_lossy(f.path), f.bytes});
    j["used"] = jused;
    json jres = json::array();
    for (const auto& f : residual)
        jres.push_back({to_utf8_lossy(f.path), f.bytes, std::string(to_string(f.group))});
    j["residual"] = jres;
    json janc = json::array();
    for (const auto& f : anc) janc.push_back({to_utf8_lossy(f.path), f.bytes});
    j["anc"] = janc;

    j["comment_bytes"] = comment_bytes;
    json jdangling = json::array();
    for (const auto& d : dangling)
        jdangling.push_back({to_utf8_lossy(d.from), d.command, to_utf8_lossy(d.raw)});
    j["dangling_references"] = jdangling;
    json jdiag = json::array();
    for (const auto& d : diagnostics) jdiag.push_back(to_utf8_lossy(d));
    j["diagnostics"] = jdiag;
    return j.dump(2) + "\n";
}

std::optional<AnalysisReport> AnalysisReport::from_json(std::string_view text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;
    try {
        AnalysisReport r;
        r.schema_version = j.at("schema_version").get<int>();
        auto id = parse_submission_id(j.at("submission").get<std::string>());
        if (!id) return std::nullopt;
        r.submission = *id;
        auto kind = submission_kind_from_string(j.at("kind").get<std::string>());
        if (!kind) return std::nullopt;
        r.kind = *kind;
        r.source_chunk = j.at("source_chunk").get<std::string>();
        if (!j.at("root").is_null()) r.root = j.at("root").get<std::string>();
        if (!j.at("root_heuristic").is_null()) {
            auto h = root_heuristic_from_string(j.at("root_heuristic").get<std::string>());
            if (!h) return std::nullopt;
            r.root_heuristic = h;
        }
        if (!j.at("exclusion_reason").is_null()) {
            auto e = exclusion_reason_from_string(
                j.at("exclusion_reason").get<std::string>());
            if (!e) return std::nullopt;
            r.exclusion_reason = e;
        }
        for (const auto& f : j.at("used")) {
            if (!f.is_array() || f.size() != 2) return std::nullopt;
            r.used.push_back({f[0].get<std::string>(), f[1].get<uint64_t>()});
        }
        for (const auto& f : j.at("residual")) {
            if (!f.is_array() || f.size() != 3) return std::nullopt;
            auto g = type_group_from_string(f[2].get<std::string>());
            if (!g) return std::nullopt;
            r.residual.push_back({f[0].get<std::string>(), f[1].get<uint64_t>(), *g});
        }
        for (const auto& f : j.at("anc")) {
            if (!f.is_array() || f.size() != 2) return std::nullopt;
            r.anc.push_back({f[0].get<std::string>(), f[1].get<uint64_t>()});
        }
        r.comment_bytes = j.at("comment_bytes").get<uint64_t>();
        for (const auto& d : j.at("dangling_references")) {
            if (!d.is_array() || d.size() != 3) return std::nullopt;
            r.dangling.push_back({d[0].get<std::string>(), d[1].get<std::string>(),
                                  d[2].get<std::string>()});
        }
        for (const auto& d : j.at("diagnostics"))
            r.diagnostics.push_back(d.get<std::string>());
        return r;
    } catch (const json::exception&) {
        return std::nullopt;
    }
}

ProjectStats AnalysisReport::stats() const {
    std::vector<FileEntry> u, res, a;
    for (const auto& f : used) u.push_back(make_file_entry(f.path, f.bytes));
    for (const auto& f : residual) res.push_back(make_file_entry(f.path, f.bytes));
    for (const auto& f : anc) a.push_back(make_file_entry(f.path, f.bytes));
    return compute_stats(submission, u, res, a, comment_bytes);
}

std::string report_path_for(const std::string& report_dir, const SubmissionId& id) {
    return (fs::path(report_dir) / (id.str() + ".json")).string();
}

std::string comments_path_for(const std::string& report_dir, const SubmissionId& id) {
    return (fs::path(report_dir) / (id.str() + ".comments.txt")).string();
}

namespace {

bool atomic_write(const fs::path& target, const std::string& content,
                  std::string* error) {
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            if (error) *error = "cannot open '" + tmp.string() + "' for writing";
            return false;
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out.good()) {
            if (error) *error = "short write to '" + tmp.string() + "'";
            return false;
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        if (error) *error = "rename to '" + target.string() + "' failed: " + ec.message();
        fs::remove(tmp, ec);
        return false;
    }
    return true;
}

}  // namespace

bool write_report(const std::string& report_dir, const AnalysisReport& report,
                  const std::string* comments_doc, std::string* error) {
    std::error_code ec;
    fs::create_directories(report_dir, ec);
    if (comments_doc &&
        !atomic_write(comments_path_for(report_dir, report.submission),
                      *comments_doc, error))
        return false;
    // The report lands last: its presence marks the submission complete.
    return atomic_write(report_path_for(report_dir, report.submission),
                        report.to_json(), error);
}

bool report_exists(const std::string& report_dir, const SubmissionId& id) {
    std::error_code ec;
    return fs::exists(report_path_for(report_dir, id), ec);
}

ReadReportsResult read_reports(const std::string& report_dir) {
    ReadReportsResult res;
    std::error_code ec;
    std::vector<fs::path> files;
    for (auto it = fs::directory_iterator(report_dir, ec);
         !ec && it != fs::directory_iterator(); it.increment(ec)) {
        if (!it->is_regular_file(ec)) continue;
        std::string name = it->path().filename().string();
        if (name.size() == 15 && name.compare(10, 5, ".json") == 0 &&
            parse_submission_id(name.substr(0, 10)))
            files.push_back(it->path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
        std::ifstream in(p, std::ios::binary);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        auto report = AnalysisReport::from_json(text);
        if (!report) {
            ++res.corrupt;
            res.errors.push_back("corrupt report file '" + p.string() + "'");
            continue;
        }
        res.reports.push_back(std::move(*report));
    }
    return res;
}

bool export_cleaned_project(const std::string& project_dir,
                            const AnalysisReport& report, const std::string& out_dir,
                            bool include_anc, bool force, std::string* error) {
    std::error_code ec;
    std::vector<const std::string*> paths;
    for (const auto& f : report.used) paths.push_back(&f.path);
    if (include_anc)
        for (const auto& f : report.anc) paths.push_back(&f.path);

    for (const auto* rel : paths) {
        fs::path target = fs::path(out_dir) / fs::path(*rel);
        if (!force && fs::exists(target, ec)) {
            if (error) *error = "refusing to overwrite '" + target.string() + "'";
            return false;
        }
    }
    for (const auto* rel : paths) {
        fs::path source = fs::path(project_dir) / fs::path(*rel);
        fs::path target = fs::path(out_dir) / fs::path(*rel);
        fs::create_directories(target.parent_path(), ec);
        fs::copy_file(source, target, fs::copy_options::overwrite_existing, ec);
        if (ec) {
            if (error)
                *error = "cannot copy '" + source.string() + "': " + ec.message();
            return false;
        }
    }
    return true;
}

}  // namespace residua
