#include "residua/aggregate.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "residua/text.hpp"

namespace residua {

using nlohmann::json;

std::string_view to_string(ExclusionReason r) {
    switch (r) {
        case ExclusionReason::UnclearRoot: return "UnclearRoot";
        case ExclusionReason::UnclearType: return "UnclearType";
        case ExclusionReason::Withdrawn: return "Withdrawn";
    }
    return "UnclearType";
}

std::optional<ExclusionReason> exclusion_reason_from_string(std::string_view s) {
    if (s == "UnclearRoot") return ExclusionReason::UnclearRoot;
    if (s == "UnclearType") return ExclusionReason::UnclearType;
    if (s == "Withdrawn") return ExclusionReason::Withdrawn;
    return std::nullopt;
}

std::string_view to_string(MainCategory c) {
    switch (c) {
        case MainCategory::CS: return "CS";
        case MainCategory::ECON: return "ECON";
        case MainCategory::EESS: return "EESS";
        case MainCategory::MATH: return "MATH";
        case MainCategory::PHYS: return "PHYS";
        case MainCategory::QBIO: return "QBIO";
        case MainCategory::STAT: return "STAT";
        case MainCategory::QFIN: return "QFIN";
    }
    return "CS";
}

std::optional<MainCategory> main_category_of(std::string_view code) {
    std::string main = ascii_lower_copy(code.substr(0, code.find('.')));
    if (main == "cs") return MainCategory::CS;
    if (main == "econ") return MainCategory::ECON;
    if (main == "eess") return MainCategory::EESS;
    if (main == "math") return MainCategory::MATH;
    if (main == "stat") return MainCategory::STAT;
    if (main == "q-bio") return MainCategory::QBIO;
    if (main == "q-fin") return MainCategory::QFIN;
    // The physics group spans the classic archives.
    if (main == "physics" || main == "astro-ph" || main == "cond-mat" ||
        main == "gr-qc" || main == "hep-ex" || main == "hep-lat" ||
        main == "hep-ph" || main == "hep-th" || main == "math-ph" ||
        main == "nlin" || main == "nucl-ex" || main == "nucl-th" ||
        main == "quant-ph")
        return MainCategory::PHYS;
    return std::nullopt;
}

CategoryTable load_category_metadata(const std::string& path, std::string* error) {
    CategoryTable table;
    std::ifstream in(path);
    if (!in) {
        if (error) *error = "cannot open metadata file '" + path + "'";
        return table;
    }
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::string id;
        std::string categories;
        if (!line.empty() && line.front() == '{') {
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object() || !j.contains("id") ||
                !j.contains("categories") || !j["id"].is_string() ||
                !j["categories"].is_string()) {
                ++table.malformed_lines;
                continue;
            }
            id = j["id"].get<std::string>();
            categories = j["categories"].get<std::string>();
        } else {
            size_t sep = line.find_first_of(" \t");
            if (sep == std::string::npos) {
                ++table.malformed_lines;
                continue;
            }
            id = trim(line.substr(0, sep));
            categories = line.substr(sep + 1);
        }
        // Only per-submission ids can ever be cross-referenced; anything
        // else is a malformed row, not a category record.
        if (!parse_submission_id(id)) {
            ++table.malformed_lines;
            continue;
        }
        CategoryRecord rec;
        for (const auto& tok : split(categories, ' ')) {
            std::string code = trim(tok);
            if (code.empty()) continue;
            if (auto main = main_category_of(code)) rec.set(*main);
            else ++table.unknown_main_tokens;
            if (code == "cs.CR") rec.cr = true;
        }
        table.by_id[id] = rec;
    }
    return table;
}

void MonthAggregate::merge(const MonthAggregate& o) {
    submissions += o.submissions;
    valid += o.valid;
    pdf_only += o.pdf_only;
    withdrawn += o.withdrawn;
    unclear_root += o.unclear_root;
    unclear_type += o.unclear_type;
    projects_with_stats += o.projects_with_stats;
    used_bytes += o.used_bytes;
    residual_file_bytes += o.residual_file_bytes;
    comment_bytes += o.comment_bytes;
    total_project_bytes += o.total_project_bytes;
    for (size_t i = 0; i < size_buckets.size(); ++i) size_buckets[i] += o.size_buckets[i];
    for (size_t i = 0; i < ratio_buckets.size(); ++i) ratio_buckets[i] += o.ratio_buckets[i];
    for (size_t i = 0; i < type_groups.size(); ++i) {
        type_groups[i].files += o.type_groups[i].files;
        type_groups[i].bytes += o.type_groups[i].bytes;
    }
    for (const auto& [k, v] : o.category_projects) category_projects[k] += v;
}

void CorpusReport::merge(const CorpusReport& other) {
    for (const auto& [k, v] : other.months) months[k].merge(v);
}

MonthAggregate CorpusReport::totals() const {
    MonthAggregate t;
    for (const auto& [k, v] : months) t.merge(v);
    return t;
}

void Aggregator::add_kind(const SubmissionId& id, SubmissionKind kind,
                          std::optional<ExclusionReason> exclusion) {
    MonthKey key{2000 + id.year, id.month};
    auto& m = report_.months[key];
    ++m.submissions;
    switch (kind) {
        case SubmissionKind::PdfOnly:
            ++m.pdf_only;
            break;
        case SubmissionKind::Withdrawn:
            ++m.withdrawn;
            break;
        case SubmissionKind::UnrecognizedType:
            ++m.unclear_type;
            break;
        case SubmissionKind::SingleTex:
            ++m.valid;
            break;
        case SubmissionKind::ProjectBlob:
            if (exclusion && *exclusion == ExclusionReason::UnclearRoot) ++m.unclear_root;
            else ++m.valid;
            break;
    }
}

bool Aggregator::category_restriction(const ProjectStats& st) {
    return st.residual_file_bytes > 1000000 || st.residual_ratio > 0.5;
}

void Aggregator::add_stats(const ProjectStats& st) {
    MonthKey key{2000 + st.submission.year, st.submission.month};
    auto& m = report_.months[key];
    ++m.projects_with_stats;
    m.used_bytes += st.used_bytes;
    m.residual_file_bytes += st.residual_file_bytes;
    m.comment_bytes += st.comment_bytes;
    m.total_project_bytes += st.total_project_bytes;
    m.size_buckets[static_cast<int>(st.size_bucket)] += 1;
    m.ratio_buckets[static_cast<int>(st.ratio_bucket)] += 1;
    for (int i = 0; i < kTypeGroupCount; ++i) {
        m.type_groups[i].files += st.type_histogram[i].files;
        m.type_groups[i].bytes += st.type_histogram[i].bytes;
    }
    if (categories_ && category_restriction(st)) {
        auto it = categories_->by_id.find(st.submission.str());
        if (it == categories_->by_id.end()) {
            ++m.category_projects["uncategorized"];
        } else {
            for (int c = 0; c < kMainCategoryCount; ++c) {
                if (it->second.has(static_cast<MainCategory>(c)))
                    ++m.category_projects[std::string(
                        to_string(static_cast<MainCategory>(c)))];
            }
            if (it->second.cr) ++m.category_projects["CR"];
        }
    }
}

namespace {

json month_to_json(const MonthAggregate& m) {
    json j;
    j["submissions"] = m.submissions;
    j["valid"] = m.valid;
    j["pdf_only"] = m.pdf_only;
    j["withdrawn"] = m.withdrawn;
    j["unclear_root"] = m.unclear_root;
    j["unclear_type"] = m.unclear_type;
    j["projects_with_stats"] = m.projects_with_stats;
    j["used_bytes"] = m.used_bytes;
    j["residual_file_bytes"] = m.residual_file_bytes;
    j["comment_bytes"] = m.comment_bytes;
    j["total_project_bytes"] = m.total_project_bytes;
    j["size_buckets"] = m.size_buckets;
    j["ratio_buckets"] = m.ratio_buckets;
    json groups = json::object();
    for (int i = 0; i < kTypeGroupCount; ++i) {
        groups[std::string(to_string(static_cast<TypeGroup>(i)))] = {
            {"files", m.type_groups[i].files}, {"bytes", m.type_groups[i].bytes}};
    }
    j["type_groups"] = groups;
    j["category_projects"] = m.category_projects;
    return j;
}

std::optional<MonthAggregate> month_from_json(const json& j) {
    try {
        MonthAggregate m;
        m.submissions = j.at("submissions").get<uint64_t>();
        m.valid = j.at("valid").get<uint64_t>();
        m.pdf_only = j.at("pdf_only").get<uint64_t>();
        m.withdrawn = j.at("withdrawn").get<uint64_t>();
        m.unclear_root = j.at("unclear_root").get<uint64_t>();
        m.unclear_type = j.at("unclear_type").get<uint64_t>();
        m.projects_with_stats = j.at("projects_with_stats").get<uint64_t>();
        m.used_bytes = j.at("used_bytes").get<uint64_t>();
        m.residual_file_bytes = j.at("residual_file_bytes").get<uint64_t>();
        m.comment_bytes = j.at("comment_bytes").get<uint64_t>();
        m.total_project_bytes = j.at("total_project_bytes").get<uint64_t>();
        m.size_buckets = j.at("size_buckets").get<std::array<uint64_t, 3>>();
        m.ratio_buckets = j.at("ratio_buckets").get<std::array<uint64_t, 4>>();
        for (int i = 0; i < kTypeGroupCount; ++i) {
            const auto& g = j.at("type_groups").at(
                std::string(to_string(static_cast<TypeGroup>(i))));
            m.type_groups[i].files = g.at("files").get<uint64_t>();
            m.type_groups[i].bytes = g.at("bytes").get<uint64_t>();
        }
        m.category_projects =
            j.at("category_projects").get<std::map<std::string, uint64_t>>();
        return m;
    } catch (const json::exception&) {
        return std::nullopt;
    }
}

}  // namespace

std::string CorpusReport::to_json() const {
    json j;
    j["schema_version"] = schema_version;
    json months_json = json::object();
    for (const auto& [k, v] : months) {
        char key[16];
        std::snprintf(key, sizeof(key), "%04d-%02d", k.year, k.month);
        months_json[key] = month_to_json(v);
    }
    j["months"] = months_json;
    return j.dump(2) + "\n";
}

std::optional<CorpusReport> CorpusReport::from_json(std::string_view text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;
    try {
        CorpusReport r;
        r.schema_version = j.at("schema_version").get<int>();
        for (const auto& [key, val] : j.at("months").items()) {
            if (key.size() != 7 || key[4] != '-') return std::nullopt;
            MonthKey k;
            k.year = std::stoi(key.substr(0, 4));
            k.month = std::stoi(key.substr(5, 2));
            auto m = month_from_json(val);
            if (!m) return std::nullopt;
            r.months[k] = *m;
        }
        return r;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

namespace {

// Year rollups with a grand-total row, the shape the per-year tables use.
std::vector<std::pair<std::string, MonthAggregate>> year_rows(const CorpusReport& r) {
    std::map<int, MonthAggregate> years;
    for (const auto& [k, v] : r.months) years[k.year].merge(v);
    std::vector<std::pair<std::string, MonthAggregate>> rows;
    for (const auto& [year, agg] : years) rows.emplace_back(std::to_string(year), agg);
    rows.emplace_back("total", r.totals());
    return rows;
}

bool write_text(const std::filesystem::path& p, const std::string& text,
                std::string* error) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) {
        if (error) *error = "cannot write '" + p.string() + "'";
        return false;
    }
    out << text;
    return out.good();
}

std::string fmt_pct(uint64_t num, uint64_t den) {
    if (den == 0) return "0.00";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f",
                  100.0 * static_cast<double>(num) / static_cast<double>(den));
    return buf;
}

}  // namespace

bool write_aggregate_tables(const CorpusReport& report, const std::string& out_dir,
                            std::string* error) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        if (error) *error = "cannot create '" + out_dir + "': " + ec.message();
        return false;
    }
    auto rows = year_rows(report);

    std::string kinds =
        "year\tsubmissions\tvalid\tpdf_only\twithdrawn\tunclear_root\tunclear_type\n";
    for (const auto& [label, m] : rows) {
        kinds += label + "\t" + std::to_string(m.submissions) + "\t" +
                 std::to_string(m.valid) + "\t" + std::to_string(m.pdf_only) + "\t" +
                 std::to_string(m.withdrawn) + "\t" + std::to_string(m.unclear_root) +
                 "\t" + std::to_string(m.unclear_type) + "\n";
    }

    std::string bytes =
        "year\tresidual_file_bytes\tcomment_bytes\tresidual_total_bytes\t"
        "total_project_bytes\tpct_residual\n";
    for (const auto& [label, m] : rows) {
        bytes += label + "\t" + std::to_string(m.residual_file_bytes) + "\t" +
                 std::to_string(m.comment_bytes) + "\t" +
                 std::to_string(m.residual_total_bytes()) + "\t" +
                 std::to_string(m.total_project_bytes) + "\t" +
                 fmt_pct(m.residual_total_bytes(), m.total_project_bytes) + "\n";
    }

    std::string sizes = "year\tunder_1kb\t1kb_to_1mb\tat_least_1mb\n";
    for (const auto& [label, m] : rows) {
        sizes += label;
        for (auto v : m.size_buckets) sizes += "\t" + std::to_string(v);
        sizes += "\n";
    }

    std::string ratios = "year\tunder_5pct\t5_to_50pct\t50_to_95pct\tat_least_95pct\n";
    for (const auto& [label, m] : rows) {
        ratios += label;
        for (auto v : m.ratio_buckets) ratios += "\t" + std::to_string(v);
        ratios += "\n";
    }

    std::string groups = "year\tgroup\tfiles\tbytes\n";
    for (const auto& [label, m] : rows) {
        for (int i = 0; i < kTypeGroupCount; ++i) {
            groups += label + "\t" +
                      std::string(to_string(static_cast<TypeGroup>(i))) + "\t" +
                      std::to_string(m.type_groups[i].files) + "\t" +
                      std::to_string(m.type_groups[i].bytes) + "\n";
        }
    }

    std::string cats = "year\tcategory\tprojects\n";
    for (const auto& [label, m] : rows) {
        for (const auto& [code, count] : m.category_projects)
            cats += label + "\t" + code + "\t" + std::to_string(count) + "\n";
    }

    fs::path dir(out_dir);
    return write_text(dir / "kinds.tsv", kinds, error) &&
           write_text(dir / "residual_bytes.tsv", bytes, error) &&
           write_text(dir / "size_buckets.tsv", sizes, error) &&
           write_text(dir / "ratio_buckets.tsv", ratios, error) &&
           write_text(dir / "type_groups.tsv", groups, error) &&
           write_text(dir / "categories.tsv", cats, error) &&
           write_text(dir / "corpus_report.json", report.to_json(), error);
}

}  // namespace residua
