#include "residua/runner.hpp"

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "residua/aggregate.hpp"
#include "residua/classify.hpp"
#include "residua/keywords.hpp"
#include "residua/text.hpp"
#include "residua/texgraph.hpp"

namespace residua {

namespace fs = std::filesystem;
using nlohmann::json;

std::string resolve_scratch_dir(const RunConfig& config) {
    if (!config.scratch_dir.empty()) return config.scratch_dir;
    if (const char* env = std::getenv(kScratchEnvVar); env && *env) return env;
    std::error_code ec;
    fs::path base = fs::temp_directory_path(ec);
    if (ec) base = ".";
    return (base / ("residua-scratch-" + std::to_string(::getpid()))).string();
}

namespace {

int64_t wall_seconds() {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

// Root inference + closure + comment extraction over an unpacked project.
void analyze_project(const ProjectFiles& project, const PatternConfig& cfg,
                     AnalysisOutcome& out) {
    AnalysisReport& r = out.report;
    RootCandidates cands = find_root_candidates(project);
    RootDecision dec = infer_root(cands, cfg);
    if (dec.deprecated_style_seen)
        r.diagnostics.push_back("deprecated document-style declaration present");
    if (dec.status != RootDecision::Status::Found) {
        r.exclusion_reason = ExclusionReason::UnclearRoot;
        if (dec.status == RootDecision::Status::Ambiguous) {
            r.diagnostics.push_back("root inference: ambiguous among " +
                                    std::to_string(cands.candidates.size()) +
                                    " candidates");
        } else {
            r.diagnostics.push_back("root inference: no document-class candidate");
        }
        return;
    }
    r.root = dec.root;
    r.root_heuristic = dec.heuristic;

    UsageClosure closure = compute_closure(project, dec.root, cfg);
    std::map<std::string, const FileEntry*> by_path;
    for (const FileEntry& f : project.files()) by_path[f.relative_path] = &f;
    auto size_of = [&](const std::string& p) -> uint64_t {
        auto it = by_path.find(p);
        return it == by_path.end() ? 0 : it->second->size;
    };
    for (const std::string& p : closure.used) r.used.push_back({p, size_of(p)});
    for (const std::string& p : closure.residual)
        r.residual.push_back({p, size_of(p), classify_file_type(p)});
    for (const std::string& p : closure.anc) r.anc.push_back({p, size_of(p)});
    r.dangling = closure.dangling;
    for (const std::string& d : closure.diagnostics) r.diagnostics.push_back(d);

    for (const std::string& p : closure.used) {
        auto it = by_path.find(p);
        bool tex_named = it != by_path.end() && it->second->is_tex;
        if (!tex_named && p != dec.root) continue;
        std::optional<std::string> content = project.read(p);
        if (!content) {
            r.diagnostics.push_back(p + ": read failed during comment extraction");
            continue;
        }
        if (!tex_named && !looks_like_tex_text(*content)) continue;
        CommentScan scan = extract_comments(*content);
        for (CommentBlock& b : scan.blocks)
            out.comments.entries.push_back({p, std::move(b)});
        for (const std::string& d : scan.diagnostics)
            r.diagnostics.push_back(p + ": " + d);
    }
    r.comment_bytes = out.comments.total_text_bytes();
    out.has_comments_doc = true;
}

}  // namespace

AnalysisOutcome analyze_submission(const RawSubmission& raw,
                                   const Classification& classification,
                                   const std::string& scratch_dir,
                                   const PatternConfig& cfg) {
    AnalysisOutcome out;
    AnalysisReport& r = out.report;
    r.submission = raw.id;
    r.kind = classification.kind;
    if (!raw.source_chunk.empty())
        r.source_chunk = std::string(basename_of(raw.source_chunk));
    if (!classification.note.empty()) r.diagnostics.push_back(classification.note);

    switch (classification.kind) {
        case SubmissionKind::PdfOnly:
            break;
        case SubmissionKind::Withdrawn:
            r.exclusion_reason = ExclusionReason::Withdrawn;
            break;
        case SubmissionKind::UnrecognizedType:
            r.exclusion_reason = ExclusionReason::UnclearType;
            break;
        case SubmissionKind::SingleTex: {
            const std::string& name = classification.inner_name;
            r.root = name;
            r.used.push_back({name, classification.inner_data.size()});
            CommentScan scan = extract_comments(classification.inner_data);
            for (CommentBlock& b : scan.blocks)
                out.comments.entries.push_back({name, std::move(b)});
            for (const std::string& d : scan.diagnostics)
                r.diagnostics.push_back(name + ": " + d);
            r.comment_bytes = out.comments.total_text_bytes();
            out.has_comments_doc = true;
            break;
        }
        case SubmissionKind::ProjectBlob: {
            fs::path scratch = fs::path(scratch_dir) / raw.id.str();
            std::error_code ec;
            fs::remove_all(scratch, ec);
            ec.clear();
            fs::create_directories(scratch, ec);
            if (ec) {
                r.kind = SubmissionKind::UnrecognizedType;
                r.exclusion_reason = ExclusionReason::UnclearType;
                r.diagnostics.push_back("scratch unavailable: " + ec.message());
                break;
            }
            UnpackResult up = unpack_blob(classification.inner_data, scratch.string());
            for (const std::string& n : up.notes) r.diagnostics.push_back(n);
            if (!up.ok) {
                r.kind = SubmissionKind::UnrecognizedType;
                r.exclusion_reason = ExclusionReason::UnclearType;
                r.diagnostics.push_back(up.error);
            } else {
                DirProject project(scratch.string());
                analyze_project(project, cfg, out);
            }
            fs::remove_all(scratch, ec);
            break;
        }
    }
    return out;
}

namespace {

struct RunLog {
    std::ofstream stream;
    std::mutex mu;

    void event(json j) {
        j["ts"] = wall_seconds();
        std::lock_guard<std::mutex> lock(mu);
        if (stream.is_open()) {
            stream << j.dump() << "\n";
            stream.flush();
        }
    }
};

void remove_stale_temp_files(const std::string& report_dir) {
    std::error_code ec;
    for (fs::directory_iterator it(report_dir, ec), end; !ec && it != end;
         it.increment(ec)) {
        const fs::path& p = it->path();
        if (p.extension() == ".tmp") fs::remove(p, ec);
    }
}

void print_kind_table(std::ostream& os, const CorpusReport& report) {
    std::map<int, MonthAggregate> by_year;
    for (const auto& [key, agg] : report.months) by_year[key.year].merge(agg);
    os << "year\tsubmissions\tvalid\tpdf_only\twithdrawn\tunclear_root\tunclear_type\n";
    auto row = [&](const std::string& label, const MonthAggregate& a) {
        os << label << '\t' << a.submissions << '\t' << a.valid << '\t' << a.pdf_only
           << '\t' << a.withdrawn << '\t' << a.unclear_root << '\t' << a.unclear_type
           << '\n';
    };
    for (const auto& [year, agg] : by_year) row(std::to_string(year), agg);
    row("total", report.totals());
}

std::string tsv_escape(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    return out;
}

bool write_text_file(const fs::path& path, const std::string& content,
                     std::string* error) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        if (error) *error = "cannot open " + path.string();
        return false;
    }
    os << content;
    os.flush();
    if (!os) {
        if (error) *error = "short write to " + path.string();
        return false;
    }
    return true;
}

}  // namespace

ScanOutcome cmd_scan(const RunConfig& config) {
    ScanOutcome out;
    std::error_code ec;
    if (config.corpus_dir.empty() || !fs::is_directory(config.corpus_dir, ec)) {
        std::cerr << "error: corpus dir not found: " << config.corpus_dir << "\n";
        return out;
    }
    if (config.workers < 1) {
        std::cerr << "error: workers must be >= 1\n";
        return out;
    }
    fs::create_directories(config.report_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create report dir: " << ec.message() << "\n";
        return out;
    }
    PatternConfig patterns;
    if (config.patterns_path.empty()) {
        patterns = PatternConfig::defaults();
    } else {
        std::string err;
        auto loaded = PatternConfig::load_file(config.patterns_path, &err);
        if (!loaded) {
            std::cerr << "error: " << err << "\n";
            return out;
        }
        patterns = std::move(*loaded);
    }
    std::string scratch_root = resolve_scratch_dir(config);
    fs::create_directories(scratch_root, ec);
    if (ec) {
        std::cerr << "error: cannot create scratch dir " << scratch_root << ": "
                  << ec.message() << "\n";
        return out;
    }

    remove_stale_temp_files(config.report_dir);

    RunLog log;
    log.stream.open(fs::path(config.report_dir) / "run.log.jsonl",
                    std::ios::binary | std::ios::app);

    ScanResult scan = scan_corpus(config.corpus_dir);
    log.event({{"event", "start"},
               {"corpus", config.corpus_dir},
               {"entries", scan.entries.size()},
               {"irregular", scan.irregular.size()},
               {"container_errors", scan.errors.size()},
               {"workers", config.workers},
               {"resume", config.resume}});
    for (const std::string& e : scan.errors) {
        std::cerr << "warning: " << e << "\n";
        log.event({{"event", "chunk_error"}, {"detail", to_utf8_lossy(e)}});
    }
    for (const std::string& name : scan.irregular)
        log.event({{"event", "irregular_entry"}, {"name", to_utf8_lossy(name)}});
    std::cerr << "corpus: " << scan.entries.size() << " entries, "
              << scan.irregular.size() << " irregular, " << scan.errors.size()
              << " container errors\n";

    std::vector<CorpusEntryRef> work;
    work.reserve(scan.entries.size());
    std::set<SubmissionId> seen;
    for (CorpusEntryRef& e : scan.entries) {
        int full_year = 2000 + e.id.year;
        if (config.year_min && full_year < *config.year_min) continue;
        if (config.year_max && full_year > *config.year_max) continue;
        if (config.month_min && e.id.month < *config.month_min) continue;
        if (config.month_max && e.id.month > *config.month_max) continue;
        if (!seen.insert(e.id).second) {
            log.event({{"event", "duplicate_entry"}, {"id", e.id.str()}});
            continue;
        }
        if (config.resume && report_exists(config.report_dir, e.id)) {
            ++out.skipped_existing;
            continue;
        }
        work.push_back(std::move(e));
    }
    log.event({{"event", "plan"},
               {"selected", work.size()},
               {"skipped_existing", out.skipped_existing}});
    std::cerr << "selected " << work.size() << " submissions ("
              << out.skipped_existing << " already analyzed)\n";

    std::atomic<size_t> next{0};
    std::atomic<uint64_t> done{0};
    std::atomic<uint64_t> failed{0};
    const auto t0 = std::chrono::steady_clock::now();
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= work.size()) return;
            const CorpusEntryRef& e = work[i];
            try {
                std::optional<std::string> bytes = e.load();
                if (!bytes) {
                    ++failed;
                    log.event({{"event", "load_error"},
                               {"id", e.id.str()},
                               {"chunk", to_utf8_lossy(e.chunk_path)}});
                    continue;
                }
                RawSubmission raw{e.id, e.chunk_path, e.entry_name,
                                  std::move(*bytes)};
                Classification cls = classify_submission(raw);
                AnalysisOutcome a =
                    analyze_submission(raw, cls, scratch_root, patterns);
                std::string doc;
                const std::string* doc_ptr = nullptr;
                if (a.has_comments_doc) {
                    doc = a.comments.serialize();
                    doc_ptr = &doc;
                }
                std::string err;
                if (!write_report(config.report_dir, a.report, doc_ptr, &err)) {
                    ++failed;
                    log.event({{"event", "write_error"},
                               {"id", e.id.str()},
                               {"detail", to_utf8_lossy(err)}});
                    continue;
                }
            } catch (const std::exception& ex) {
                ++failed;
                log.event({{"event", "exception"},
                           {"id", e.id.str()},
                           {"what", to_utf8_lossy(ex.what())}});
                continue;
            }
            uint64_t d = done.fetch_add(1) + 1;
            if (d % 1000 == 0 || d == work.size()) {
                double secs = std::chrono::duration<double>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count();
                double rate = secs > 0 ? static_cast<double>(d) / secs : 0.0;
                log.event({{"event", "progress"},
                           {"processed", d},
                           {"selected", work.size()},
                           {"rate_per_sec", rate}});
                char buf[160];
                std::snprintf(buf, sizeof(buf),
                              "processed %llu/%zu (%.1f submissions/sec)",
                              static_cast<unsigned long long>(d), work.size(),
                              rate);
                std::lock_guard<std::mutex> lock(log.mu);
                std::cerr << buf << "\n";
            }
        }
    };
    std::vector<std::thread> threads;
    for (int i = 0; i < config.workers; ++i) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();

    out.processed = done.load();
    out.failed = failed.load();

    fs::remove(scratch_root, ec);  // only removes it when empty

    ReadReportsResult reports = read_reports(config.report_dir);
    Aggregator agg;
    for (const AnalysisReport& rep : reports.reports)
        agg.add_kind(rep.submission, rep.kind, rep.exclusion_reason);
    print_kind_table(std::cout, agg.report());
    if (reports.corrupt)
        std::cerr << "warning: " << reports.corrupt << " corrupt report files\n";

    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log.event({{"event", "end"},
               {"processed", out.processed},
               {"failed", out.failed},
               {"skipped_existing", out.skipped_existing},
               {"corrupt_reports", reports.corrupt},
               {"elapsed_sec", secs}});
    out.exit_code = out.failed ? 1 : 0;
    return out;
}

int cmd_aggregate(const std::string& report_dir, const std::string& out_dir,
                  const std::string& metadata_path) {
    ReadReportsResult reports = read_reports(report_dir);
    if (reports.reports.empty() && reports.corrupt == 0) {
        std::cerr << "error: no analysis reports in " << report_dir << "\n";
        return 2;
    }
    CategoryTable table;
    bool have_table = false;
    if (!metadata_path.empty()) {
        std::string err;
        table = load_category_metadata(metadata_path, &err);
        if (!err.empty()) {
            std::cerr << "error: " << err << "\n";
            return 2;
        }
        if (table.malformed_lines)
            std::cerr << "warning: " << table.malformed_lines
                      << " malformed metadata lines\n";
        if (table.unknown_main_tokens)
            std::cerr << "warning: " << table.unknown_main_tokens
                      << " unknown main-category tokens\n";
        have_table = true;
    }
    Aggregator agg(have_table ? &table : nullptr);
    for (const AnalysisReport& rep : reports.reports) {
        agg.add_kind(rep.submission, rep.kind, rep.exclusion_reason);
        bool valid = (rep.kind == SubmissionKind::SingleTex ||
                      rep.kind == SubmissionKind::ProjectBlob) &&
                     !rep.exclusion_reason;
        if (valid) agg.add_stats(rep.stats());
    }
    std::string err;
    if (!write_aggregate_tables(agg.report(), out_dir, &err)) {
        std::cerr << "error: " << err << "\n";
        return 1;
    }
    if (reports.corrupt)
        std::cerr << "warning: skipped " << reports.corrupt
                  << " corrupt report files\n";
    MonthAggregate totals = agg.report().totals();
    std::cout << "reports: " << reports.reports.size() << " (" << totals.valid
              << " valid projects)\n"
              << "residual file bytes: " << totals.residual_file_bytes << "\n"
              << "comment bytes: " << totals.comment_bytes << "\n"
              << "tables written to " << out_dir << "\n";
    return 0;
}

int cmd_search(const std::string& report_dir, const std::string& out_dir,
               const std::string& keywords_path, bool word_boundary) {
    KeywordConfig kw;
    if (keywords_path.empty()) {
        kw = KeywordConfig::defaults();
    } else {
        std::string err;
        auto loaded = KeywordConfig::load_file(keywords_path, &err);
        if (!loaded) {
            std::cerr << "error: " << err << "\n";
            return 2;
        }
        kw = std::move(*loaded);
    }
    ReadReportsResult reports = read_reports(report_dir);
    if (reports.reports.empty()) {
        std::cerr << "error: no analysis reports in " << report_dir << "\n";
        return 2;
    }
    uint64_t unreadable_docs = 0;
    std::vector<KeywordHit> hits;
    for (const AnalysisReport& rep : reports.reports) {
        fs::path cpath = comments_path_for(report_dir, rep.submission);
        std::error_code ec;
        if (fs::exists(cpath, ec)) {
            std::ifstream is(cpath, std::ios::binary);
            std::stringstream ss;
            ss << is.rdbuf();
            auto doc = CommentsDoc::parse(ss.str());
            if (!doc) {
                ++unreadable_docs;
            } else {
                auto ch = scan_comments(rep.submission, *doc, kw, word_boundary);
                hits.insert(hits.end(), std::make_move_iterator(ch.begin()),
                            std::make_move_iterator(ch.end()));
            }
        }
        std::vector<std::string> residual_paths;
        residual_paths.reserve(rep.residual.size());
        for (const ResidualFile& rf : rep.residual) residual_paths.push_back(rf.path);
        auto fh = scan_residual_filenames(rep.submission, residual_paths, kw);
        hits.insert(hits.end(), std::make_move_iterator(fh.begin()),
                    std::make_move_iterator(fh.end()));
    }
    auto counts = count_terms(hits, kw);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create " << out_dir << ": " << ec.message()
                  << "\n";
        return 2;
    }
    std::ostringstream comment_tsv, filename_tsv, counts_tsv;
    comment_tsv << "submission\tgroup\tterm\tfile\tline\toffset\tcontext\n";
    filename_tsv << "submission\tgroup\tterm\tpath\n";
    for (const KeywordHit& h : hits) {
        if (h.line > 0) {
            comment_tsv << h.submission.str() << '\t' << h.group << '\t' << h.term
                        << '\t' << tsv_escape(to_utf8_lossy(h.file)) << '\t'
                        << h.line << '\t' << h.offset << '\t'
                        << tsv_escape(h.context) << '\n';
        } else {
            filename_tsv << h.submission.str() << '\t' << h.group << '\t' << h.term
                         << '\t' << tsv_escape(to_utf8_lossy(h.file)) << '\n';
        }
    }
    counts_tsv << "group\tterm\toccurrences\tprojects\n";
    for (const auto& [key, count] : counts)
        counts_tsv << key.first << '\t' << key.second << '\t' << count.occurrences
                   << '\t' << count.projects << '\n';

    std::string err;
    if (!write_text_file(fs::path(out_dir) / "comment_hits.tsv", comment_tsv.str(),
                         &err) ||
        !write_text_file(fs::path(out_dir) / "filename_hits.tsv", filename_tsv.str(),
                         &err) ||
        !write_text_file(fs::path(out_dir) / "term_counts.tsv", counts_tsv.str(),
                         &err)) {
        std::cerr << "error: " << err << "\n";
        return 1;
    }
    std::cout << counts_tsv.str();
    if (unreadable_docs)
        std::cerr << "warning: " << unreadable_docs
                  << " unreadable comment documents\n";
    return 0;
}

int cmd_clean(const RunConfig& config, const std::string& submission_id,
              const std::string& out_dir, bool include_anc, bool force) {
    auto id = parse_submission_id(submission_id);
    if (!id) {
        std::cerr << "error: malformed submission id: " << submission_id << "\n";
        return 2;
    }
    fs::path rpath = report_path_for(config.report_dir, *id);
    std::ifstream is(rpath, std::ios::binary);
    if (!is) {
        std::cerr << "error: no analysis report for " << id->str()
                  << "; run the scan first\n";
        return 1;
    }
    std::stringstream ss;
    ss << is.rdbuf();
    auto report = AnalysisReport::from_json(ss.str());
    if (!report) {
        std::cerr << "error: unreadable report " << rpath.string() << "\n";
        return 1;
    }
    if (report->exclusion_reason) {
        std::cerr << "error: " << id->str() << " was excluded ("
                  << to_string(*report->exclusion_reason) << "); nothing to clean\n";
        return 1;
    }
    if (report->kind != SubmissionKind::SingleTex &&
        report->kind != SubmissionKind::ProjectBlob) {
        std::cerr << "error: " << to_string(report->kind)
                  << " submissions have no cleaned form\n";
        return 1;
    }

    ScanResult scan = scan_corpus(config.corpus_dir);
    const CorpusEntryRef* entry = nullptr;
    for (const CorpusEntryRef& e : scan.entries)
        if (e.id == *id) {
            entry = &e;
            break;
        }
    if (!entry) {
        std::cerr << "error: " << id->str() << " not found in corpus "
                  << config.corpus_dir << "\n";
        return 1;
    }
    std::optional<std::string> bytes = entry->load();
    if (!bytes) {
        std::cerr << "error: cannot read corpus entry for " << id->str() << "\n";
        return 1;
    }
    RawSubmission raw{*id, entry->chunk_path, entry->entry_name, std::move(*bytes)};
    Classification cls = classify_submission(raw);
    std::error_code ec;

    if (report->kind == SubmissionKind::SingleTex) {
        if (cls.kind != SubmissionKind::SingleTex) {
            std::cerr << "error: corpus entry no longer decodes as a single TeX file\n";
            return 1;
        }
        std::string name = normalize_relpath(cls.inner_name).value_or("");
        if (name.empty()) name = id->str() + ".tex";
        fs::path target = fs::path(out_dir) / name;
        if (!force && fs::exists(target, ec)) {
            std::cerr << "error: " << target.string()
                      << " already exists (use --force to overwrite)\n";
            return 1;
        }
        fs::create_directories(target.parent_path(), ec);
        std::string err;
        if (!write_text_file(target, cls.inner_data, &err)) {
            std::cerr << "error: " << err << "\n";
            return 1;
        }
        std::cout << "cleaned project: 1 file -> " << out_dir << "\n";
        return 0;
    }

    if (cls.kind != SubmissionKind::ProjectBlob) {
        std::cerr << "error: corpus entry no longer decodes as a project blob\n";
        return 1;
    }
    fs::path scratch =
        fs::path(resolve_scratch_dir(config)) / ("clean-" + id->str());
    fs::remove_all(scratch, ec);
    ec.clear();
    fs::create_directories(scratch, ec);
    if (ec) {
        std::cerr << "error: cannot create scratch dir: " << ec.message() << "\n";
        return 1;
    }
    UnpackResult up = unpack_blob(cls.inner_data, scratch.string());
    if (!up.ok) {
        std::cerr << "error: " << up.error << "\n";
        fs::remove_all(scratch, ec);
        return 1;
    }
    std::string err;
    bool ok = export_cleaned_project(scratch.string(), *report, out_dir,
                                     include_anc, force, &err);
    fs::remove_all(scratch, ec);
    if (!ok) {
        std::cerr << "error: " << err << "\n";
        return 1;
    }
    size_t count = report->used.size() + (include_anc ? report->anc.size() : 0);
    std::cout << "cleaned project: " << count << " files -> " << out_dir << "\n";
    return 0;
}

}  // namespace residua
