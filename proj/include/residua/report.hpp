#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "residua/aggregate.hpp"
#include "residua/classify.hpp"
#include "residua/submission.hpp"
#include "residua/texgraph.hpp"

namespace residua {

constexpr int kReportSchemaVersion = 1;

struct UsedFile {
    std::string path;
    uint64_t bytes = 0;
    bool operator==(const UsedFile&) const = default;
};

struct ResidualFile {
    std::string path;
    uint64_t bytes = 0;
    TypeGroup group = TypeGroup::Other;
    bool operator==(const ResidualFile&) const = default;
};

// Everything the analysis decided about one submission. Content is a pure
// function of the submission bytes, so report files are byte-stable across
// runs and safe to diff.
struct AnalysisReport {
    int schema_version = kReportSchemaVersion;
    SubmissionId submission;
    SubmissionKind kind = SubmissionKind::UnrecognizedType;
    std::string source_chunk;  // "" for loose corpus files
    std::optional<std::string> root;
    std::optional<RootHeuristic> root_heuristic;
    std::optional<ExclusionReason> exclusion_reason;
    std::vector<UsedFile> used;          // sorted by path
    std::vector<ResidualFile> residual;  // sorted by path
    std::vector<UsedFile> anc;           // sorted by path
    uint64_t comment_bytes = 0;
    std::vector<DanglingReference> dangling;
    std::vector<std::string> diagnostics;

    std::string to_json() const;
    static std::optional<AnalysisReport> from_json(std::string_view text);

    ProjectStats stats() const;

    bool operator==(const AnalysisReport&) const = default;
};

std::string report_path_for(const std::string& report_dir, const SubmissionId& id);
std::string comments_path_for(const std::string& report_dir, const SubmissionId& id);

// Atomic write (temp file + rename); an existing report is replaced whole.
// `comments_doc` is the serialized comments document, written the same way
// when non-null (pass even when empty so resume sees a complete pair).
bool write_report(const std::string& report_dir, const AnalysisReport& report,
                  const std::string* comments_doc, std::string* error);

bool report_exists(const std::string& report_dir, const SubmissionId& id);

struct ReadReportsResult {
    std::vector<AnalysisReport> reports;  // sorted by submission id
    uint64_t corrupt = 0;
    std::vector<std::string> errors;
};

// Loads every report in the directory; unparsable files are counted and
// skipped, never fatal.
ReadReportsResult read_reports(const std::string& report_dir);

// Copies the used set (and optionally ancillary files) of an analyzed
// project into out_dir, preserving relative paths. Refuses to overwrite
// existing files unless force is set.
bool export_cleaned_project(const std::string& project_dir,
                            const AnalysisReport& report, const std::string& out_dir,
                            bool include_anc, bool force, std::string* error);

}  // namespace residua
