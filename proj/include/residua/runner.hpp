#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "residua/comments.hpp"
#include "residua/ingest.hpp"
#include "residua/patterns.hpp"
#include "residua/report.hpp"

namespace residua {

struct RunConfig {
    std::string corpus_dir;
    std::string report_dir;
    std::string scratch_dir;    // "" -> environment variable -> temp default
    int workers = 1;            // >= 1
    std::string patterns_path;  // "" -> built-in defaults
    std::string keywords_path;  // "" -> built-in defaults
    bool resume = false;
    std::optional<int> year_min;   // full years, inclusive
    std::optional<int> year_max;
    std::optional<int> month_min;  // 1..12, inclusive
    std::optional<int> month_max;
};

// Environment override consulted when no CLI flag set the scratch root.
constexpr const char* kScratchEnvVar = "RESIDUA_SCRATCH_DIR";
std::string resolve_scratch_dir(const RunConfig& config);

struct AnalysisOutcome {
    AnalysisReport report;
    CommentsDoc comments;
    bool has_comments_doc = false;  // valid TeX projects only
};

// Full single-submission pipeline: classify outcome -> unpack -> root ->
// closure -> comments -> report. Blob scratch lives under
// scratch_dir/<id> and is removed before returning.
AnalysisOutcome analyze_submission(const RawSubmission& raw,
                                   const Classification& classification,
                                   const std::string& scratch_dir,
                                   const PatternConfig& cfg);

struct ScanOutcome {
    int exit_code = 2;
    uint64_t processed = 0;
    uint64_t skipped_existing = 0;
    uint64_t failed = 0;  // load or write failures
};

// Parallel corpus scan; reports land in config.report_dir, progress goes to
// stderr, machine-readable events to <report_dir>/run.log.jsonl, and a
// per-year kind summary to stdout.
ScanOutcome cmd_scan(const RunConfig& config);

int cmd_aggregate(const std::string& report_dir, const std::string& out_dir,
                  const std::string& metadata_path);

int cmd_search(const std::string& report_dir, const std::string& out_dir,
               const std::string& keywords_path, bool word_boundary);

int cmd_clean(const RunConfig& config, const std::string& submission_id,
              const std::string& out_dir, bool include_anc, bool force);

}  // namespace residua
