#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "residua/comments.hpp"
#include "residua/submission.hpp"

namespace residua {

enum class ScanTarget { Comments, ResidualFilenames };
std::string_view to_string(ScanTarget t);

struct KeywordGroup {
    std::string name;
    ScanTarget target = ScanTarget::Comments;
    std::vector<std::string> terms;
};

// Term groups ship as a versioned JSON file; the CLI can swap it out.
struct KeywordConfig {
    int version = 1;
    std::vector<KeywordGroup> groups;

    static KeywordConfig defaults();
    static std::optional<KeywordConfig> load_file(const std::string& path,
                                                  std::string* error);
    std::string to_json() const;
};

struct KeywordHit {
    std::string group;
    std::string term;
    SubmissionId submission;
    std::string file;     // comment's source file, or the residual path itself
    size_t line = 0;      // source line for comment hits; 0 for filename hits
    size_t offset = 0;    // byte offset of the match (block text / path)
    std::string context;  // up to ~200 bytes around the match, UTF-8 sanitized
};

// Case-insensitive substring search over comment block texts. A space in a
// multi-word term matches exactly one whitespace byte. With word_boundary,
// matches flanked by letters or digits are skipped.
std::vector<KeywordHit> scan_comments(const SubmissionId& submission,
                                      const CommentsDoc& doc,
                                      const KeywordConfig& cfg,
                                      bool word_boundary = false);

// Filename screening over residual paths only: ".ext" terms must equal the
// file's lowercase extension; other terms match anywhere in the lowercase
// path. At most one hit per (term, file).
std::vector<KeywordHit> scan_residual_filenames(
    const SubmissionId& submission, const std::vector<std::string>& residual_paths,
    const KeywordConfig& cfg);

struct TermCount {
    uint64_t occurrences = 0;  // individual hits
    uint64_t projects = 0;     // distinct submissions with at least one hit
};

// Keyed by (group, term); every configured term appears even with zero hits.
std::map<std::pair<std::string, std::string>, TermCount> count_terms(
    const std::vector<KeywordHit>& hits, const KeywordConfig& cfg);

// Exposed for tests: next case-insensitive match at or after `from`, with
// term spaces matching one whitespace byte; npos when absent.
size_t find_term(std::string_view text, std::string_view term, size_t from,
                 bool word_boundary);

}  // namespace residua
