#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "residua/classify.hpp"
#include "residua/submission.hpp"

namespace residua {

enum class ExclusionReason { UnclearRoot, UnclearType, Withdrawn };
std::string_view to_string(ExclusionReason r);
std::optional<ExclusionReason> exclusion_reason_from_string(std::string_view s);

// Fixed main-category set for cross-referencing; CR is tracked as a flag.
enum class MainCategory : int {
    CS = 0, ECON, EESS, MATH, PHYS, QBIO, STAT, QFIN,
};
constexpr int kMainCategoryCount = 8;
std::string_view to_string(MainCategory c);

struct CategoryRecord {
    uint8_t mains = 0;  // bit per MainCategory
    bool cr = false;    // listed under the security subcategory

    void set(MainCategory c) { mains |= static_cast<uint8_t>(1u << static_cast<int>(c)); }
    bool has(MainCategory c) const {
        return mains & static_cast<uint8_t>(1u << static_cast<int>(c));
    }
    bool operator==(const CategoryRecord&) const = default;
};

struct CategoryTable {
    std::map<std::string, CategoryRecord> by_id;
    uint64_t malformed_lines = 0;
    uint64_t unknown_main_tokens = 0;
};

// Parses a newline-delimited metadata snapshot: per line either a JSON object
// with "id" and space-separated "categories", or a bare "id cat1 cat2..."
// record. Malformed lines and unknown main-category tokens are counted, never
// fatal. The main category is the token before the first dot; classic physics
// archive names (hep-th, astro-ph, ...) fold into PHYS.
CategoryTable load_category_metadata(const std::string& path, std::string* error);

std::optional<MainCategory> main_category_of(std::string_view category_code);

struct MonthKey {
    int year = 0;   // full calendar year
    int month = 0;  // 1..12
    auto operator<=>(const MonthKey&) const = default;
};

struct GroupTally {
    uint64_t files = 0;
    uint64_t bytes = 0;
    bool operator==(const GroupTally&) const = default;
};

struct MonthAggregate {
    // Submission kind tallies (classification view).
    uint64_t submissions = 0;
    uint64_t valid = 0;
    uint64_t pdf_only = 0;
    uint64_t withdrawn = 0;
    uint64_t unclear_root = 0;
    uint64_t unclear_type = 0;

    // Byte totals over valid projects.
    uint64_t projects_with_stats = 0;
    uint64_t used_bytes = 0;
    uint64_t residual_file_bytes = 0;
    uint64_t comment_bytes = 0;
    uint64_t total_project_bytes = 0;

    std::array<uint64_t, 3> size_buckets{};
    std::array<uint64_t, 4> ratio_buckets{};
    std::array<GroupTally, kTypeGroupCount> type_groups{};

    // Projects meeting the large-residual restriction, per category code;
    // also "CR" and "uncategorized" pseudo-codes. Multi-category projects
    // count once per category.
    std::map<std::string, uint64_t> category_projects;

    uint64_t residual_total_bytes() const { return residual_file_bytes + comment_bytes; }

    void merge(const MonthAggregate& other);
    bool operator==(const MonthAggregate&) const = default;
};

struct CorpusReport {
    int schema_version = 1;
    std::map<MonthKey, MonthAggregate> months;

    void merge(const CorpusReport& other);
    MonthAggregate totals() const;

    std::string to_json() const;
    static std::optional<CorpusReport> from_json(std::string_view text);
    bool operator==(const CorpusReport&) const = default;
};

// Streaming accumulator; merge of two accumulators' reports equals the
// report of the concatenated streams (associative and commutative).
class Aggregator {
public:
    explicit Aggregator(const CategoryTable* categories = nullptr)
        : categories_(categories) {}

    void add_kind(const SubmissionId& id, SubmissionKind kind,
                  std::optional<ExclusionReason> exclusion);
    void add_stats(const ProjectStats& stats);

    const CorpusReport& report() const { return report_; }

    // Residual bytes > 1 MB (decimal) or ratio > 0.5.
    static bool category_restriction(const ProjectStats& stats);

private:
    const CategoryTable* categories_;
    CorpusReport report_;
};

// Tabular outputs (TSV, one row per year plus a total row) and the full
// JSON report. Returns false with `error` set on I/O failure.
bool write_aggregate_tables(const CorpusReport& report, const std::string& out_dir,
                            std::string* error);

}  // namespace residua
