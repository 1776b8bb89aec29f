#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "residua/project.hpp"
#include "residua/submission.hpp"

namespace residua {

enum class TypeGroup : int {
    Image = 0,
    Pdf,
    Tex,
    Support,
    Auxiliary,
    Text,
    Other,
};
constexpr int kTypeGroupCount = 7;

std::string_view to_string(TypeGroup g);
std::optional<TypeGroup> type_group_from_string(std::string_view s);

// Grouping by lowercase extension; compound suffixes (".synctex.gz") take
// precedence over the plain last-dot extension.
TypeGroup classify_file_type(std::string_view path);

// Residual-size buckets; decimal units (1 KB = 1000 B, 1 MB = 10^6 B).
enum class SizeBucket : int { Under1Kb = 0, Kb1ToUnder1Mb, AtLeast1Mb };
// Residual-ratio buckets over [0, 1].
enum class RatioBucket : int { Under5 = 0, From5To50, From50To95, AtLeast95 };

SizeBucket size_bucket_of(uint64_t residual_file_bytes);
RatioBucket ratio_bucket_of(double residual_ratio);

std::string_view to_string(SizeBucket b);
std::string_view to_string(RatioBucket b);

struct TypeTally {
    uint64_t files = 0;
    uint64_t bytes = 0;
    bool operator==(const TypeTally&) const = default;
};

struct ProjectStats {
    SubmissionId submission;
    uint64_t used_bytes = 0;
    uint64_t residual_file_bytes = 0;
    uint64_t comment_bytes = 0;
    uint64_t total_project_bytes = 0;  // used + residual + ancillary
    double residual_ratio = 0.0;       // residual_file_bytes / total, 0 when empty
    SizeBucket size_bucket = SizeBucket::Under1Kb;
    RatioBucket ratio_bucket = RatioBucket::Under5;
    std::array<TypeTally, kTypeGroupCount> type_histogram{};

    // Residual data overall: files plus extracted comment text.
    uint64_t residual_total_bytes() const {
        return residual_file_bytes + comment_bytes;
    }
    bool operator==(const ProjectStats&) const = default;
};

ProjectStats compute_stats(const SubmissionId& submission,
                           const std::vector<FileEntry>& used,
                           const std::vector<FileEntry>& residual,
                           const std::vector<FileEntry>& anc,
                           uint64_t comment_bytes);

}  // namespace residua
