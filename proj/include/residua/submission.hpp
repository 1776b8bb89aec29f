#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace residua {

// Identity of one submission: two-digit year, two-digit month, five-digit
// serial, rendered "YYMM.XXXXX".
struct SubmissionId {
    int year = 0;    // 0..99
    int month = 0;   // 1..12
    int serial = 0;  // 0..99999

    std::string str() const;

    bool operator==(const SubmissionId&) const = default;
    auto operator<=>(const SubmissionId&) const = default;
};

// Parses "YYMM.XXXXX"; rejects malformed shapes and months outside 1..12.
std::optional<SubmissionId> parse_submission_id(std::string_view s);

enum class SubmissionKind {
    PdfOnly,
    Withdrawn,
    SingleTex,
    ProjectBlob,
    UnrecognizedType,
};

std::string_view to_string(SubmissionKind k);
std::optional<SubmissionKind> submission_kind_from_string(std::string_view s);

// One corpus entry plus its raw bytes, before classification.
struct RawSubmission {
    SubmissionId id;
    std::string source_chunk;  // chunk path, or "" for a loose file
    std::string entry_name;    // filename inside the chunk / on disk
    std::string bytes;         // compressed payload, never empty
};

}  // namespace residua
