#include "residua/submission.hpp"

#include <cstdio>

namespace residua {

std::string SubmissionId::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d%02d.%05d", year, month, serial);
    return buf;
}

std::optional<SubmissionId> parse_submission_id(std::string_view s) {
    if (s.size() != 10 || s[4] != '.') return std::nullopt;
    for (size_t i = 0; i < s.size(); ++i) {
        if (i == 4) continue;
        if (s[i] < '0' || s[i] > '9') return std::nullopt;
    }
    SubmissionId id;
    id.year = (s[0] - '0') * 10 + (s[1] - '0');
    id.month = (s[2] - '0') * 10 + (s[3] - '0');
    id.serial = 0;
    for (size_t i = 5; i < 10; ++i) id.serial = id.serial * 10 + (s[i] - '0');
    if (id.month < 1 || id.month > 12) return std::nullopt;
    return id;
}

std::string_view to_string(SubmissionKind k) {
    switch (k) {
        case SubmissionKind::PdfOnly: return "PdfOnly";
        case SubmissionKind::Withdrawn: return "Withdrawn";
        case SubmissionKind::SingleTex: return "SingleTex";
        case SubmissionKind::ProjectBlob: return "ProjectBlob";
        case SubmissionKind::UnrecognizedType: return "UnrecognizedType";
    }
    return "UnrecognizedType";
}

std::optional<SubmissionKind> submission_kind_from_string(std::string_view s) {
    if (s == "PdfOnly") return SubmissionKind::PdfOnly;
    if (s == "Withdrawn") return SubmissionKind::Withdrawn;
    if (s == "SingleTex") return SubmissionKind::SingleTex;
    if (s == "ProjectBlob") return SubmissionKind::ProjectBlob;
    if (s == "UnrecognizedType") return SubmissionKind::UnrecognizedType;
    return std::nullopt;
}

}  // namespace residua
