#include "residua/classify.hpp"

#include "residua/text.hpp"

namespace residua {

namespace {

const std::vector<std::string>& compound_exts() {
    static const std::vector<std::string> k = {".synctex.gz"};
    return k;
}

bool in_set(std::string_view ext, std::initializer_list<std::string_view> set) {
    for (auto s : set)
        if (ext == s) return true;
    return false;
}

}  // namespace

std::string_view to_string(TypeGroup g) {
    switch (g) {
        case TypeGroup::Image: return "Image";
        case TypeGroup::Pdf: return "Pdf";
        case TypeGroup::Tex: return "Tex";
        case TypeGroup::Support: return "Support";
        case TypeGroup::Auxiliary: return "Auxiliary";
        case TypeGroup::Text: return "Text";
        case TypeGroup::Other: return "Other";
    }
    return "Other";
}

std::optional<TypeGroup> type_group_from_string(std::string_view s) {
    if (s == "Image") return TypeGroup::Image;
    if (s == "Pdf") return TypeGroup::Pdf;
    if (s == "Tex") return TypeGroup::Tex;
    if (s == "Support") return TypeGroup::Support;
    if (s == "Auxiliary") return TypeGroup::Auxiliary;
    if (s == "Text") return TypeGroup::Text;
    if (s == "Other") return TypeGroup::Other;
    return std::nullopt;
}

TypeGroup classify_file_type(std::string_view path) {
    std::string ext = lower_extension(path, compound_exts());
    if (in_set(ext, {".png", ".jpg", ".jpeg", ".eps", ".svg", ".bmp", ".tiff",
                     ".tif", ".gif"}))
        return TypeGroup::Image;
    if (ext == ".pdf") return TypeGroup::Pdf;
    if (ext == ".tex") return TypeGroup::Tex;
    if (in_set(ext, {".sty", ".cls", ".bst", ".bbl", ".aux", ".lof", ".lot",
                     ".out", ".toc", ".synctex.gz", ".fls", ".fdb_latexmk"}))
        return TypeGroup::Support;
    if (in_set(ext, {".tfm", ".vf", ".fd", ".pfb", ".map", ".enc"}))
        return TypeGroup::Auxiliary;
    if (in_set(ext, {".txt", ".md"})) return TypeGroup::Text;
    return TypeGroup::Other;
}

SizeBucket size_bucket_of(uint64_t residual_file_bytes) {
    if (residual_file_bytes < 1000) return SizeBucket::Under1Kb;
    if (residual_file_bytes < 1000000) return SizeBucket::Kb1ToUnder1Mb;
    return SizeBucket::AtLeast1Mb;
}

RatioBucket ratio_bucket_of(double r) {
    if (r < 0.05) return RatioBucket::Under5;
    if (r < 0.5) return RatioBucket::From5To50;
    if (r < 0.95) return RatioBucket::From50To95;
    return RatioBucket::AtLeast95;
}

std::string_view to_string(SizeBucket b) {
    switch (b) {
        case SizeBucket::Under1Kb: return "under_1kb";
        case SizeBucket::Kb1ToUnder1Mb: return "1kb_to_1mb";
        case SizeBucket::AtLeast1Mb: return "at_least_1mb";
    }
    return "under_1kb";
}

std::string_view to_string(RatioBucket b) {
    switch (b) {
        case RatioBucket::Under5: return "under_5pct";
        case RatioBucket::From5To50: return "5_to_50pct";
        case RatioBucket::From50To95: return "50_to_95pct";
        case RatioBucket::AtLeast95: return "at_least_95pct";
    }
    return "under_5pct";
}

ProjectStats compute_stats(const SubmissionId& submission,
                           const std::vector<FileEntry>& used,
                           const std::vector<FileEntry>& residual,
                           const std::vector<FileEntry>& anc,
                           uint64_t comment_bytes) {
    ProjectStats st;
    st.submission = submission;
    st.comment_bytes = comment_bytes;
    for (const auto& f : used) st.used_bytes += f.size;
    for (const auto& f : residual) {
        st.residual_file_bytes += f.size;
        auto& tally = st.type_histogram[static_cast<int>(classify_file_type(f.relative_path))];
        tally.files += 1;
        tally.bytes += f.size;
    }
    uint64_t anc_bytes = 0;
    for (const auto& f : anc) anc_bytes += f.size;
    st.total_project_bytes = st.used_bytes + st.residual_file_bytes + anc_bytes;
    st.residual_ratio =
        st.total_project_bytes == 0
            ? 0.0
            : static_cast<double>(st.residual_file_bytes) /
                  static_cast<double>(st.total_project_bytes);
    st.size_bucket = size_bucket_of(st.residual_file_bytes);
    st.ratio_bucket = ratio_bucket_of(st.residual_ratio);
    return st;
}

}  // namespace residua
