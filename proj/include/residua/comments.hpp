#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace residua {

enum class CommentKind { LinePercent, CommentEnvironment, IfFalse, IfZero };

std::string_view to_string(CommentKind k);
std::optional<CommentKind> comment_kind_from_string(std::string_view s);

struct CommentBlock {
    CommentKind kind = CommentKind::LinePercent;
    size_t start_line = 1;  // 1-based line of the opening delimiter
    std::string text;       // delimiters excluded

    bool operator==(const CommentBlock&) const = default;
};

struct CommentScan {
    std::vector<CommentBlock> blocks;            // in source order, non-overlapping
    std::vector<std::pair<size_t, size_t>> spans;  // [begin,end) byte ranges, delimiters included
    std::vector<std::string> diagnostics;        // unterminated blocks and the like
};

// Single pass over raw TeX bytes. Grammar:
//   - remainder of a line after an unescaped '%' (a control symbol \% stays literal)
//   - \begin{comment} ... \end{comment}, first closer wins
//   - \iffalse ... \fi with nested \if.../\fi tracking; '%' hides tokens to end of line
//   - \if0 ... \fi, opener only as first non-blank token of its line
// Unterminated block bodies run to end of input and add a diagnostic.
CommentScan extract_comments(std::string_view tex_source);

// Comment spans blanked with spaces; newlines kept so line numbers survive.
std::string mask_comments(std::string_view tex_source, const CommentScan& scan);

// Per-project concatenated comments document with machine-parsable framing.
struct CommentsDoc {
    struct Entry {
        std::string file;
        CommentBlock block;
        bool operator==(const Entry&) const = default;
    };
    std::vector<Entry> entries;  // ordered by file path, then start line

    // Sum of block text bytes; framing headers never count.
    uint64_t total_text_bytes() const;
    std::string serialize() const;
    static std::optional<CommentsDoc> parse(std::string_view doc);
};

}  // namespace residua
