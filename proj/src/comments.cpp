#include "residua/comments.hpp"

#include <algorithm>

namespace residua {

std::string_view to_string(CommentKind k) {
    switch (k) {
        case CommentKind::LinePercent: return "LinePercent";
        case CommentKind::CommentEnvironment: return "CommentEnvironment";
        case CommentKind::IfFalse: return "IfFalse";
        case CommentKind::IfZero: return "IfZero";
    }
    return "LinePercent";
}

std::optional<CommentKind> comment_kind_from_string(std::string_view s) {
    if (s == "LinePercent") return CommentKind::LinePercent;
    if (s == "CommentEnvironment") return CommentKind::CommentEnvironment;
    if (s == "IfFalse") return CommentKind::IfFalse;
    if (s == "IfZero") return CommentKind::IfZero;
    return std::nullopt;
}

namespace {

bool is_letter(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Control word at s[pos]=='\\': returns the letter run after the backslash.
std::string_view control_word(std::string_view s, size_t pos) {
    size_t i = pos + 1;
    while (i < s.size() && is_letter(s[i])) ++i;
    return s.substr(pos + 1, i - pos - 1);
}

// Matches "\begin{comment}" / "\end{comment}" with optional blanks between
// the control word and the brace group. Returns one past the closing brace.
std::optional<size_t> match_env_token(std::string_view s, size_t pos,
                                      std::string_view word) {
    if (pos >= s.size() || s[pos] != '\\') return std::nullopt;
    if (s.compare(pos + 1, word.size(), word) != 0) return std::nullopt;
    size_t i = pos + 1 + word.size();
    if (i < s.size() && is_letter(s[i])) return std::nullopt;  // longer word
    while (i < s.size() && is_blank(s[i])) ++i;
    constexpr std::string_view arg = "{comment}";
    if (s.compare(i, arg.size(), arg) != 0) return std::nullopt;
    return i + arg.size();
}

size_t count_lines(std::string_view s, size_t begin, size_t end) {
    return static_cast<size_t>(std::count(s.begin() + begin, s.begin() + end, '\n'));
}

}  // namespace

CommentScan extract_comments(std::string_view s) {
    CommentScan out;
    const size_t n = s.size();
    size_t pos = 0;
    size_t line = 1;
    bool line_blank_so_far = true;  // nothing but blanks since the last newline

    auto add_block = [&](CommentKind kind, size_t start_line, size_t span_begin,
                         size_t span_end, size_t text_begin, size_t text_end) {
        CommentBlock b;
        b.kind = kind;
        b.start_line = start_line;
        b.text.assign(s.substr(text_begin, text_end - text_begin));
        out.blocks.push_back(std::move(b));
        out.spans.emplace_back(span_begin, span_end);
    };

    // Body scan for \iffalse / \if0: tracks nested conditionals; an unescaped
    // '%' hides the rest of its line from token matching (TeX still honors
    // comments while skipping a false branch). Returns [body_end, span_end].
    auto scan_if_body = [&](size_t body_begin, bool* terminated) {
        size_t i = body_begin;
        int depth = 1;
        while (i < n) {
            char c = s[i];
            if (c == '\\') {
                std::string_view word = control_word(s, i);
                if (word.empty()) {
                    i += 2;  // control symbol: \% \\ \{ ...
                    continue;
                }
                if (word == "fi") {
                    if (--depth == 0) {
                        *terminated = true;
                        return std::pair<size_t, size_t>{i, i + 3};
                    }
                } else if (word.size() >= 2 && word[0] == 'i' && word[1] == 'f') {
                    ++depth;
                }
                i += 1 + word.size();
                continue;
            }
            if (c == '%') {
                while (i < n && s[i] != '\n') ++i;
                continue;
            }
            ++i;
        }
        *terminated = false;
        return std::pair<size_t, size_t>{n, n};
    };

    while (pos < n) {
        char c = s[pos];
        if (c == '\n') {
            ++line;
            line_blank_so_far = true;
            ++pos;
            continue;
        }
        if (is_blank(c)) {
            ++pos;
            continue;
        }
        if (c == '%') {
            size_t eol = pos;
            while (eol < n && s[eol] != '\n') ++eol;
            size_t text_end = eol;
            if (text_end > pos + 1 && s[text_end - 1] == '\r') --text_end;
            add_block(CommentKind::LinePercent, line, pos, eol, pos + 1, text_end);
            pos = eol;
            line_blank_so_far = false;
            continue;
        }
        if (c == '\\') {
            if (auto after = match_env_token(s, pos, "begin")) {
                size_t start_line = line;
                size_t body_begin = *after;
                size_t close = body_begin;
                size_t span_end = n;
                size_t body_end = n;
                bool terminated = false;
                while (close < n) {
                    if (s[close] == '\\') {
                        if (auto end_after = match_env_token(s, close, "end")) {
                            terminated = true;
                            body_end = close;
                            span_end = *end_after;
                            break;
                        }
                    }
                    ++close;
                }
                if (!terminated) {
                    body_end = span_end = n;
                    out.diagnostics.push_back(
                        "unterminated comment environment starting at line " +
                        std::to_string(start_line));
                }
                add_block(CommentKind::CommentEnvironment, start_line, pos, span_end,
                          body_begin, body_end);
                line += count_lines(s, pos, span_end);
                pos = span_end;
                line_blank_so_far = false;
                continue;
            }
            std::string_view word = control_word(s, pos);
            if (word == "iffalse") {
                size_t start_line = line;
                size_t body_begin = pos + 1 + word.size();
                bool terminated = false;
                auto [body_end, span_end] = scan_if_body(body_begin, &terminated);
                if (!terminated)
                    out.diagnostics.push_back(
                        "unterminated if-false block starting at line " +
                        std::to_string(start_line));
                add_block(CommentKind::IfFalse, start_line, pos, span_end,
                          body_begin, body_end);
                line += count_lines(s, pos, span_end);
                pos = span_end;
                line_blank_so_far = false;
                continue;
            }
            if (word == "if" && line_blank_so_far && pos + 3 <= n && s[pos + 3] == '0') {
                size_t start_line = line;
                size_t body_begin = pos + 4;
                bool terminated = false;
                auto [body_end, span_end] = scan_if_body(body_begin, &terminated);
                if (!terminated)
                    out.diagnostics.push_back(
                        "unterminated if-zero block starting at line " +
                        std::to_string(start_line));
                add_block(CommentKind::IfZero, start_line, pos, span_end,
                          body_begin, body_end);
                line += count_lines(s, pos, span_end);
                pos = span_end;
                line_blank_so_far = false;
                continue;
            }
            // Any other control sequence; control symbols eat the next byte,
            // which keeps \% from opening a line comment.
            pos += word.empty() ? 2 : 1 + word.size();
            line_blank_so_far = false;
            continue;
        }
        line_blank_so_far = false;
        ++pos;
    }
    return out;
}

std::string mask_comments(std::string_view s, const CommentScan& scan) {
    std::string out(s);
    for (const auto& [b, e] : scan.spans) {
        for (size_t i = b; i < e && i < out.size(); ++i) {
            if (out[i] != '\n' && out[i] != '\r') out[i] = ' ';
        }
    }
    return out;
}

uint64_t CommentsDoc::total_text_bytes() const {
    uint64_t sum = 0;
    for (const auto& e : entries) sum += e.block.text.size();
    return sum;
}

std::string CommentsDoc::serialize() const {
    std::string out = "%% residua-comments v1\n";
    for (const auto& e : entries) {
        out += "%% block line=";
        out += std::to_string(e.block.start_line);
        out += " kind=";
        out += to_string(e.block.kind);
        out += " bytes=";
        out += std::to_string(e.block.text.size());
        out += " file=";
        out += e.file;
        out += "\n";
        out += e.block.text;
        out += "\n";
    }
    return out;
}

std::optional<CommentsDoc> CommentsDoc::parse(std::string_view doc) {
    constexpr std::string_view magic = "%% residua-comments v1\n";
    if (doc.substr(0, magic.size()) != magic) return std::nullopt;
    CommentsDoc out;
    size_t pos = magic.size();
    while (pos < doc.size()) {
        size_t eol = doc.find('\n', pos);
        if (eol == std::string_view::npos) return std::nullopt;
        std::string_view header = doc.substr(pos, eol - pos);
        constexpr std::string_view prefix = "%% block line=";
        if (header.substr(0, prefix.size()) != prefix) return std::nullopt;
        header.remove_prefix(prefix.size());

        // Fixed field order: line, kind, bytes, then file= to end of line.
        size_t kp = header.find(" kind=");
        size_t bp = header.find(" bytes=");
        size_t fp = header.find(" file=");
        if (kp == std::string_view::npos || bp == std::string_view::npos ||
            fp == std::string_view::npos || !(kp < bp && bp < fp))
            return std::nullopt;

        Entry e;
        e.block.start_line = 0;
        for (char ch : header.substr(0, kp)) {
            if (ch < '0' || ch > '9') return std::nullopt;
            e.block.start_line = e.block.start_line * 10 + static_cast<size_t>(ch - '0');
        }
        auto kind = comment_kind_from_string(header.substr(kp + 6, bp - kp - 6));
        if (!kind) return std::nullopt;
        e.block.kind = *kind;
        uint64_t nbytes = 0;
        for (char ch : header.substr(bp + 7, fp - bp - 7)) {
            if (ch < '0' || ch > '9') return std::nullopt;
            nbytes = nbytes * 10 + static_cast<uint64_t>(ch - '0');
        }
        e.file = std::string(header.substr(fp + 6));

        size_t body_begin = eol + 1;
        if (body_begin + nbytes > doc.size()) return std::nullopt;
        e.block.text = std::string(doc.substr(body_begin, nbytes));
        pos = body_begin + nbytes;
        if (pos >= doc.size() || doc[pos] != '\n') return std::nullopt;
        ++pos;
        out.entries.push_back(std::move(e));
    }
    return out;
}

}  // namespace residua
