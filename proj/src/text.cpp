#include "residua/text.hpp"

#include <algorithm>

namespace residua {

bool is_valid_utf8(std::string_view s) {
    size_t i = 0;
    const size_t n = s.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        size_t len;
        uint32_t cp;
        if (c < 0x80) { i += 1; continue; }
        else if ((c & 0xE0) == 0xC0) { len = 2; cp = c & 0x1F; }
        else if ((c & 0xF0) == 0xE0) { len = 3; cp = c & 0x0F; }
        else if ((c & 0xF8) == 0xF0) { len = 4; cp = c & 0x07; }
        else return false;
        if (i + len > n) return false;
        for (size_t k = 1; k < len; ++k) {
            unsigned char cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (cc & 0x3F);
        }
        // Reject overlong forms, surrogates, and > U+10FFFF.
        if (len == 2 && cp < 0x80) return false;
        if (len == 3 && cp < 0x800) return false;
        if (len == 4 && cp < 0x10000) return false;
        if (cp >= 0xD800 && cp <= 0xDFFF) return false;
        if (cp > 0x10FFFF) return false;
        i += len;
    }
    return true;
}

static void append_utf8(std::string& out, uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string latin1_to_utf8(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char ch : s) append_utf8(out, static_cast<unsigned char>(ch));
    return out;
}

std::string to_utf8_lossy(std::string_view s) {
    if (is_valid_utf8(s)) return std::string(s);
    std::string out;
    out.reserve(s.size());
    size_t i = 0;
    const size_t n = s.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        size_t len = 0;
        if (c < 0x80) len = 1;
        else if ((c & 0xE0) == 0xC0) len = 2;
        else if ((c & 0xF0) == 0xE0) len = 3;
        else if ((c & 0xF8) == 0xF0) len = 4;
        bool ok = len > 0 && i + len <= n;
        if (ok) {
            for (size_t k = 1; k < len && ok; ++k)
                ok = (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
        }
        if (ok && len > 1) {
            std::string_view unit = s.substr(i, len);
            if (!is_valid_utf8(unit)) ok = false;
        }
        if (ok) {
            out.append(s, i, len);
            i += len;
        } else {
            append_utf8(out, 0xFFFD);
            i += 1;
        }
    }
    return out;
}

char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string ascii_lower_copy(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](char c) { return ascii_lower(c); });
    return out;
}

bool iequals_ascii(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (ascii_lower(a[i]) != ascii_lower(b[i])) return false;
    return true;
}

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
    while (e > b && (s[e-1] == ' ' || s[e-1] == '\t' || s[e-1] == '\r' || s[e-1] == '\n')) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::string lower_extension(std::string_view path,
                            const std::vector<std::string>& compound) {
    std::string lower = ascii_lower_copy(basename_of(path));
    for (const auto& suf : compound) {
        if (lower.size() > suf.size() &&
            lower.compare(lower.size() - suf.size(), suf.size(), suf) == 0)
            return suf;
    }
    size_t dot = lower.rfind('.');
    if (dot == std::string::npos || dot == 0) return "";
    return lower.substr(dot);
}

std::string_view basename_of(std::string_view path) {
    size_t slash = path.rfind('/');
    return slash == std::string_view::npos ? path : path.substr(slash + 1);
}

std::string_view dirname_of(std::string_view path) {
    size_t slash = path.rfind('/');
    return slash == std::string_view::npos ? std::string_view{} : path.substr(0, slash);
}

std::string_view stem_of(std::string_view path) {
    std::string_view base = basename_of(path);
    size_t dot = base.rfind('.');
    if (dot == std::string_view::npos || dot == 0) return base;
    return base.substr(0, dot);
}

bool looks_like_tex_text(std::string_view data) {
    if (data.empty()) return false;
    size_t probe = std::min<size_t>(data.size(), 8192);
    size_t control = 0;
    for (size_t i = 0; i < probe; ++i) {
        unsigned char ch = static_cast<unsigned char>(data[i]);
        if (ch == 0) return false;
        if (ch < 0x09 || (ch > 0x0D && ch < 0x20)) ++control;
    }
    if (control * 20 > probe) return false;  // >5% control bytes: binary
    size_t scan = std::min<size_t>(data.size(), 256 * 1024);
    for (size_t i = 0; i + 1 < scan; ++i) {
        if (data[i] == '\\') {
            char next = data[i + 1];
            if ((next >= 'a' && next <= 'z') || (next >= 'A' && next <= 'Z'))
                return true;
        }
    }
    return false;
}

std::optional<std::string> normalize_relpath(std::string_view raw) {
    std::string unified(raw);
    std::replace(unified.begin(), unified.end(), '\\', '/');
    if (!unified.empty() && unified.front() == '/') return std::nullopt;
    // Windows drive letters are absolute paths too.
    if (unified.size() >= 2 && unified[1] == ':') return std::nullopt;
    std::vector<std::string> parts;
    for (auto& seg : split(unified, '/')) {
        if (seg.empty() || seg == ".") continue;
        if (seg == "..") {
            if (parts.empty()) return std::nullopt;
            parts.pop_back();
            continue;
        }
        parts.push_back(std::move(seg));
    }
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out.push_back('/');
        out += parts[i];
    }
    return out;
}

}  // namespace residua
