#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace residua {

// Byte-oriented text helpers. Scanning operates on raw bytes; UTF-8
// sanitization happens only at serialization boundaries.

bool is_valid_utf8(std::string_view s);

// Maps each byte to its Latin-1 code point, producing valid UTF-8.
std::string latin1_to_utf8(std::string_view s);

// Valid UTF-8 passes through unchanged; otherwise invalid bytes are
// replaced with U+FFFD. Output is always valid UTF-8.
std::string to_utf8_lossy(std::string_view s);

char ascii_lower(char c);
std::string ascii_lower_copy(std::string_view s);
bool iequals_ascii(std::string_view a, std::string_view b);

std::string trim(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

// Lowercase extension including the leading dot ("" when absent).
// Compound suffixes listed in `compound` (e.g. ".synctex.gz") win over
// the plain last-dot extension.
std::string lower_extension(std::string_view path,
                            const std::vector<std::string>& compound = {});

// Filename part after the last '/'.
std::string_view basename_of(std::string_view path);
// Directory part before the last '/' ("" for topmost).
std::string_view dirname_of(std::string_view path);
// Stem of the basename (extension stripped).
std::string_view stem_of(std::string_view path);

// Lexically normalizes a relative path: '\' -> '/', collapses "//" and
// "./", resolves ".." against earlier segments. Returns nullopt when the
// path is absolute or ".." escapes the root.
std::optional<std::string> normalize_relpath(std::string_view raw);

// Heuristic: mostly printable text containing at least one control word.
bool looks_like_tex_text(std::string_view data);

}  // namespace residua
