#include "residua/texgraph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <regex>
#include <set>

#include "residua/comments.hpp"
#include "residua/text.hpp"

namespace residua {

namespace {

bool is_letter(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

std::string_view control_word(std::string_view s, size_t backslash) {
    size_t i = backslash + 1;
    while (i < s.size() && is_letter(s[i])) ++i;
    return s.substr(backslash + 1, i - backslash - 1);
}

size_t skip_space(std::string_view s, size_t i) {
    while (i < s.size() && is_space(s[i])) ++i;
    return i;
}

bool word_at(std::string_view s, size_t i, std::string_view word) {
    if (s.compare(i, word.size(), word) != 0) return false;
    size_t end = i + word.size();
    return end >= s.size() || !is_letter(s[end]);
}

size_t count_newlines(std::string_view s, size_t begin, size_t end) {
    return static_cast<size_t>(std::count(s.begin() + begin, s.begin() + end, '\n'));
}

std::string unquote(std::string s) {
    s.erase(std::remove(s.begin(), s.end(), '"'), s.end());
    return trim(s);
}

// Finds "\begin" ... "{document}" allowing blanks between word and group.
size_t find_begin_document(std::string_view s) {
    for (size_t i = 0; i + 6 < s.size(); ++i) {
        if (s[i] != '\\') continue;
        if (!word_at(s, i + 1, "begin")) continue;
        size_t j = skip_space(s, i + 6);
        constexpr std::string_view arg = "{document}";
        if (s.compare(j, arg.size(), arg) == 0) return i;
    }
    return s.size();
}

bool has_control_word(std::string_view s, std::string_view word) {
    for (size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i] == '\\' && control_word(s, i) == word) return true;
    }
    return false;
}

}  // namespace

std::vector<Reference> extract_references(std::string_view s, const PatternConfig& cfg) {
    std::vector<Reference> out;
    const size_t n = s.size();
    size_t i = 0;
    size_t line = 1;

    auto advance_to = [&](size_t to) {
        line += count_newlines(s, i, to);
        i = to;
    };

    while (i < n) {
        char c = s[i];
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (c != '\\') {
            ++i;
            continue;
        }
        std::string_view word = control_word(s, i);
        if (word.empty()) {
            i += 2;  // control symbol
            continue;
        }
        size_t after = i + 1 + word.size();
        size_t cmd_line = line;
        std::string cmd(word);

        if (word == "addplot") {
            // Two-token plot forms: \addplot+[opts] table {f} / ... graphics {f}.
            size_t j = after;
            if (j < n && s[j] == '+') ++j;
            j = skip_space(s, j);
            if (j < n && s[j] == '[') {
                size_t close = s.find(']', j + 1);
                if (close == std::string_view::npos) {
                    advance_to(after);
                    continue;
                }
                j = skip_space(s, close + 1);
            }
            if (word_at(s, j, "table")) {
                cmd = "addplot_table";
                after = j + 5;
            } else if (word_at(s, j, "graphics")) {
                cmd = "addplot_graphics";
                after = j + 8;
            } else {
                advance_to(after);
                continue;
            }
        }

        const CommandSpec* spec = cfg.find(cmd);
        if (!spec) {
            advance_to(after);
            continue;
        }

        // \cmd \s* *? \s* [opts]? \s* {+ \s* arg \s* }+  with the argument
        // free of braces, mirroring the capture pattern the resolver expects.
        size_t j = skip_space(s, after);
        if (j < n && s[j] == '*') ++j;
        j = skip_space(s, j);
        if (j < n && s[j] == '[') {
            size_t close = s.find(']', j + 1);
            if (close == std::string_view::npos) {
                advance_to(after);
                continue;
            }
            j = skip_space(s, close + 1);
        }
        if (j >= n || s[j] != '{') {
            advance_to(after);
            continue;
        }
        while (j < n && s[j] == '{') ++j;
        size_t cap_begin = j;
        while (j < n && s[j] != '{' && s[j] != '}') ++j;
        if (j >= n || s[j] != '}') {
            advance_to(after);
            continue;
        }
        size_t cap_end = j;
        while (j < n && s[j] == '}') ++j;

        std::string raw = unquote(std::string(s.substr(cap_begin, cap_end - cap_begin)));
        advance_to(j);
        if (spec->split_commas) {
            for (auto& part : split(raw, ',')) {
                std::string t = trim(part);
                if (!t.empty()) out.push_back({cmd, std::move(t), cmd_line});
            }
        } else if (!raw.empty()) {
            out.push_back({cmd, std::move(raw), cmd_line});
        }
    }
    return out;
}

std::vector<std::string> extract_graphics_paths(std::string_view s) {
    std::vector<std::string> out;
    const size_t n = s.size();
    for (size_t i = 0; i + 1 < n; ++i) {
        if (s[i] != '\\') continue;
        if (!word_at(s, i + 1, "graphicspath")) continue;
        size_t j = skip_space(s, i + 1 + 12);
        if (j >= n || s[j] != '{') continue;
        ++j;
        j = skip_space(s, j);
        if (j < n && s[j] == '{') {
            // Standard form: a brace group per directory.
            while (j < n && s[j] == '{') {
                size_t close = s.find('}', j + 1);
                if (close == std::string_view::npos) break;
                std::string item = trim(s.substr(j + 1, close - j - 1));
                if (!item.empty()) out.push_back(std::move(item));
                j = skip_space(s, close + 1);
            }
        } else {
            // Tolerated single-path form: \graphicspath{figs/}.
            size_t close = s.find('}', j);
            if (close == std::string_view::npos) continue;
            std::string item = trim(s.substr(j, close - j));
            if (!item.empty()) out.push_back(std::move(item));
        }
    }
    return out;
}

RootCandidates find_root_candidates(const ProjectFiles& project) {
    RootCandidates rc;
    for (const auto& f : project.files()) {
        // Ancillary files sit outside the document graph entirely.
        if (!f.is_tex || f.in_anc) continue;
        auto content = project.read(f.relative_path);
        if (!content) continue;
        auto scan = extract_comments(*content);
        std::string masked = mask_comments(*content, scan);
        std::string_view preamble =
            std::string_view(masked).substr(0, find_begin_document(masked));
        if (has_control_word(preamble, "documentclass")) {
            rc.candidates.push_back(f.relative_path);
        } else if (has_control_word(preamble, "documentstyle")) {
            rc.deprecated_style_seen = true;
        }
    }
    std::sort(rc.candidates.begin(), rc.candidates.end());
    return rc;
}

std::string_view to_string(RootHeuristic h) {
    switch (h) {
        case RootHeuristic::SoleCandidate: return "SoleCandidate";
        case RootHeuristic::NameMatch: return "NameMatch";
        case RootHeuristic::SoleTopmost: return "SoleTopmost";
    }
    return "SoleCandidate";
}

std::optional<RootHeuristic> root_heuristic_from_string(std::string_view s) {
    if (s == "SoleCandidate") return RootHeuristic::SoleCandidate;
    if (s == "NameMatch") return RootHeuristic::NameMatch;
    if (s == "SoleTopmost") return RootHeuristic::SoleTopmost;
    return std::nullopt;
}

RootDecision infer_root(const RootCandidates& candidates, const PatternConfig& cfg) {
    RootDecision d;
    d.deprecated_style_seen = candidates.deprecated_style_seen;
    const auto& cands = candidates.candidates;
    if (cands.empty()) {
        d.status = RootDecision::Status::NoCandidate;
        return d;
    }
    if (cands.size() == 1) {
        d.status = RootDecision::Status::Found;
        d.root = cands.front();
        d.heuristic = RootHeuristic::SoleCandidate;
        return d;
    }
    for (const auto& marker : cfg.root_markers) {
        std::vector<const std::string*> matches;
        for (const auto& c : cands) {
            std::string stem = ascii_lower_copy(stem_of(c));
            if (stem.find(marker) != std::string::npos) matches.push_back(&c);
        }
        if (matches.size() == 1) {
            d.status = RootDecision::Status::Found;
            d.root = *matches.front();
            d.heuristic = RootHeuristic::NameMatch;
            return d;
        }
        if (matches.size() > 1) {
            // A tie on the same marker stays unresolved: precision first.
            d.status = RootDecision::Status::Ambiguous;
            return d;
        }
    }
    std::vector<const std::string*> topmost;
    for (const auto& c : cands) {
        if (c.find('/') == std::string::npos) topmost.push_back(&c);
    }
    if (topmost.size() == 1) {
        d.status = RootDecision::Status::Found;
        d.root = *topmost.front();
        d.heuristic = RootHeuristic::SoleTopmost;
        return d;
    }
    d.status = RootDecision::Status::Ambiguous;
    return d;
}

ProjectIndex::ProjectIndex(const ProjectFiles& project) {
    for (const auto& f : project.files()) {
        exact_.push_back(f.relative_path);
        lower_.emplace_back(ascii_lower_copy(f.relative_path), f.relative_path);
    }
    std::sort(exact_.begin(), exact_.end());
    std::sort(lower_.begin(), lower_.end());
    // Case-insensitive collisions resolve to the first original path.
    lower_.erase(std::unique(lower_.begin(), lower_.end(),
                             [](const auto& a, const auto& b) {
                                 return a.first == b.first;
                             }),
                 lower_.end());
}

std::optional<std::string> ProjectIndex::match_exact(const std::string& path) const {
    if (std::binary_search(exact_.begin(), exact_.end(), path)) return path;
    return std::nullopt;
}

std::optional<std::string> ProjectIndex::match_ci(const std::string& path) const {
    std::string lower = ascii_lower_copy(path);
    auto it = std::lower_bound(lower_.begin(), lower_.end(), lower,
                               [](const auto& a, const std::string& b) {
                                   return a.first < b;
                               });
    if (it != lower_.end() && it->first == lower) return it->second;
    return std::nullopt;
}

std::optional<std::string> resolve_reference(
    const ProjectIndex& index, std::string_view origin_dir, std::string_view raw,
    const std::vector<std::string>& ext_candidates,
    const std::vector<std::string>& graphics_paths) {
    std::string name = unquote(std::string(raw));
    if (name.empty()) return std::nullopt;

    std::vector<std::string> locations;
    auto add_location = [&](std::string loc) {
        if (std::find(locations.begin(), locations.end(), loc) == locations.end())
            locations.push_back(std::move(loc));
    };
    add_location(std::string(origin_dir));
    add_location("");  // topmost directory
    for (const auto& g : graphics_paths) add_location(g);

    std::vector<std::string> exts;
    exts.push_back("");  // raw name verbatim
    for (const auto& e : ext_candidates)
        if (!e.empty()) exts.push_back(e);

    auto candidate = [&](const std::string& loc,
                         const std::string& ext) -> std::optional<std::string> {
        std::string joined;
        if (loc.empty()) joined = name + ext;
        else if (loc.back() == '/') joined = loc + name + ext;
        else joined = loc + "/" + name + ext;
        return normalize_relpath(joined);
    };

    for (const auto& loc : locations) {
        for (const auto& ext : exts) {
            auto cand = candidate(loc, ext);
            if (!cand) continue;
            if (auto hit = index.match_exact(*cand)) return hit;
        }
    }
    for (const auto& loc : locations) {
        for (const auto& ext : exts) {
            auto cand = candidate(loc, ext);
            if (!cand) continue;
            if (auto hit = index.match_ci(*cand)) return hit;
        }
    }
    return std::nullopt;
}

std::vector<std::string> scan_font_mentions(std::string_view map_text,
                                            const std::vector<std::string>& font_exts) {
    std::string alt;
    for (const auto& e : font_exts) {
        if (e.empty() || e[0] != '.') continue;
        if (!alt.empty()) alt += "|";
        alt += e.substr(1);
    }
    if (alt.empty()) return {};
    std::regex pat("<\\[?([^<>\\[\\]\\s]+?\\.(?:" + alt + "))");
    std::vector<std::string> out;
    std::string text(map_text);
    for (auto it = std::sregex_iterator(text.begin(), text.end(), pat);
         it != std::sregex_iterator(); ++it) {
        out.push_back((*it)[1].str());
    }
    return out;
}

namespace {

// Flags macros whose replacement text wraps a file-referencing command; such
// projects are the known static-analysis blind spot (calls through the alias
// are invisible to the reference scanner).
void detect_alias_macros(std::string_view s, const PatternConfig& cfg,
                         const std::string& file,
                         std::vector<std::string>& diagnostics) {
    const size_t n = s.size();
    for (size_t i = 0; i + 1 < n; ++i) {
        if (s[i] != '\\') continue;
        std::string_view word = control_word(s, i);
        bool is_newcommand = word == "newcommand" || word == "renewcommand" ||
                             word == "providecommand";
        bool is_def = word == "def";
        if (!is_newcommand && !is_def) continue;

        size_t j = i + 1 + word.size();
        if (j < n && s[j] == '*') ++j;
        j = skip_space(s, j);
        std::string macro_name;
        if (is_newcommand && j < n && s[j] == '{') {
            j = skip_space(s, j + 1);
            if (j < n && s[j] == '\\') {
                std::string_view mn = control_word(s, j);
                macro_name = std::string(mn);
                j = skip_space(s, j + 1 + mn.size());
            }
            if (j < n && s[j] == '}') ++j;
        } else if (j < n && s[j] == '\\') {
            std::string_view mn = control_word(s, j);
            macro_name = std::string(mn);
            j += 1 + mn.size();
        }
        if (macro_name.empty()) continue;

        if (is_newcommand) {
            j = skip_space(s, j);
            for (int k = 0; k < 2 && j < n && s[j] == '['; ++k) {
                size_t close = s.find(']', j + 1);
                if (close == std::string_view::npos) break;
                j = skip_space(s, close + 1);
            }
        } else {
            // \def parameter text runs to the body's opening brace.
            while (j < n && s[j] != '{' && s[j] != '\n') ++j;
        }
        if (j >= n || s[j] != '{') continue;

        size_t body_begin = j + 1;
        int depth = 1;
        size_t k = body_begin;
        while (k < n && depth > 0) {
            if (s[k] == '\\' && k + 1 < n) k += 2;
            else {
                if (s[k] == '{') ++depth;
                else if (s[k] == '}') --depth;
                ++k;
            }
        }
        if (depth != 0) continue;
        std::string_view body = s.substr(body_begin, k - 1 - body_begin);

        for (size_t b = 0; b + 1 < body.size(); ++b) {
            if (body[b] != '\\') continue;
            std::string_view inner = control_word(body, b);
            if (inner.empty()) continue;
            if (cfg.find(inner) != nullptr || inner == "addplot") {
                diagnostics.push_back("alias-macro: \\" + macro_name + " wraps \\" +
                                      std::string(inner) + " in " + file);
                break;
            }
        }
    }
}

}  // namespace

UsageClosure compute_closure(const ProjectFiles& project, const std::string& root,
                             const PatternConfig& cfg) {
    UsageClosure out;
    ProjectIndex index(project);
    std::map<std::string, const FileEntry*> entry_by_path;
    for (const auto& f : project.files()) entry_by_path[f.relative_path] = &f;

    std::set<std::string> used;
    std::vector<std::string> queue;
    size_t queue_head = 0;
    std::vector<std::string> gpaths;

    struct Pending {
        std::string from;
        std::string command;
        std::string raw;
        ArgExts exts;
    };
    std::vector<Pending> unresolved;

    auto is_texlike = [&](const std::string& path) {
        std::string ext = lower_extension(path);
        if (ext == ".tex" || ext == ".sty" || ext == ".cls" || ext == ".bst")
            return true;
        if (!ext.empty()) return false;
        auto content = project.read(path);
        return content && looks_like_tex_text(*content);
    };

    std::function<void(const std::string&, const std::string&, const std::string&)>
        mark_used;
    auto font_scan = [&](const std::string& origin, std::string_view text) {
        std::string_view origin_dir = dirname_of(origin);
        for (const auto& m : scan_font_mentions(text, cfg.font_exts)) {
            auto hit = resolve_reference(index, origin_dir, m, {}, {});
            if (hit) mark_used(*hit, origin, "fontmap");
            else out.dangling.push_back({origin, "fontmap", m});
        }
    };
    mark_used = [&](const std::string& target, const std::string& from,
                    const std::string& command) {
        out.edges.push_back({from, command, target});
        auto it = entry_by_path.find(target);
        if (it == entry_by_path.end() || it->second->in_anc) return;
        if (!used.insert(target).second) return;
        if (is_texlike(target)) queue.push_back(target);
        if (lower_extension(target) == ".map") {
            if (auto content = project.read(target)) font_scan(target, *content);
        }
    };

    if (entry_by_path.find(root) == entry_by_path.end()) {
        out.diagnostics.push_back("root '" + root + "' not found in project");
    } else {
        used.insert(root);
        queue.push_back(root);
    }

    size_t gpaths_tried = 0;
    for (;;) {
        while (queue_head < queue.size()) {
            std::string cur = queue[queue_head++];
            auto content = project.read(cur);
            if (!content) {
                out.diagnostics.push_back("unreadable file '" + cur + "'");
                continue;
            }
            auto cscan = extract_comments(*content);
            std::string masked = mask_comments(*content, cscan);
            detect_alias_macros(masked, cfg, cur, out.diagnostics);
            for (auto& g : extract_graphics_paths(masked)) {
                if (std::find(gpaths.begin(), gpaths.end(), g) == gpaths.end())
                    gpaths.push_back(std::move(g));
            }
            for (auto& ref : extract_references(masked, cfg)) {
                const CommandSpec* spec = cfg.find(ref.command);
                if (spec->map_inline) {
                    font_scan(cur, ref.raw);
                    continue;
                }
                std::string raw = ref.raw;
                if (spec->map_file) {
                    // Map-file args carry +/-/= load-mode prefixes.
                    size_t strip = 0;
                    while (strip < raw.size() &&
                           (raw[strip] == '+' || raw[strip] == '-' || raw[strip] == '='))
                        ++strip;
                    raw = raw.substr(strip);
                }
                const auto& exts = spec->exts == ArgExts::Graphics ? cfg.graphics_exts
                                                                   : cfg.generic_exts;
                auto hit = resolve_reference(index, dirname_of(cur), raw, exts, gpaths);
                if (hit) mark_used(*hit, cur, ref.command);
                else unresolved.push_back({cur, ref.command, raw, spec->exts});
            }
        }
        if (gpaths.size() == gpaths_tried) break;
        gpaths_tried = gpaths.size();
        // Graphics paths declared after a failed lookup get a second chance.
        auto pending = std::move(unresolved);
        unresolved.clear();
        for (auto& p : pending) {
            const auto& exts =
                p.exts == ArgExts::Graphics ? cfg.graphics_exts : cfg.generic_exts;
            auto hit = resolve_reference(index, dirname_of(p.from), p.raw, exts, gpaths);
            if (hit) mark_used(*hit, p.from, p.command);
            else unresolved.push_back(std::move(p));
        }
    }

    for (auto& p : unresolved)
        out.dangling.push_back({std::move(p.from), std::move(p.command), std::move(p.raw)});

    for (const auto& f : project.files()) {
        if (f.in_anc) out.anc.push_back(f.relative_path);
        else if (used.count(f.relative_path)) out.used.push_back(f.relative_path);
        else out.residual.push_back(f.relative_path);
    }
    return out;
}

}  // namespace residua
