#include "residua/keywords.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "residua/text.hpp"

namespace residua {

using nlohmann::json;

std::string_view to_string(ScanTarget t) {
    return t == ScanTarget::Comments ? "comments" : "residual_filenames";
}

KeywordConfig KeywordConfig::defaults() {
    KeywordConfig cfg;
    cfg.version = 1;
    auto group = [](const char* name, ScanTarget target,
                    std::vector<std::string> terms) {
        KeywordGroup g;
        g.name = name;
        g.target = target;
        g.terms = std::move(terms);
        return g;
    };
    cfg.groups = {
        group("Offensive", ScanTarget::Comments,
              {"fuck", "shit", "dumb", "idiot", "bastard", "crap", "stupid"}),
        group("Derogatory", ScanTarget::Comments,
              {"terrible", "horrible", "mess", "garbage", "trash", "useless"}),
        group("Todo", ScanTarget::Comments, {"todo", "fixme", "tbd"}),
        group("Exclamation", ScanTarget::Comments, {"wtf", "geez", "lmao"}),
        group("Uri", ScanTarget::Comments,
              {"docs.google.com/", "github.", "gitlab.", "C:\\Users", "/home/"}),
        group("HiddenPrompt", ScanTarget::Comments, {"positive review only"}),
        group("CodeFiles", ScanTarget::ResidualFilenames,
              {".exe", ".sh", ".py", ".bat", ".ipynb"}),
        group("DocumentFiles", ScanTarget::ResidualFilenames,
              {".doc", ".docx", ".xlsx", ".xls", ".ppt", ".pptx"}),
        group("VideoFiles", ScanTarget::ResidualFilenames,
              {".mp4", ".avi", ".mov"}),
        group("MiscFiles", ScanTarget::ResidualFilenames,
              {"cover_letter", "rebuttal", "reviews"}),
    };
    return cfg;
}

std::optional<KeywordConfig> KeywordConfig::load_file(const std::string& path,
                                                      std::string* error) {
    std::ifstream in(path);
    if (!in) {
        if (error) *error = "cannot open keyword config '" + path + "'";
        return std::nullopt;
    }
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        if (error) *error = "keyword config '" + path + "' is not valid JSON";
        return std::nullopt;
    }
    try {
        KeywordConfig cfg;
        cfg.version = j.at("version").get<int>();
        for (const auto& jg : j.at("groups")) {
            KeywordGroup g;
            g.name = jg.at("name").get<std::string>();
            std::string target = jg.at("target").get<std::string>();
            if (target == "comments") g.target = ScanTarget::Comments;
            else if (target == "residual_filenames") g.target = ScanTarget::ResidualFilenames;
            else {
                if (error) *error = "unknown scan target '" + target + "'";
                return std::nullopt;
            }
            g.terms = jg.at("terms").get<std::vector<std::string>>();
            cfg.groups.push_back(std::move(g));
        }
        return cfg;
    } catch (const json::exception& e) {
        if (error) *error = std::string("keyword config: ") + e.what();
        return std::nullopt;
    }
}

std::string KeywordConfig::to_json() const {
    json j;
    j["version"] = version;
    json jgroups = json::array();
    for (const auto& g : groups) {
        json jg;
        jg["name"] = g.name;
        jg["target"] = std::string(to_string(g.target));
        jg["terms"] = g.terms;
        jgroups.push_back(jg);
    }
    j["groups"] = jgroups;
    return j.dump(2) + "\n";
}

namespace {

bool is_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_';
}

bool is_ws_byte(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

}  // namespace

size_t find_term(std::string_view text, std::string_view term, size_t from,
                 bool word_boundary) {
    if (term.empty() || text.size() < term.size()) return std::string_view::npos;
    for (size_t i = from; i + term.size() <= text.size(); ++i) {
        bool match = true;
        for (size_t k = 0; k < term.size(); ++k) {
            char t = term[k];
            char c = text[i + k];
            if (t == ' ') {
                if (!is_ws_byte(c)) {
                    match = false;
                    break;
                }
            } else if (ascii_lower(c) != ascii_lower(t)) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        if (word_boundary) {
            bool left_ok = i == 0 || !is_word_char(text[i - 1]);
            size_t end = i + term.size();
            bool right_ok = end >= text.size() || !is_word_char(text[end]);
            if (!left_ok || !right_ok) continue;
        }
        return i;
    }
    return std::string_view::npos;
}

namespace {

std::string make_context(std::string_view text, size_t pos, size_t term_len) {
    constexpr size_t kMax = 200;
    size_t before = std::min<size_t>(pos, 80);
    size_t begin = pos - before;
    size_t budget = kMax > term_len + before ? kMax - term_len - before : 0;
    size_t end = std::min(text.size(), pos + term_len + budget);
    return to_utf8_lossy(text.substr(begin, end - begin));
}

}  // namespace

std::vector<KeywordHit> scan_comments(const SubmissionId& submission,
                                      const CommentsDoc& doc,
                                      const KeywordConfig& cfg,
                                      bool word_boundary) {
    std::vector<KeywordHit> hits;
    for (const auto& g : cfg.groups) {
        if (g.target != ScanTarget::Comments) continue;
        for (const auto& term : g.terms) {
            for (const auto& entry : doc.entries) {
                const std::string& text = entry.block.text;
                size_t pos = 0;
                while ((pos = find_term(text, term, pos, word_boundary)) !=
                       std::string_view::npos) {
                    KeywordHit h;
                    h.group = g.name;
                    h.term = term;
                    h.submission = submission;
                    h.file = entry.file;
                    h.line = entry.block.start_line +
                             static_cast<size_t>(std::count(text.begin(),
                                                            text.begin() + pos, '\n'));
                    h.offset = pos;
                    h.context = make_context(text, pos, term.size());
                    hits.push_back(std::move(h));
                    pos += term.size();  // non-overlapping occurrences
                }
            }
        }
    }
    // Stable order: file, line, offset, then term for reproducible output.
    std::stable_sort(hits.begin(), hits.end(),
                     [](const KeywordHit& a, const KeywordHit& b) {
                         if (a.file != b.file) return a.file < b.file;
                         if (a.line != b.line) return a.line < b.line;
                         if (a.offset != b.offset) return a.offset < b.offset;
                         return a.term < b.term;
                     });
    return hits;
}

std::vector<KeywordHit> scan_residual_filenames(
    const SubmissionId& submission, const std::vector<std::string>& residual_paths,
    const KeywordConfig& cfg) {
    std::vector<KeywordHit> hits;
    for (const auto& g : cfg.groups) {
        if (g.target != ScanTarget::ResidualFilenames) continue;
        for (const auto& term : g.terms) {
            bool is_ext = !term.empty() && term.front() == '.';
            std::string lterm = ascii_lower_copy(term);
            for (const auto& path : residual_paths) {
                std::string lower = ascii_lower_copy(path);
                size_t pos = std::string::npos;
                if (is_ext) {
                    if (lower_extension(path) == lterm)
                        pos = lower.size() - lterm.size();
                } else {
                    pos = lower.find(lterm);
                }
                if (pos == std::string::npos) continue;
                KeywordHit h;
                h.group = g.name;
                h.term = term;
                h.submission = submission;
                h.file = path;
                h.line = 0;
                h.offset = pos;
                h.context = to_utf8_lossy(path);
                hits.push_back(std::move(h));
            }
        }
    }
    std::stable_sort(hits.begin(), hits.end(),
                     [](const KeywordHit& a, const KeywordHit& b) {
                         if (a.file != b.file) return a.file < b.file;
                         if (a.offset != b.offset) return a.offset < b.offset;
                         return a.term < b.term;
                     });
    return hits;
}

std::map<std::pair<std::string, std::string>, TermCount> count_terms(
    const std::vector<KeywordHit>& hits, const KeywordConfig& cfg) {
    std::map<std::pair<std::string, std::string>, TermCount> counts;
    for (const auto& g : cfg.groups)
        for (const auto& t : g.terms) counts[{g.name, t}];  // zero-initialized
    std::map<std::pair<std::string, std::string>, std::set<SubmissionId>> projects;
    for (const auto& h : hits) {
        auto key = std::make_pair(h.group, h.term);
        ++counts[key].occurrences;
        projects[key].insert(h.submission);
    }
    for (auto& [key, tally] : counts) {
        auto it = projects.find(key);
        tally.projects = it == projects.end() ? 0 : it->second.size();
    }
    return counts;
}

}  // namespace residua
