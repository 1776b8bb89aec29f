#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "residua/patterns.hpp"
#include "residua/project.hpp"

namespace residua {

// One captured file reference: command from the pattern table plus its
// first brace-group argument (trimmed, unquoted; comma lists already split).
struct Reference {
    std::string command;
    std::string raw;
    size_t line = 1;

    bool operator==(const Reference&) const = default;
};

// Scans comment-masked TeX source. Callers mask first so both comment
// accounting and reference capture share one comment grammar.
std::vector<Reference> extract_references(std::string_view masked_source,
                                          const PatternConfig& cfg);

// \graphicspath{{dir1}{dir2}} declarations, in source order.
std::vector<std::string> extract_graphics_paths(std::string_view masked_source);

struct RootCandidates {
    std::vector<std::string> candidates;  // sorted by path
    bool deprecated_style_seen = false;   // legacy style-file declarations only
};

// TeX files whose preamble (before the first document-begin, comments
// stripped) declares a document class.
RootCandidates find_root_candidates(const ProjectFiles& project);

enum class RootHeuristic { SoleCandidate, NameMatch, SoleTopmost };
std::string_view to_string(RootHeuristic h);
std::optional<RootHeuristic> root_heuristic_from_string(std::string_view s);

struct RootDecision {
    enum class Status { Found, Ambiguous, NoCandidate };
    Status status = Status::NoCandidate;
    std::string root;  // when Found
    RootHeuristic heuristic = RootHeuristic::SoleCandidate;
    bool deprecated_style_seen = false;
};

RootDecision infer_root(const RootCandidates& candidates, const PatternConfig& cfg);

struct ReferenceEdge {
    std::string from;
    std::string command;
    std::string to;
    bool operator==(const ReferenceEdge&) const = default;
};

struct DanglingReference {
    std::string from;
    std::string command;
    std::string raw;
    bool operator==(const DanglingReference&) const = default;
};

struct UsageClosure {
    std::vector<std::string> used;      // sorted; always contains the root
    std::vector<std::string> residual;  // sorted; disjoint from used
    std::vector<std::string> anc;       // ancillary files, in neither set
    std::vector<ReferenceEdge> edges;
    std::vector<DanglingReference> dangling;
    std::vector<std::string> diagnostics;
};

// Breadth-first reachability from the root over resolved references.
// Resolved TeX-like targets (.tex/.sty/.cls/.bst, or extensionless files
// with TeX content) are scanned recursively; map files are scanned for
// font-file mentions. used/residual/anc partition the project's files.
UsageClosure compute_closure(const ProjectFiles& project, const std::string& root,
                             const PatternConfig& cfg);

// Lookup table for reference resolution, exact first then case-insensitive.
class ProjectIndex {
public:
    explicit ProjectIndex(const ProjectFiles& project);
    std::optional<std::string> match_exact(const std::string& path) const;
    // Lowercase lookup; collisions resolve to the lexicographically first path.
    std::optional<std::string> match_ci(const std::string& path) const;

private:
    std::vector<std::string> exact_;               // sorted
    std::vector<std::pair<std::string, std::string>> lower_;  // sorted by first
};

// Location order: origin's directory, the topmost directory, then each
// declared graphics path; at each location the raw name first, then each
// fallback extension appended.
std::optional<std::string> resolve_reference(
    const ProjectIndex& index, std::string_view origin_dir, std::string_view raw,
    const std::vector<std::string>& ext_candidates,
    const std::vector<std::string>& graphics_paths);

// Earliest captures of the map-file font pattern over `map_text`, in order.
std::vector<std::string> scan_font_mentions(std::string_view map_text,
                                            const std::vector<std::string>& font_exts);

}  // namespace residua
