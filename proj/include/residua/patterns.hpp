#pragma once

#include <optional>
#include <string>
#include <vector>

namespace residua {

// Which extension-fallback list applies to a command's argument.
enum class ArgExts { Generic, Graphics };

struct CommandSpec {
    std::string name;   // control word; "addplot_table" is the two-token \addplot table
    ArgExts exts = ArgExts::Generic;
    bool split_commas = false;  // argument is a comma list (bibliography, usepackage, ...)
    bool map_file = false;      // argument names a font map file (pdfmapfile)
    bool map_inline = false;    // argument holds map lines itself (pdfmapline)
};

// Reference-command table plus resolution lists. Ships as a versioned JSON
// file and can be swapped at runtime, so new commands need no rebuild.
struct PatternConfig {
    int version = 1;
    std::vector<CommandSpec> commands;
    std::vector<std::string> generic_exts;   // "" means "try the raw name"
    std::vector<std::string> graphics_exts;
    std::vector<std::string> font_exts;      // map-file scan targets
    std::vector<std::string> root_markers;   // root-name heuristic, priority order

    const CommandSpec* find(std::string_view name) const;

    static PatternConfig defaults();
    static std::optional<PatternConfig> load_file(const std::string& path,
                                                  std::string* error);
    std::string to_json() const;
};

}  // namespace residua
