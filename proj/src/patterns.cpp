#include "residua/patterns.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace residua {

using nlohmann::json;

const CommandSpec* PatternConfig::find(std::string_view name) const {
    for (const auto& c : commands)
        if (c.name == name) return &c;
    return nullptr;
}

PatternConfig PatternConfig::defaults() {
    PatternConfig cfg;
    cfg.version = 1;

    auto generic = [](const char* n) {
        CommandSpec s;
        s.name = n;
        return s;
    };
    auto graphics = [](const char* n) {
        CommandSpec s;
        s.name = n;
        s.exts = ArgExts::Graphics;
        return s;
    };
    auto commalist = [](const char* n) {
        CommandSpec s;
        s.name = n;
        s.split_commas = true;
        return s;
    };

    cfg.commands = {
        generic("input"),
        generic("include"),
        graphics("includegraphics"),
        graphics("includesvg"),
        graphics("overpic"),
        graphics("pgfimage"),
        graphics("epsfig"),
        graphics("pdfximage"),
        commalist("bibliography"),
        commalist("usepackage"),
        generic("documentclass"),
        graphics("includepdf"),
        [] {
            CommandSpec s;
            s.name = "pdfmapfile";
            s.map_file = true;
            return s;
        }(),
        [] {
            CommandSpec s;
            s.name = "pdfmapline";
            s.map_inline = true;
            return s;
        }(),
        commalist("requirepackage"),
        generic("LoadClass"),
        generic("addbibresource"),
        generic("lstinputlisting"),
        generic("inputminted"),
        generic("verbatiminput"),
        commalist("includeonly"),
        generic("subimport"),
        generic("includefrom"),
        generic("subincludefrom"),
        generic("subfile"),
        generic("includestandalone"),
        generic("externaldocument"),
        commalist("usetikzlibrary"),
        commalist("usepgfplotslibrary"),
        graphics("pgfdeclareimage"),
        generic("pgfplotstableread"),
        generic("addplot_table"),
        graphics("addplot_graphics"),
        generic("csvautotabular"),
        generic("csvreader"),
        generic("DTLloaddb"),
        generic("SweaveInput"),
        generic("bibliographystyle"),
        generic("movie"),
        generic("readdef"),
        generic("loadglsentries"),
        generic("InputIfFileExists"),
        generic("DeclareFontShape"),
        graphics("plotone"),
        graphics("plottwo"),
        graphics("plotfiddle"),
        graphics("tikzfig"),
        graphics("trimfig"),
        graphics("biographywithpic"),
    };

    cfg.generic_exts = {"",     ".tex", ".pdf", ".png", ".jpg", ".jpeg",
                        ".eps", ".svg", ".bmp", ".sty", ".cls", ".bib"};
    cfg.graphics_exts = {".png", ".svg", ".jpg", ".pdf", ".jpeg", ".eps"};
    cfg.font_exts = {".tfm", ".vf", ".pfb", ".enc", ".fd"};
    cfg.root_markers = {"main", "paper", "cameraready"};
    return cfg;
}

std::optional<PatternConfig> PatternConfig::load_file(const std::string& path,
                                                      std::string* error) {
    std::ifstream in(path);
    if (!in) {
        if (error) *error = "cannot open pattern config '" + path + "'";
        return std::nullopt;
    }
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        if (error) *error = "pattern config '" + path + "' is not valid JSON";
        return std::nullopt;
    }
    try {
        PatternConfig cfg;
        cfg.version = j.at("version").get<int>();
        for (const auto& jc : j.at("commands")) {
            CommandSpec s;
            s.name = jc.at("name").get<std::string>();
            std::string exts = jc.value("exts", "generic");
            s.exts = exts == "graphics" ? ArgExts::Graphics : ArgExts::Generic;
            s.split_commas = jc.value("split_commas", false);
            s.map_file = jc.value("map_file", false);
            s.map_inline = jc.value("map_inline", false);
            cfg.commands.push_back(std::move(s));
        }
        cfg.generic_exts = j.at("generic_exts").get<std::vector<std::string>>();
        cfg.graphics_exts = j.at("graphics_exts").get<std::vector<std::string>>();
        cfg.font_exts = j.at("font_exts").get<std::vector<std::string>>();
        cfg.root_markers = j.at("root_markers").get<std::vector<std::string>>();
        return cfg;
    } catch (const json::exception& e) {
        if (error) *error = "pattern config '" + path + "': " + e.what();
        return std::nullopt;
    }
}

std::string PatternConfig::to_json() const {
    json j;
    j["version"] = version;
    json cmds = json::array();
    for (const auto& c : commands) {
        json jc;
        jc["name"] = c.name;
        if (c.exts == ArgExts::Graphics) jc["exts"] = "graphics";
        if (c.split_commas) jc["split_commas"] = true;
        if (c.map_file) jc["map_file"] = true;
        if (c.map_inline) jc["map_inline"] = true;
        cmds.push_back(jc);
    }
    j["commands"] = cmds;
    j["generic_exts"] = generic_exts;
    j["graphics_exts"] = graphics_exts;
    j["font_exts"] = font_exts;
    j["root_markers"] = root_markers;
    return j.dump(2) + "\n";
}

}  // namespace residua
