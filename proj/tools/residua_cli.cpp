// Command-line front end: scan a corpus into per-submission reports, then
// aggregate, keyword-search, or export cleaned projects from those reports.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "residua/keywords.hpp"
#include "residua/patterns.hpp"
#include "residua/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"residua: residual-data analyzer for TeX submission corpora"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "residua 1.0.0");

    residua::RunConfig config;
    std::string out_dir;
    std::string metadata_path;
    std::string submission_id;
    bool word_boundary = false;
    bool include_anc = false;
    bool force = false;
    std::string config_kind;

    CLI::App* scan = app.add_subcommand(
        "scan", "Analyze every submission in a corpus directory");
    scan->add_option("--corpus", config.corpus_dir, "Corpus directory")
        ->required();
    scan->add_option("--reports", config.report_dir,
                     "Output directory for per-submission reports")
        ->required();
    scan->add_option("--scratch", config.scratch_dir,
                     "Scratch directory for unpacking (overrides $" +
                         std::string(residua::kScratchEnvVar) + ")");
    scan->add_option("--workers", config.workers, "Parallel workers (>= 1)")
        ->check(CLI::Range(1, 4096));
    scan->add_option("--patterns", config.patterns_path,
                     "Reference-pattern config JSON (default: built in)");
    scan->add_flag("--resume", config.resume,
                   "Skip submissions that already have a report");
    scan->add_option("--year-min", config.year_min, "First submission year");
    scan->add_option("--year-max", config.year_max, "Last submission year");
    scan->add_option("--month-min", config.month_min, "First month (1-12)")
        ->check(CLI::Range(1, 12));
    scan->add_option("--month-max", config.month_max, "Last month (1-12)")
        ->check(CLI::Range(1, 12));

    CLI::App* aggregate = app.add_subcommand(
        "aggregate", "Build corpus-level tables from analysis reports");
    aggregate->add_option("--reports", config.report_dir, "Report directory")
        ->required();
    aggregate->add_option("--out", out_dir, "Output directory for tables")
        ->required();
    aggregate->add_option("--metadata", metadata_path,
                          "Category metadata snapshot (JSONL)");

    CLI::App* search = app.add_subcommand(
        "search", "Keyword-scan extracted comments and residual filenames");
    search->add_option("--reports", config.report_dir, "Report directory")
        ->required();
    search->add_option("--out", out_dir, "Output directory for hit tables")
        ->required();
    search->add_option("--keywords", config.keywords_path,
                       "Keyword config JSON (default: built in)");
    search->add_flag("--word-boundary", word_boundary,
                     "Skip matches embedded in longer words");

    CLI::App* clean = app.add_subcommand(
        "clean", "Export one submission without its residual files");
    clean->add_option("id", submission_id, "Submission id (YYMM.XXXXX)")
        ->required();
    clean->add_option("--corpus", config.corpus_dir, "Corpus directory")
        ->required();
    clean->add_option("--reports", config.report_dir, "Report directory")
        ->required();
    clean->add_option("--out", out_dir, "Destination directory")->required();
    clean->add_option("--scratch", config.scratch_dir, "Scratch directory");
    clean->add_flag("--include-anc", include_anc, "Also copy ancillary files");
    clean->add_flag("--force", force, "Overwrite existing destination files");

    CLI::App* dump = app.add_subcommand(
        "dump-config", "Print a built-in config as JSON");
    dump->add_option("kind", config_kind, "Which config: patterns or keywords")
        ->required()
        ->check(CLI::IsMember({"patterns", "keywords"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (scan->parsed()) return residua::cmd_scan(config).exit_code;
    if (aggregate->parsed())
        return residua::cmd_aggregate(config.report_dir, out_dir, metadata_path);
    if (search->parsed())
        return residua::cmd_search(config.report_dir, out_dir,
                                   config.keywords_path, word_boundary);
    if (clean->parsed())
        return residua::cmd_clean(config, submission_id, out_dir, include_anc,
                                  force);
    if (dump->parsed()) {
        if (config_kind == "patterns")
            std::cout << residua::PatternConfig::defaults().to_json();
        else
            std::cout << residua::KeywordConfig::defaults().to_json();
        return 0;
    }
    return 2;
}
