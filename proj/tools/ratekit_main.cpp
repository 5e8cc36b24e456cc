// ratekit: codebook-driven blind rating pipeline and reliability/effect-size
// analytics. Subcommands mirror the pipeline stages: codebook validate,
// corpus ingest, blind, judge run/qualify, stats, report, reproduce.

#include "ratekit/analysis.hpp"
#include "ratekit/codebook.hpp"
#include "ratekit/corpus.hpp"
#include "ratekit/error.hpp"
#include "ratekit/fixtures.hpp"
#include "ratekit/judging.hpp"
#include "ratekit/pipeline.hpp"
#include "ratekit/table.hpp"
#include "ratekit/util.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace ratekit;

namespace {

// Exit-code taxonomy: 0 ok; 1 validation/data; 2 backend/transport;
// 3 reproduction-ledger failure.
int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::Backend: return 2;
        case ErrorCode::Ledger: return 3;
        default: return 1;
    }
}

void ensure_out_dir(const std::string& out) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) fail(ErrorCode::Io, "cannot create output directory '" + out + "'");
}

std::vector<TableFormat> all_formats() {
    return {TableFormat::Grid, TableFormat::Structured, TableFormat::Markdown};
}

void write_all_formats(const Table& table, const std::string& out) {
    for (const auto format : all_formats()) write_table(table, out, format);
}

struct StatsArgs {
    std::string ratings_path;
    std::string map_path;
    std::string codebook_path;
    std::string corpus_path;
    std::string out;
    std::vector<std::string> coder_sets;
};

std::vector<CoderSetSpec> resolve_coder_sets(const std::vector<std::string>& specs,
                                             const RatingMatrix& matrix) {
    std::vector<CoderSetSpec> sets;
    if (specs.empty()) {
        sets.push_back({std::to_string(matrix.coders().size()) + "C", matrix.coders()});
        return sets;
    }
    for (const auto& raw : specs) {
        CoderSetSpec spec;
        std::string ids = raw;
        const auto eq = raw.find('=');
        if (eq != std::string::npos) {
            spec.set_id = raw.substr(0, eq);
            ids = raw.substr(eq + 1);
        }
        std::size_t start = 0;
        while (start <= ids.size()) {
            const auto comma = ids.find(',', start);
            const std::string id =
                trim(ids.substr(start, comma == std::string::npos ? std::string::npos
                                                                  : comma - start));
            if (!id.empty()) spec.coder_ids.push_back(id);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (spec.coder_ids.empty()) {
            fail(ErrorCode::Validation, "empty --coder-set '" + raw + "'");
        }
        if (spec.set_id.empty()) {
            spec.set_id = std::to_string(spec.coder_ids.size()) + "C";
        }
        sets.push_back(std::move(spec));
    }
    return sets;
}

// Shared by `stats` (all formats) and `report` (adds analysis-level tables).
int run_stats(const StatsArgs& args, bool analysis_level, TableFormat report_format) {
    const Codebook cb = load_codebook(args.codebook_path);
    const Study study = ingest_corpus(args.corpus_path);
    const auto records = parse_records(read_text_file(args.ratings_path), args.ratings_path);
    const auto map = parse_blinding_map(read_text_file(args.map_path), args.map_path);
    const RatingMatrix matrix = assemble_matrix(records, map, cb);

    ensure_out_dir(args.out);
    const auto sets = resolve_coder_sets(args.coder_sets, matrix);
    const StatsBundle bundle = build_stats_bundle(matrix, study, cb, sets);
    for (const auto& warning : bundle.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }

    for (const auto& per_set : bundle.sets) {
        const Table consensus = render_consensus_table(
            per_set.consensus, study, cb, "consensus_" + per_set.spec.set_id);
        const Table* diffs_table = nullptr;
        Table diffs;
        if (per_set.diffs) {
            diffs = render_diff_table(*per_set.diffs, "diffs_" + per_set.spec.set_id, true);
            diffs_table = &diffs;
        }
        if (analysis_level) {
            write_table(consensus, args.out, report_format);
            if (diffs_table) write_table(*diffs_table, args.out, report_format);

            const ScoreTable scores =
                score_table_from_consensus(per_set.consensus, study, cb.id);
            try {
                const GroupStats stats = group_stats(scores, study);
                write_table(render_group_stats(
                                stats, "group_stats_" + per_set.spec.set_id),
                            args.out, report_format);
            } catch (const Error& e) {
                std::cerr << "warning: group stats skipped for set '"
                          << per_set.spec.set_id << "': " << e.what() << "\n";
            }
            if (per_set.diffs) {
                try {
                    write_table(render_heatmap(build_heatmap({*per_set.diffs})),
                                args.out, report_format);
                } catch (const Error& e) {
                    std::cerr << "warning: heatmap skipped: " << e.what() << "\n";
                }
            }
        } else {
            write_all_formats(consensus, args.out);
            if (diffs_table) write_all_formats(*diffs_table, args.out);
        }
    }

    if (bundle.kappa) {
        const auto tables = {render_kappa_pairs(*bundle.kappa),
                             render_kappa_indicators(*bundle.kappa),
                             render_kappa_coders(*bundle.kappa)};
        for (const auto& table : tables) {
            if (analysis_level) {
                write_table(table, args.out, report_format);
            } else {
                write_all_formats(table, args.out);
            }
        }
    }
    std::cout << "wrote statistics for " << bundle.sets.size() << " coder set(s) to "
              << args.out << "\n";
    return 0;
}

int run_reproduce_cmd(const std::string& out, const std::string& fixtures_dir) {
    const PaperFixtures fixtures = fixtures_dir.empty()
                                       ? load_paper_fixtures()
                                       : load_paper_fixtures_from_dir(fixtures_dir);
    const ReproduceResult result = run_reproduce(fixtures);

    ensure_out_dir(out);
    for (const auto& table : result.tables) write_all_formats(table, out);
    write_text_file(out + "/ledger.txt", result.ledger_text());

    std::cout << result.ledger_text();
    if (!result.ok()) {
        std::cerr << "error[ledger]: reproduction failed for:";
        for (const auto& name : result.failed_names()) std::cerr << " " << name;
        std::cerr << "\n";
        return 3;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"codebook-driven rating pipeline and reliability analytics"};
    app.require_subcommand(1);

    // --- codebook validate ---------------------------------------------------
    auto* codebook_cmd = app.add_subcommand("codebook", "codebook operations");
    codebook_cmd->require_subcommand(1);
    std::string cb_path;
    auto* cb_validate = codebook_cmd->add_subcommand("validate", "validate a codebook file");
    cb_validate->add_option("path", cb_path, "codebook JSON file")->required();

    // --- corpus ingest ---------------------------------------------------------
    auto* corpus_cmd = app.add_subcommand("corpus", "corpus operations");
    corpus_cmd->require_subcommand(1);
    std::string corpus_path;
    auto* corpus_ingest = corpus_cmd->add_subcommand("ingest", "validate a study corpus file");
    corpus_ingest->add_option("path", corpus_path, "study JSON file")->required();

    // --- blind -------------------------------------------------------------------
    auto* blind_cmd = app.add_subcommand("blind", "strip condition identity from documents");
    std::string blind_corpus;
    std::string blind_out;
    std::uint64_t blind_seed = 0;
    blind_cmd->add_option("--corpus", blind_corpus, "study JSON file")->required();
    blind_cmd->add_option("--seed", blind_seed, "blinding seed")->required();
    blind_cmd->add_option("--out", blind_out, "output directory")->required();

    // --- judge -----------------------------------------------------------------
    auto* judge_cmd = app.add_subcommand("judge", "judge operations");
    judge_cmd->require_subcommand(1);

    auto* judge_run = judge_cmd->add_subcommand("run", "blind, dispatch and collect ratings");
    std::string jr_corpus, jr_codebook, jr_config, jr_out;
    std::uint64_t jr_seed = 0;
    int jr_parallelism = -1;
    int jr_retries = -1;
    judge_run->add_option("--corpus", jr_corpus)->required();
    judge_run->add_option("--codebook", jr_codebook)->required();
    judge_run->add_option("--config", jr_config, "judge config JSON")->required();
    judge_run->add_option("--seed", jr_seed)->required();
    judge_run->add_option("--out", jr_out)->required();
    judge_run->add_option("--parallelism", jr_parallelism, "override config parallelism");
    judge_run->add_option("--retries", jr_retries, "override config retry limit");

    auto* judge_qualify = judge_cmd->add_subcommand("qualify", "score coders against a gold set");
    std::string jq_codebook, jq_config, jq_gold, jq_coder;
    double jq_threshold = 0.40;
    judge_qualify->add_option("--codebook", jq_codebook)->required();
    judge_qualify->add_option("--config", jq_config)->required();
    judge_qualify->add_option("--gold", jq_gold, "gold set JSON")->required();
    judge_qualify->add_option("--threshold", jq_threshold, "mean-kappa pass threshold");
    judge_qualify->add_option("--coder", jq_coder, "qualify only this coder id");

    // --- stats / report -----------------------------------------------------------
    StatsArgs stats_args;
    auto* stats_cmd = app.add_subcommand("stats", "consensus, agreement and paired diffs");
    stats_cmd->add_option("--ratings", stats_args.ratings_path)->required();
    stats_cmd->add_option("--map", stats_args.map_path)->required();
    stats_cmd->add_option("--codebook", stats_args.codebook_path)->required();
    stats_cmd->add_option("--corpus", stats_args.corpus_path)->required();
    stats_cmd->add_option("--out", stats_args.out)->required();
    stats_cmd->add_option("--coder-set", stats_args.coder_sets,
                          "coder set, e.g. 3C=c1,c2,c3 (repeatable)");

    StatsArgs report_args;
    std::string report_format = "grid";
    auto* report_cmd = app.add_subcommand("report", "analysis-level tables from ratings");
    report_cmd->add_option("--ratings", report_args.ratings_path)->required();
    report_cmd->add_option("--map", report_args.map_path)->required();
    report_cmd->add_option("--codebook", report_args.codebook_path)->required();
    report_cmd->add_option("--corpus", report_args.corpus_path)->required();
    report_cmd->add_option("--out", report_args.out)->required();
    report_cmd->add_option("--coder-set", report_args.coder_sets);
    report_cmd->add_option("--format", report_format, "grid|structured|markdown");

    // --- reproduce ------------------------------------------------------------------
    auto* reproduce_cmd = app.add_subcommand(
        "reproduce", "rebuild every bundled study table and verify the published statistics");
    std::string rep_out;
    std::string rep_fixtures;
    reproduce_cmd->add_option("--out", rep_out)->required();
    reproduce_cmd->add_option("--fixtures", rep_fixtures,
                              "load fixture tables from this directory instead of the bundled copies");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (cb_validate->parsed()) {
            const Codebook cb = load_codebook(cb_path);
            std::cout << "codebook '" << cb.id << "' v" << cb.version << ": "
                      << cb.indicators.size() << " indicators";
            for (const auto& group : cb.total_groups) {
                const auto range = cb.group_range(group.id);
                std::cout << ", group '" << group.id << "' range " << range.first << "-"
                          << range.second;
            }
            std::cout << "\n";
            return 0;
        }

        if (corpus_ingest->parsed()) {
            const Study study = ingest_corpus(corpus_path);
            std::size_t transfer = 0;
            for (const auto& c : study.conditions) {
                transfer += c.label == Label::Transfer ? 1 : 0;
            }
            std::cout << "study '" << study.id << "': " << study.conditions.size()
                      << " conditions (" << transfer << " transfer, "
                      << (study.conditions.size() - transfer) << " non-transfer), "
                      << study.documents.size() << " documents, "
                      << corresponding_pairs(study).size() << " corresponding pairs";
            const auto refs = reference_conditions(study);
            if (!refs.empty()) {
                std::cout << ", reference-only:";
                for (const auto& r : refs) std::cout << " " << r;
            }
            std::cout << "\n";
            return 0;
        }

        if (blind_cmd->parsed()) {
            const Study study = ingest_corpus(blind_corpus);
            const BlindingResult blinding = blind(study.documents, blind_seed);
            ensure_out_dir(blind_out);
            write_text_file(blind_out + "/blinded_items.json",
                            serialize_blinded_items(blinding.items));
            write_text_file(blind_out + "/blinding_map.json",
                            serialize_blinding_map(blinding.map));
            std::cout << "blinded " << blinding.items.size() << " documents (seed "
                      << blind_seed << ") into " << blind_out << "\n";
            return 0;
        }

        if (judge_run->parsed()) {
            const Study study = ingest_corpus(jr_corpus);
            const Codebook cb = load_codebook(jr_codebook);
            JudgeRunConfig config = load_judge_config(jr_config);
            if (jr_parallelism > 0) config.parallelism = jr_parallelism;
            if (jr_retries >= 0) config.retries = jr_retries;

            RunManifest manifest;
            manifest.started_at = iso_utc_now();
            manifest.seed = jr_seed;
            manifest.codebook_id = cb.id;
            manifest.codebook_version = cb.version;
            manifest.retries = config.retries;
            manifest.parallelism = config.parallelism;
            manifest.mode =
                config.mode == RatingMode::PerDocument ? "per_document" : "per_indicator";
            std::string digest_input = std::to_string(jr_seed);
            for (const auto& [label, path] :
                 {std::pair<std::string, std::string>{"corpus", jr_corpus},
                  {"codebook", jr_codebook},
                  {"judge_config", jr_config}}) {
                const std::string digest = digest_hex(read_text_file(path));
                manifest.input_digests.push_back({label, digest});
                digest_input += ":" + digest;
            }
            manifest.run_id = digest_hex(digest_input);
            for (const auto& profile : config.profiles) {
                RunManifest::CoderInfo info;
                info.coder_id = profile.coder_id;
                if (profile.kind == BackendKind::External) {
                    info.backend_kind = "external";
                    info.endpoint = profile.external.endpoint;
                    info.model = profile.external.model;
                    info.auth_env = profile.external.auth_env;
                    info.temperature = profile.external.temperature;
                } else {
                    info.backend_kind = "scripted";
                    info.fixture = profile.scripted.fixture_path;
                }
                manifest.coders.push_back(std::move(info));
            }

            const JudgePipelineResult result = run_judge_pipeline(study, cb, config, jr_seed);
            manifest.finished_at = iso_utc_now();
            manifest.total_retries = result.total_retries;
            manifest.failed_cells = result.failures.size();

            ensure_out_dir(jr_out);
            write_text_file(jr_out + "/ratings.json",
                            serialize_records(result.records, cb));
            write_text_file(jr_out + "/blinding_map.json",
                            serialize_blinding_map(result.blinding.map));
            write_text_file(jr_out + "/manifest.json", serialize_manifest(manifest));

            if (!result.failures.empty()) {
                write_text_file(jr_out + "/resume.json",
                                serialize_failures(result.failures));
                std::cerr << "error[backend]: " << result.failures.size()
                          << " item(s) failed; resumable state written to " << jr_out
                          << "/resume.json\n";
                for (const auto& f : result.failures) {
                    std::cerr << "  (" << f.coder_id << ", " << f.blinded_id
                              << "): " << f.message << "\n";
                }
                return 2;
            }
            std::cout << "collected " << result.records.size() << " ratings from "
                      << config.profiles.size() << " coder(s) into " << jr_out << "\n";
            return 0;
        }

        if (judge_qualify->parsed()) {
            const Codebook cb = load_codebook(jq_codebook);
            const JudgeRunConfig config = load_judge_config(jq_config);
            const GoldSet gold = load_gold_set(jq_gold);
            SessionOptions options;
            options.retry_limit = config.retries;
            options.mode = config.mode;

            bool all_pass = true;
            bool any = false;
            for (const auto& profile : config.profiles) {
                if (!jq_coder.empty() && profile.coder_id != jq_coder) continue;
                any = true;
                auto backend = make_backend(profile);
                const QualificationResult result =
                    qualify_coder(profile, *backend, gold, cb, jq_threshold, options);
                std::cout << result.coder_id << ": mean kappa "
                          << format_fixed(result.mean_kappa, 3) << " (threshold "
                          << format_fixed(result.threshold, 2) << ") -> "
                          << (result.pass ? "PASS" : "FAIL") << "\n";
                for (const auto& entry : result.per_indicator) {
                    std::cout << "  " << entry.indicator_id << ": "
                              << (entry.kappa.degenerate
                                      ? std::string("n/a (degenerate)")
                                      : format_fixed(entry.kappa.kappa, 3))
                              << "\n";
                }
                all_pass = all_pass && result.pass;
            }
            if (!any) fail(ErrorCode::Validation, "no coder matched '" + jq_coder + "'");
            return all_pass ? 0 : 1;
        }

        if (stats_cmd->parsed()) {
            return run_stats(stats_args, false, TableFormat::Grid);
        }
        if (report_cmd->parsed()) {
            return run_stats(report_args, true, parse_table_format(report_format));
        }
        if (reproduce_cmd->parsed()) {
            return run_reproduce_cmd(rep_out, rep_fixtures);
        }
    } catch (const Error& e) {
        std::cerr << "error[" << error_code_name(e.code()) << "]: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
