#include "ratekit/pipeline.hpp"

#include "ratekit/error.hpp"
#include "ratekit/util.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <set>
#include <sstream>
#include <thread>

using nlohmann::ordered_json;

namespace ratekit {

// ---------------------------------------------------------------------------
// Judge configuration
// ---------------------------------------------------------------------------

namespace {

std::string resolve_path(const std::string& base_dir, const std::string& path) {
    if (path.empty() || path.front() == '/') return path;
    if (base_dir.empty()) return path;
    return base_dir + "/" + path;
}

std::string dirname_of(const std::string& path) {
    const auto pos = path.find_last_of('/');
    return pos == std::string::npos ? std::string{} : path.substr(0, pos);
}

} // namespace

JudgeRunConfig parse_judge_config(const std::string& json_text, const std::string& origin,
                                  const std::string& base_dir) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const ordered_json::parse_error& e) {
        fail(ErrorCode::Parse, origin + ": " + e.what());
    }

    JudgeRunConfig config;
    try {
        config.retries = j.value("retries", 2);
        config.parallelism = j.value("parallelism", 1);
        const std::string mode = j.value("mode", std::string("per_document"));
        if (mode == "per_document") {
            config.mode = RatingMode::PerDocument;
        } else if (mode == "per_indicator") {
            config.mode = RatingMode::PerIndicator;
        } else {
            fail(ErrorCode::Schema, origin + ": unknown rating mode '" + mode + "'");
        }

        std::set<std::string> seen;
        for (const auto& jc : j.at("coders")) {
            JudgeProfile profile;
            profile.coder_id = jc.at("coder_id").get<std::string>();
            if (!seen.insert(profile.coder_id).second) {
                fail(ErrorCode::Schema,
                     origin + ": duplicate coder_id '" + profile.coder_id + "'");
            }
            const auto& jb = jc.at("backend");
            const std::string kind = jb.at("kind").get<std::string>();
            if (kind == "scripted") {
                profile.kind = BackendKind::Scripted;
                profile.scripted.fixture_path =
                    resolve_path(base_dir, jb.at("fixture").get<std::string>());
            } else if (kind == "external") {
                profile.kind = BackendKind::External;
                profile.external.endpoint = jb.at("endpoint").get<std::string>();
                profile.external.model = jb.at("model").get<std::string>();
                profile.external.auth_env = jb.value("auth_env", std::string{});
                profile.external.temperature = jb.value("temperature", 0.0);
                profile.external.timeout_seconds = jb.value("timeout_seconds", 30);
            } else {
                fail(ErrorCode::Schema, origin + ": unknown backend kind '" + kind + "'");
            }
            if (jc.contains("prompt_template")) {
                profile.prompt_template = read_text_file(
                    resolve_path(base_dir, jc.at("prompt_template").get<std::string>()));
            }
            config.profiles.push_back(std::move(profile));
        }
    } catch (const ordered_json::exception& e) {
        fail(ErrorCode::Schema, origin + ": " + e.what());
    }
    if (config.profiles.empty()) {
        fail(ErrorCode::Schema, origin + ": no coders configured");
    }
    if (config.retries < 0 || config.parallelism < 1) {
        fail(ErrorCode::Schema, origin + ": retries must be >= 0 and parallelism >= 1");
    }
    return config;
}

JudgeRunConfig load_judge_config(const std::string& path) {
    return parse_judge_config(read_text_file(path), path, dirname_of(path));
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

std::string iso_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string digest_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::string serialize_manifest(const RunManifest& manifest) {
    ordered_json j;
    j["run_id"] = manifest.run_id;
    j["started_at"] = manifest.started_at;
    j["finished_at"] = manifest.finished_at;
    j["seed"] = manifest.seed;
    j["codebook"] = {{"id", manifest.codebook_id}, {"version", manifest.codebook_version}};
    j["coders"] = ordered_json::array();
    for (const auto& c : manifest.coders) {
        ordered_json jc;
        jc["coder_id"] = c.coder_id;
        jc["backend_kind"] = c.backend_kind;
        if (c.backend_kind == "external") {
            jc["endpoint"] = c.endpoint;
            jc["model"] = c.model;
            jc["auth_env"] = c.auth_env; // the variable name, never its value
            jc["temperature"] = c.temperature;
        } else {
            jc["fixture"] = c.fixture;
        }
        j["coders"].push_back(std::move(jc));
    }
    j["retries"] = manifest.retries;
    j["parallelism"] = manifest.parallelism;
    j["mode"] = manifest.mode;
    j["input_digests"] = ordered_json::array();
    for (const auto& d : manifest.input_digests) {
        j["input_digests"].push_back({{"label", d.label}, {"fnv1a64", d.fnv1a64_hex}});
    }
    j["total_retries"] = manifest.total_retries;
    j["failed_cells"] = manifest.failed_cells;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Judge pipeline
// ---------------------------------------------------------------------------

JudgePipelineResult run_judge_pipeline(const Study& study, const Codebook& cb,
                                       const JudgeRunConfig& config, std::uint64_t seed) {
    JudgePipelineResult result;
    result.blinding = blind(study.documents, seed);
    const auto& items = result.blinding.items;

    std::vector<std::unique_ptr<JudgeBackend>> backends;
    backends.reserve(config.profiles.size());
    for (const auto& profile : config.profiles) {
        backends.push_back(make_backend(profile));
    }

    // Coder-major task list; within a coder, the coder's own seed-derived
    // presentation order.
    struct Task {
        std::size_t profile;
        std::size_t item;
    };
    std::vector<Task> tasks;
    for (std::size_t p = 0; p < config.profiles.size(); ++p) {
        const auto order = seeded_permutation(
            items.size(), seed ^ fnv1a64(config.profiles[p].coder_id));
        for (const std::size_t item : order) tasks.push_back({p, item});
    }

    SessionOptions options;
    options.retry_limit = config.retries;
    options.mode = config.mode;

    std::vector<ItemOutcome> outcomes(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks.size()) break;
            const Task& task = tasks[t];
            try {
                outcomes[t] = rate_item(config.profiles[task.profile],
                                        *backends[task.profile], items[task.item], cb,
                                        options);
            } catch (const std::exception& e) {
                outcomes[t].records.clear();
                outcomes[t].error = e.what();
            }
        }
    };

    const std::size_t worker_count = std::min<std::size_t>(
        std::max(1, config.parallelism), std::max<std::size_t>(tasks.size(), 1));
    if (worker_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t w = 0; w < worker_count; ++w) threads.emplace_back(worker);
        for (auto& thread : threads) thread.join();
    }

    // Aggregation in task order keeps outputs independent of completion order.
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        const Task& task = tasks[t];
        if (outcomes[t].error) {
            result.failures.push_back({config.profiles[task.profile].coder_id,
                                       items[task.item].blinded_id, *outcomes[t].error});
        } else {
            for (auto& rec : outcomes[t].records) result.records.push_back(std::move(rec));
        }
        result.total_retries += outcomes[t].retries_used;
    }
    return result;
}

std::string serialize_failures(const std::vector<ItemFailure>& failures) {
    ordered_json j;
    j["missing"] = ordered_json::array();
    for (const auto& f : failures) {
        j["missing"].push_back({{"coder_id", f.coder_id},
                                {"blinded_id", f.blinded_id},
                                {"reason", f.message}});
    }
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Stats bundle
// ---------------------------------------------------------------------------

StatsBundle build_stats_bundle(const RatingMatrix& matrix, const Study& study,
                               const Codebook& cb,
                               const std::vector<CoderSetSpec>& sets) {
    StatsBundle bundle;
    for (const auto& spec : sets) {
        StatsBundle::PerSet per_set;
        per_set.spec = spec;
        per_set.consensus = build_consensus(matrix, spec.coder_ids, spec.set_id, cb);
        try {
            per_set.diffs = paired_differences(per_set.consensus, study);
        } catch (const Error& e) {
            bundle.warnings.push_back("no paired diffs for coder set '" + spec.set_id +
                                      "': " + e.what());
        }
        bundle.sets.push_back(std::move(per_set));
    }
    if (matrix.coders().size() >= 2) {
        bundle.kappa = build_kappa_report(matrix, cb);
    } else {
        bundle.warnings.push_back(
            "single coder: consensus equals that coder's values, agreement report empty");
    }
    return bundle;
}

// ---------------------------------------------------------------------------
// Reproduction
// ---------------------------------------------------------------------------

bool ReproduceResult::ok() const { return failed_count() == 0; }

std::size_t ReproduceResult::failed_count() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.status == LedgerEntry::Status::Fail ? 1 : 0;
    return n;
}

std::vector<std::string> ReproduceResult::failed_names() const {
    std::vector<std::string> names;
    for (const auto& e : entries) {
        if (e.status == LedgerEntry::Status::Fail) names.push_back(e.name);
    }
    return names;
}

std::string ReproduceResult::ledger_text() const {
    std::ostringstream out;
    out << "reproduction ledger\n";
    out << "===================\n";
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t skipped = 0;
    for (const auto& e : entries) {
        const char* tag = "PASS";
        if (e.status == LedgerEntry::Status::Fail) {
            tag = "FAIL";
            ++failed;
        } else if (e.status == LedgerEntry::Status::Skip) {
            tag = "SKIP";
            ++skipped;
        } else {
            ++passed;
        }
        out << "[" << tag << "] " << e.name << ": " << e.detail << "\n";
    }
    out << "summary: " << entries.size() << " checks, " << passed << " passed, "
        << failed << " failed, " << skipped << " skipped\n";
    return out.str();
}

namespace {

class LedgerBuilder {
public:
    explicit LedgerBuilder(std::vector<LedgerEntry>& entries) : entries_(entries) {}

    void close(const std::string& name, double recomputed, double expected,
               double tolerance) {
        const bool ok = std::fabs(recomputed - expected) <= tolerance;
        add(name, ok,
            "recomputed=" + format_fixed(recomputed, 4) +
                " published=" + format_fixed(expected, 4) +
                " tol=" + format_fixed(tolerance, 4));
    }

    void equal_text(const std::string& name, const std::string& got,
                    const std::string& expected) {
        add(name, got == expected, "got='" + got + "' expected='" + expected + "'");
    }

    void is_true(const std::string& name, bool ok, const std::string& detail) {
        add(name, ok, detail);
    }

    void skip(const std::string& name, const std::string& detail) {
        entries_.push_back({name, LedgerEntry::Status::Skip, detail});
    }

private:
    void add(const std::string& name, bool ok, const std::string& detail) {
        entries_.push_back(
            {name, ok ? LedgerEntry::Status::Pass : LedgerEntry::Status::Fail, detail});
    }

    std::vector<LedgerEntry>& entries_;
};

// Pinned acceptance tolerances.
constexpr double kTolEffect = 0.005;
constexpr double kTolRatio = 0.005;
constexpr double kTolMeanRatio = 0.01;
constexpr double kTolCorrelation = 0.01;
constexpr double kTolMean = 0.05;
constexpr double kCorrOthersLow = 0.08;
constexpr double kCorrOthersHigh = 0.37;

void check_row_totals(LedgerBuilder& ledger, const std::string& name,
                      const ScoreFixture& fixture) {
    std::string mismatch;
    for (std::size_t i = 0; i < fixture.scores.rows.size(); ++i) {
        int sum = 0;
        for (int v : fixture.scores.rows[i].values) sum += v;
        if (sum != fixture.published_totals[i]) {
            mismatch = fixture.scores.rows[i].condition_id + " sums to " +
                       std::to_string(sum) + ", published " +
                       std::to_string(fixture.published_totals[i]);
            break;
        }
    }
    ledger.is_true(name, mismatch.empty(),
                   mismatch.empty()
                       ? std::to_string(fixture.scores.rows.size()) +
                             " row totals consistent with published totals"
                       : mismatch);
}

} // namespace

ReproduceResult run_reproduce(const PaperFixtures& f) {
    ReproduceResult rr;
    LedgerBuilder ledger(rr.entries);

    // Raw-row consistency: a recomputed total that disagrees with the
    // published one means the fixture was edited or transcribed wrong.
    check_row_totals(ledger, "masa_row_totals", f.masa);
    check_row_totals(ledger, "tutoring_row_totals", f.tutoring);
    check_row_totals(ledger, "dialogue_row_totals", f.dialogue);

    // --- narrative-scale table -------------------------------------------
    const MasaReport masa = build_masa_table(f.masa.scores, f.tutoring_study, f.masa_cb);
    {
        const auto& total = masa.stats.row("Total");
        const auto& sr = masa.stats.row("SR");
        const auto& dec = masa.stats.row("D");
        ledger.close("masa_transfer_total_mean", total.transfer_mean,
                     f.masa_published.transfer_total_mean, kTolMean);
        ledger.close("masa_nt_paired_total_mean", total.non_transfer_mean_paired,
                     f.masa_published.non_transfer_total_mean_paired, kTolMean);
        ledger.close("masa_nt_all_total_mean", total.non_transfer_mean_all,
                     f.masa_published.non_transfer_total_mean_all, kTolMean);
        ledger.close("masa_sr_transfer_mean", sr.transfer_mean,
                     f.masa_published.sr_transfer_mean, kTolMean);
        ledger.close("masa_sr_nt_mean", sr.non_transfer_mean_all,
                     f.masa_published.sr_non_transfer_mean_all, kTolMean);
        ledger.close("masa_decentration_diff",
                     std::fabs(dec.transfer_mean - dec.non_transfer_mean_all),
                     f.masa_published.decentration_mean_diff, kTolEffect);
        ledger.close("masa_d", masa.total_effect.d, f.masa_published.d, kTolEffect);
        ledger.equal_text("masa_d_band", effect_band_label(masa.total_effect.band),
                          f.masa_published.interpretation);
    }

    // --- profile tables ----------------------------------------------------
    const ProfileTables p3 = build_profile_tables(f.profile_3c, f.profile_study);
    const ProfileTables p4 = build_profile_tables(f.profile_4c, f.profile_study);
    {
        std::string mismatch;
        std::size_t checked = 0;
        for (const auto& row : f.profile_diffs_published.rows) {
            for (std::size_t i = 0; i < f.profile_diffs_published.indicator_ids.size();
                 ++i) {
                const std::string& indicator = f.profile_diffs_published.indicator_ids[i];
                const int rebuilt = p3.diffs.diff_of(row.family, indicator);
                ++checked;
                if (rebuilt != row.diffs[i]) {
                    mismatch = "(" + row.family + ", " + indicator + "): rebuilt " +
                               format_signed(rebuilt) + ", published " +
                               format_signed(row.diffs[i]);
                    break;
                }
            }
            if (!mismatch.empty()) break;
        }
        ledger.is_true("profile_diffs_match_published", mismatch.empty(),
                       mismatch.empty() ? std::to_string(checked) +
                                              " cells identical to the published table"
                                        : mismatch);
    }

    const SensitivityReport sensitivity = sensitivity_compare(
        f.profile_3c, f.profile_4c, f.profile_study, bundled_profile_findings());
    {
        const bool single =
            sensitivity.differing_cells.size() == 1 &&
            sensitivity.differing_cells[0].document_id == "doc-gpt54-nt" &&
            sensitivity.differing_cells[0].indicator_id == "PR_dir" &&
            sensitivity.differing_cells[0].value_a == 1 &&
            sensitivity.differing_cells[0].value_b == 0;
        std::string detail = std::to_string(sensitivity.differing_cells.size()) +
                             " differing cell(s)";
        for (const auto& cell : sensitivity.differing_cells) {
            detail += "; (" + cell.document_id + ", " + cell.indicator_id + "): " +
                      format_signed(cell.value_a) + " vs " + format_signed(cell.value_b);
        }
        ledger.is_true("sensitivity_single_cell", single, detail);

        for (const auto& finding : sensitivity.findings) {
            ledger.is_true(
                finding.spec.indicator_id == "SU_dir" ? "direction_su_dir"
                                                      : "direction_la_dir",
                finding.holds_a && finding.holds_b,
                finding.spec.description + " under " + sensitivity.set_a + " and " +
                    sensitivity.set_b);
        }
    }

    // --- tutoring tables ----------------------------------------------------
    const TutoringReport tut = build_tutoring_tables(
        f.tutoring.scores, f.dialogue.scores, f.tutoring_study, f.tutoring_cb,
        f.dialogue_cb);
    {
        ledger.close("tutoring_d", tut.tutoring_effect.d, f.tutoring_published.d,
                     kTolEffect);
        ledger.equal_text("tutoring_d_band", effect_band_label(tut.tutoring_effect.band),
                          f.tutoring_published.interpretation);
        ledger.close("dialogue_d", tut.dialogue_effect.d, f.dialogue_published.d,
                     kTolEffect);
        ledger.equal_text("dialogue_d_band", effect_band_label(tut.dialogue_effect.band),
                          f.dialogue_published.interpretation);

        const char* ratio_names[3] = {"ratio_cmp_t", "ratio_usm_t", "ratio_csf_t"};
        double ratio_sum = 0.0;
        for (std::size_t i = 0; i < f.tutoring.scores.indicator_ids.size(); ++i) {
            const std::string& indicator = f.tutoring.scores.indicator_ids[i];
            const auto& row = tut.tutoring_stats.row(indicator);
            const double ratio = tut.tutoring_stats.require_ratio(indicator);
            ledger.close(ratio_names[i], ratio, f.tutoring_published.ratios[i], kTolRatio);
            ratio_sum += ratio;
            ledger.close("tutoring_transfer_mean_" + f.tutoring.scores.indicator_ids[i],
                         row.transfer_mean, f.tutoring_published.transfer_means[i],
                         kTolEffect);
            ledger.close("tutoring_nt_paired_mean_" + f.tutoring.scores.indicator_ids[i],
                         row.non_transfer_mean_paired,
                         f.tutoring_published.non_transfer_means_paired[i], kTolEffect);
        }
        ledger.close("ratio_mean", ratio_sum / 3.0, f.tutoring_published.mean_ratio,
                     kTolMeanRatio);

        const auto& total = tut.tutoring_stats.row("Total");
        ledger.close("tutoring_transfer_total_mean", total.transfer_mean,
                     f.tutoring_published.transfer_total_mean, kTolEffect);
        ledger.close("tutoring_nt_paired_total_mean", total.non_transfer_mean_paired,
                     f.tutoring_published.non_transfer_total_mean_paired, kTolEffect);
        ledger.close("tutoring_nt_all_total_mean", total.non_transfer_mean_all,
                     f.tutoring_published.non_transfer_total_mean_all, kTolMean);

        const auto sums = tut.tutoring_diffs.column_sums();
        const int total_sum = sums.at(tut.tutoring_diffs.indicator_ids.size() - 1);
        ledger.is_true("tutoring_diff_sum",
                       total_sum == f.tutoring_published.paired_total_diff_sum,
                       "sum of paired total diffs = " + format_signed(total_sum) +
                           ", published " +
                           format_signed(f.tutoring_published.paired_total_diff_sum));
        std::string diff_list;
        for (const auto& row : tut.tutoring_diffs.rows) {
            if (!diff_list.empty()) diff_list += ",";
            diff_list += format_signed(row.diffs.back());
        }
        ledger.equal_text("tutoring_diff_values", diff_list, "+3,+1,+9,+5,+3");

        const auto& dtotal = tut.dialogue_stats.row("Total");
        ledger.close("dialogue_transfer_total_mean", dtotal.transfer_mean,
                     f.dialogue_published.transfer_total_mean, kTolEffect);
        ledger.close("dialogue_nt_paired_total_mean", dtotal.non_transfer_mean_paired,
                     f.dialogue_published.non_transfer_total_mean_paired, kTolEffect);
        const auto& mc = tut.dialogue_stats.row("MC");
        ledger.close("dialogue_mc_transfer_mean", mc.transfer_mean,
                     f.dialogue_published.mc_transfer_mean, kTolEffect);
        ledger.close("dialogue_mc_nt_paired_mean", mc.non_transfer_mean_paired,
                     f.dialogue_published.mc_non_transfer_mean_paired, kTolEffect);
    }

    // --- correlations -------------------------------------------------------
    {
        auto r2_of = [&](const std::string& indicator) {
            for (const auto& row : tut.correlations) {
                if (row.indicator_id == indicator) return row.corr.r_squared;
            }
            fail(ErrorCode::Validation, "no correlation row for '" + indicator + "'");
        };
        ledger.close("corr_cd", r2_of("CD"), f.correlations.cd, kTolCorrelation);
        ledger.close("corr_q", r2_of("Q"), f.correlations.q, kTolCorrelation);
        ledger.close("corr_mc", r2_of("MC"), f.correlations.mc, kTolCorrelation);
        std::string out_of_range;
        for (const auto& row : tut.correlations) {
            if (row.indicator_id == "CD" || row.indicator_id == "Q" ||
                row.indicator_id == "MC") {
                continue;
            }
            if (row.corr.r_squared < kCorrOthersLow ||
                row.corr.r_squared > kCorrOthersHigh) {
                out_of_range += row.indicator_id + "=" +
                                format_fixed(row.corr.r_squared, 3) + " ";
            }
        }
        ledger.is_true("corr_others_range", out_of_range.empty(),
                       out_of_range.empty()
                           ? "remaining four in [" + format_fixed(kCorrOthersLow, 2) +
                                 ", " + format_fixed(kCorrOthersHigh, 2) + "]"
                           : "outside range: " + out_of_range);
    }

    // --- effect table (with the display-only self-narrative row) ------------
    const auto effect_rows = build_effect_table(f.effect_rows, masa, tut);
    for (const auto& row : effect_rows) {
        if (row.recomputed) {
            ledger.close("effect_d_" + row.category, row.recomputed->d, row.published_d,
                         kTolEffect);
            ledger.equal_text("effect_band_" + row.category,
                              effect_band_label(row.recomputed->band),
                              row.published_interpretation);
        } else {
            ledger.skip("self_narrative_d",
                        "raw data unavailable; published d=" +
                            format_fixed(row.published_d, 2) + " (means " +
                            format_fixed(row.published_transfer_mean, 2) + "/" +
                            format_fixed(row.published_non_transfer_mean, 2) +
                            ") shown for display only, excluded from pass/fail");
        }
    }

    // --- published agreement values through the banding path ----------------
    for (const auto& pair : f.kappa_pairs) {
        ledger.equal_text("kappa_band_" + pair.coder_a + "_x_" + pair.coder_b,
                          agreement_band_label(landis_koch(pair.kappa)),
                          pair.interpretation);
    }
    for (const auto& group : f.kappa_group_means) {
        ledger.equal_text("kappa_band_mean_" + group.group,
                          agreement_band_label(landis_koch(group.kappa)),
                          group.interpretation);
    }
    for (const auto& indicator : f.kappa_indicators) {
        ledger.equal_text("kappa_band_" + indicator.indicator,
                          agreement_band_label(landis_koch(indicator.kappa)),
                          indicator.interpretation);
    }

    // --- scale ranges --------------------------------------------------------
    {
        auto range_text = [](std::pair<int, int> range) {
            return std::to_string(range.first) + "-" + std::to_string(range.second);
        };
        ledger.equal_text("scale_range_masa", range_text(f.masa_cb.group_range("total")),
                          "0-28");
        ledger.equal_text("scale_range_tutoring",
                          range_text(f.tutoring_cb.group_range("total")), "0-15");
        ledger.equal_text("scale_range_dialogue",
                          range_text(f.dialogue_cb.group_range("total")), "0-35");
    }

    // --- heatmap -------------------------------------------------------------
    PairedDiffTable tutoring_hm = tut.tutoring_diffs;
    tutoring_hm.rename_column("Total", "TCI-total");
    PairedDiffTable dialogue_hm = paired_differences(tut.dialogue, f.tutoring_study);
    dialogue_hm.rename_column("Total", "DP-total");
    const HeatmapMatrix heatmap = build_heatmap({tutoring_hm, dialogue_hm, p3.diffs});

    // --- tables ----------------------------------------------------------------
    rr.tables.push_back(render_masa_table(masa, f.tutoring_study));
    rr.tables.push_back(render_group_stats(masa.stats, "masa_group_stats"));
    rr.tables.push_back(render_consensus_table(f.profile_3c, f.profile_study,
                                               f.profile_cb, "profile_consensus_3c"));
    rr.tables.push_back(render_consensus_table(f.profile_4c, f.profile_study,
                                               f.profile_cb, "profile_consensus_4c"));
    rr.tables.push_back(render_diff_table(p3.diffs, "profile_diffs_3c", false));
    rr.tables.push_back(render_diff_table(p4.diffs, "profile_diffs_4c", false));
    rr.tables.push_back(render_differing_cells(sensitivity));
    rr.tables.push_back(render_direction_table(sensitivity, {"SU_dir", "LA_dir"}));
    rr.tables.push_back(render_score_table(tut.tutoring, f.tutoring_study, "tutoring_table"));
    rr.tables.push_back(render_group_stats(tut.tutoring_stats, "tutoring_group_stats"));
    rr.tables.push_back(render_score_table(tut.dialogue, f.tutoring_study, "dialogue_table"));
    rr.tables.push_back(render_group_stats(tut.dialogue_stats, "dialogue_group_stats"));
    rr.tables.push_back(render_diff_table(tut.tutoring_diffs, "tutoring_diffs", true));
    rr.tables.push_back(render_effect_table(effect_rows));
    rr.tables.push_back(render_correlation_table(tut.correlations));
    rr.tables.push_back(render_heatmap(heatmap));
    rr.tables.push_back(render_fixture_kappa_pairs(f.kappa_pairs, f.kappa_group_means));
    rr.tables.push_back(render_fixture_kappa_indicators(f.kappa_indicators));

    return rr;
}

} // namespace ratekit
