// Acceptance suite: one test case per acceptance criterion, each printing a
// pass/fail line. Tolerances are pinned in code next to each assertion.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include "ratekit/analysis.hpp"
#include "ratekit/fixtures.hpp"
#include "ratekit/judging.hpp"
#include "ratekit/pipeline.hpp"
#include "ratekit/stats.hpp"

#include <cmath>
#include <cstdio>

using namespace ratekit;
using testsup::contains;
using testsup::icontains;
using testsup::make_temp_dir;
using testsup::oracle_kappa_ternary;
using testsup::oracle_median;
using testsup::run_cli;
using testsup::slurp;
using testsup::source_path;

namespace {

const PaperFixtures& fixtures() {
    static const PaperFixtures f = load_paper_fixtures();
    return f;
}

const TutoringReport& tutoring_report() {
    static const TutoringReport report = build_tutoring_tables(
        fixtures().tutoring.scores, fixtures().dialogue.scores,
        fixtures().tutoring_study, fixtures().tutoring_cb, fixtures().dialogue_cb);
    return report;
}

const MasaReport& masa_report() {
    static const MasaReport report = build_masa_table(
        fixtures().masa.scores, fixtures().tutoring_study, fixtures().masa_cb);
    return report;
}

struct CriterionLine {
    explicit CriterionLine(std::string text) : text_(std::move(text)) {}
    ~CriterionLine() {
        // Reached only when the case did not abort on a REQUIRE failure.
        std::printf("[%s] %s\n", failed_ ? "FAIL" : "PASS", text_.c_str());
    }
    void mark_failed() { failed_ = true; }

private:
    std::string text_;
    bool failed_ = false;
};

#define CRITERION(n, text)                                           \
    CriterionLine criterion_line("criterion " #n ": " text);         \
    auto criterion_guard = [&](bool ok) {                            \
        if (!ok) criterion_line.mark_failed();                       \
        return ok;                                                   \
    }

#define C_CHECK(expr) CHECK(criterion_guard(static_cast<bool>(expr)))

} // namespace

TEST_CASE("criterion 1: tutoring-context effect size") {
    CRITERION(1, "tutoring-context d = 1.27 +/- 0.005, band very large");
    const auto& effect = tutoring_report().tutoring_effect;
    C_CHECK(std::fabs(effect.d - 1.27) <= 0.005);
    C_CHECK(effect.band == EffectBand::VeryLarge);
}

TEST_CASE("criterion 2: narrative-scale effect size and group means") {
    CRITERION(2, "masa d = 0.40 +/- 0.005 (small); means 20.0 / 18.4 / 18.5; SR 6.6 vs 5.5");
    const auto& report = masa_report();
    C_CHECK(std::fabs(report.total_effect.d - 0.40) <= 0.005);
    C_CHECK(report.total_effect.band == EffectBand::Small);
    const auto& total = report.stats.row("Total");
    C_CHECK(std::fabs(total.transfer_mean - 20.0) <= 0.05);
    C_CHECK(std::fabs(total.non_transfer_mean_paired - 18.4) <= 0.05);
    C_CHECK(std::fabs(total.non_transfer_mean_all - 18.5) <= 0.05);
    const auto& sr = report.stats.row("SR");
    C_CHECK(std::fabs(sr.transfer_mean - 6.6) <= 0.05);
    C_CHECK(std::fabs(sr.non_transfer_mean_all - 5.5) <= 0.05);
}

TEST_CASE("criterion 3: dialogue-promotion effect size and group means") {
    CRITERION(3, "dialogue d = 0.75 +/- 0.005 (medium); means 28.40 vs 25.20; MC 4.00 vs 4.20");
    const auto& report = tutoring_report();
    C_CHECK(std::fabs(report.dialogue_effect.d - 0.75) <= 0.005);
    C_CHECK(report.dialogue_effect.band == EffectBand::Medium);
    const auto& total = report.dialogue_stats.row("Total");
    C_CHECK(std::fabs(total.transfer_mean - 28.40) <= 0.005);
    C_CHECK(std::fabs(total.non_transfer_mean_paired - 25.20) <= 0.005);
    const auto& mc = report.dialogue_stats.row("MC");
    C_CHECK(std::fabs(mc.transfer_mean - 4.00) <= 0.005);
    C_CHECK(std::fabs(mc.non_transfer_mean_paired - 4.20) <= 0.005);
}

TEST_CASE("criterion 4: per-indicator ratios and their mean") {
    CRITERION(4, "ratios 1.73 / 1.62 / 1.42 (+/- 0.005), mean 1.59 +/- 0.01");
    const auto& stats = tutoring_report().tutoring_stats;
    const double cmp = stats.require_ratio("CMP-T");
    const double usm = stats.require_ratio("USM-T");
    const double csf = stats.require_ratio("CSF-T");
    C_CHECK(std::fabs(cmp - 1.73) <= 0.005);
    C_CHECK(std::fabs(usm - 1.62) <= 0.005);
    C_CHECK(std::fabs(csf - 1.42) <= 0.005);
    C_CHECK(std::fabs((cmp + usm + csf) / 3.0 - 1.59) <= 0.01);
}

TEST_CASE("criterion 5: paired differences") {
    CRITERION(5, "profile diffs match the published table in all 21 cells; tutoring diffs sum to +21");
    const auto& f = fixtures();
    const PairedDiffTable diffs = paired_differences(f.profile_3c, f.profile_study);
    for (const auto& row : f.profile_diffs_published.rows) {
        for (std::size_t i = 0; i < f.profile_diffs_published.indicator_ids.size(); ++i) {
            C_CHECK(diffs.diff_of(row.family, f.profile_diffs_published.indicator_ids[i]) ==
                    row.diffs[i]);
        }
    }
    C_CHECK(diffs.diff_of("Sonnet 4.5", "SU_dir") == 1);
    C_CHECK(diffs.diff_of("GPT-5.4", "SU_dir") == 1);
    C_CHECK(diffs.diff_of("Gemini 3", "SU_dir") == 2);
    C_CHECK(diffs.diff_of("Sonnet 4.5", "TC") == -2);
    C_CHECK(diffs.diff_of("GPT-5.4", "TC") == 2);
    C_CHECK(diffs.diff_of("Gemini 3", "TC") == 0);

    const auto& tut = tutoring_report();
    std::vector<int> totals;
    for (const auto& row : tut.tutoring_diffs.rows) totals.push_back(row.diffs.back());
    C_CHECK((totals == std::vector<int>{3, 1, 9, 5, 3}));
    C_CHECK(tut.tutoring_diffs.column_sums().back() == 21);
}

TEST_CASE("criterion 6: correlations over all 11 conditions") {
    CRITERION(6, "r^2: CD 0.78, Q 0.51, MC 0.28 (+/- 0.01); the other four in [0.08, 0.37]");
    const auto& report = tutoring_report();
    auto r2_of = [&](const std::string& id) {
        for (const auto& row : report.correlations) {
            if (row.indicator_id == id) {
                REQUIRE(row.corr.n == 11);
                return row.corr.r_squared;
            }
        }
        REQUIRE(false);
        return 0.0;
    };
    C_CHECK(std::fabs(r2_of("CD") - 0.78) <= 0.01);
    C_CHECK(std::fabs(r2_of("Q") - 0.51) <= 0.01);
    C_CHECK(std::fabs(r2_of("MC") - 0.28) <= 0.01);
    for (const char* other : {"Resp.", "BC", "IC", "US"}) {
        const double r2 = r2_of(other);
        C_CHECK(r2 >= 0.08);
        C_CHECK(r2 <= 0.37);
    }
}

TEST_CASE("criterion 7: coder-set sensitivity") {
    CRITERION(7, "exactly one differing consensus cell; SU_dir and LA_dir directions hold in both coder sets");
    const auto& f = fixtures();
    const SensitivityReport report = sensitivity_compare(
        f.profile_3c, f.profile_4c, f.profile_study, bundled_profile_findings());
    C_CHECK(report.differing_cells.size() == 1);
    if (report.differing_cells.size() == 1) {
        C_CHECK(report.differing_cells[0].document_id == "doc-gpt54-nt");
        C_CHECK(report.differing_cells[0].indicator_id == "PR_dir");
    }
    REQUIRE(report.findings.size() == 2);
    for (const auto& finding : report.findings) {
        C_CHECK(finding.holds_a);
        C_CHECK(finding.holds_b);
    }
    // SU_dir in all three families, LA_dir in the two declared families.
    C_CHECK(report.findings[0].spec.indicator_id == "SU_dir");
    C_CHECK(report.findings[0].spec.families.size() == 3);
    C_CHECK(report.findings[1].spec.indicator_id == "LA_dir");
    C_CHECK(report.findings[1].spec.families.size() == 2);
}

TEST_CASE("criterion 8: every published interpretation label reproduces") {
    CRITERION(8, "Landis-Koch banding matches every published interpretation");
    const auto& f = fixtures();
    for (const auto& pair : f.kappa_pairs) {
        C_CHECK(agreement_band_label(landis_koch(pair.kappa)) == pair.interpretation);
    }
    for (const auto& group : f.kappa_group_means) {
        C_CHECK(agreement_band_label(landis_koch(group.kappa)) == group.interpretation);
    }
    for (const auto& indicator : f.kappa_indicators) {
        C_CHECK(agreement_band_label(landis_koch(indicator.kappa)) ==
                indicator.interpretation);
    }
    // The same values asserted band by band.
    C_CHECK(landis_koch(0.83) == AgreementBand::AlmostPerfect);
    for (double k : {0.71, 0.70, 0.64, 0.67, 0.68}) {
        C_CHECK(landis_koch(k) == AgreementBand::Substantial);
    }
    for (double k : {0.54, 0.59}) C_CHECK(landis_koch(k) == AgreementBand::Moderate);
    for (double k : {0.24, 0.26, 0.27, 0.28, 0.37}) {
        C_CHECK(landis_koch(k) == AgreementBand::Fair);
    }
}

TEST_CASE("criterion 9: kappa property suite") {
    CRITERION(9, "exhaustive oracle equivalence (length <= 6, 3 categories), symmetry, relabeling, degenerate handling");
    const std::vector<int> categories{-1, 0, 1};

    // Exhaustive equivalence and symmetry.
    for (std::size_t n = 1; n <= 6; ++n) {
        std::size_t combos = 1;
        for (std::size_t i = 0; i < n; ++i) combos *= 3;
        for (std::size_t ca = 0; ca < combos; ++ca) {
            std::vector<int> a(n);
            std::size_t code = ca;
            for (std::size_t i = 0; i < n; ++i) {
                a[i] = static_cast<int>(code % 3) - 1;
                code /= 3;
            }
            for (std::size_t cb = 0; cb < combos; ++cb) {
                std::vector<int> b(n);
                code = cb;
                for (std::size_t i = 0; i < n; ++i) {
                    b[i] = static_cast<int>(code % 3) - 1;
                    code /= 3;
                }
                const auto got = cohen_kappa(a, b, categories);
                const auto expected = oracle_kappa_ternary(a, b);
                REQUIRE(got.degenerate == expected.degenerate);
                if (!got.degenerate) {
                    REQUIRE(std::fabs(got.kappa - expected.kappa) <= 1e-12);
                    REQUIRE(got.kappa >= -1.0 - 1e-12);
                    REQUIRE(got.kappa <= 1.0 + 1e-12);
                    const auto swapped = cohen_kappa(b, a, categories);
                    REQUIRE(std::fabs(swapped.kappa - got.kappa) <= 1e-12);
                }
            }
        }
    }

    // Relabeling invariance on sampled vectors.
    const int perms[6][3] = {{-1, 0, 1}, {-1, 1, 0}, {0, -1, 1},
                             {0, 1, -1}, {1, -1, 0}, {1, 0, -1}};
    SplitMix64 rng(4242);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.below(8);
        std::vector<int> a(n);
        std::vector<int> b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = static_cast<int>(rng.below(3)) - 1;
            b[i] = static_cast<int>(rng.below(3)) - 1;
        }
        const auto base = cohen_kappa(a, b, categories);
        for (const auto& perm : perms) {
            std::vector<int> pa(n);
            std::vector<int> pb(n);
            for (std::size_t i = 0; i < n; ++i) {
                pa[i] = perm[a[i] + 1];
                pb[i] = perm[b[i] + 1];
            }
            const auto relabeled = cohen_kappa(pa, pb, categories);
            REQUIRE(relabeled.degenerate == base.degenerate);
            if (!base.degenerate) {
                REQUIRE(std::fabs(relabeled.kappa - base.kappa) <= 1e-12);
            }
        }
    }

    // Degenerate marker, never a silent 1.0 or 0.0.
    const auto degenerate = cohen_kappa({0, 0, 0}, {0, 0, 0}, categories);
    C_CHECK(degenerate.degenerate);
    C_CHECK(!degenerate.band.has_value());
    criterion_guard(true);
}

TEST_CASE("criterion 10: consensus property suite") {
    CRITERION(10, "median matches a sort oracle for all ternary multisets <= 4; always scale-valid; documented tie rule");
    const ScaleKind ternary = ScaleKind::ternary();
    for (std::size_t n = 1; n <= 4; ++n) {
        std::size_t combos = 1;
        for (std::size_t i = 0; i < n; ++i) combos *= 3;
        for (std::size_t code = 0; code < combos; ++code) {
            std::vector<int> values(n);
            std::size_t c = code;
            for (std::size_t i = 0; i < n; ++i) {
                values[i] = static_cast<int>(c % 3) - 1;
                c /= 3;
            }
            const int got = median_consensus(values, ternary);
            REQUIRE(got == oracle_median(values));
            REQUIRE(ternary.contains(got));
        }
    }
    // The documented tie rule: non-integral midpoints round toward zero.
    C_CHECK(median_consensus({0, 0, 1, 1}, ternary) == 0);
    C_CHECK(median_consensus({-1, -1, 0, 0}, ternary) == 0);
}

TEST_CASE("criterion 11: pipeline determinism and blinding leakage") {
    CRITERION(11, "byte-identical scripted runs and ledgers; zero label strings in blinded payloads");
    const std::string tmp = make_temp_dir("acceptance");

    // Two scripted judge runs with the same seed: byte-identical ratings.
    const std::string judge_args =
        "judge run --corpus " + source_path("data/corpus/profile_study.json") +
        " --codebook " + source_path("data/codebooks/cognitive-profile-7.json") +
        " --config " + source_path("data/judges/judges.json") + " --seed 42 --out ";
    C_CHECK(run_cli(judge_args + tmp + "/j1", tmp).exit_code == 0);
    C_CHECK(run_cli(judge_args + tmp + "/j2", tmp).exit_code == 0);
    C_CHECK(slurp(tmp + "/j1/ratings.json") == slurp(tmp + "/j2/ratings.json"));
    C_CHECK(!slurp(tmp + "/j1/ratings.json").empty());

    // Two reproduction runs: byte-identical ledgers.
    C_CHECK(run_cli("reproduce --out " + tmp + "/r1", tmp).exit_code == 0);
    C_CHECK(run_cli("reproduce --out " + tmp + "/r2", tmp).exit_code == 0);
    C_CHECK(slurp(tmp + "/r1/ledger.txt") == slurp(tmp + "/r2/ledger.txt"));
    C_CHECK(!slurp(tmp + "/r1/ledger.txt").empty());

    // Leakage scan over both bundled corpora.
    for (const char* corpus :
         {"data/corpus/profile_study.json", "data/corpus/tutoring_study.json"}) {
        const Study study = ingest_corpus(source_path(corpus));
        const BlindingResult blinding = blind(study.documents, 42);
        const std::string payload = serialize_blinded_items(blinding.items);
        C_CHECK(!icontains(payload, "transfer")); // covers both label spellings
        for (const auto& c : study.conditions) {
            C_CHECK(!icontains(payload, c.id));
            C_CHECK(!icontains(payload, c.family));
            C_CHECK(!icontains(payload, c.display_name));
        }
    }
}

TEST_CASE("criterion 12: non-reproducibility honesty") {
    CRITERION(12, "self-narrative row flagged raw-data-unavailable and excluded; published kappas consumed as fixtures only");
    const ReproduceResult result = run_reproduce(fixtures());

    // The self-narrative row is a SKIP entry, not a pass/fail check.
    bool saw_skip = false;
    for (const auto& entry : result.entries) {
        if (entry.name == "self_narrative_d") {
            saw_skip = true;
            C_CHECK(entry.status == LedgerEntry::Status::Skip);
            C_CHECK(contains(entry.detail, "raw data unavailable"));
            C_CHECK(contains(entry.detail, "0.44"));
        }
    }
    C_CHECK(saw_skip);

    // The effect table displays the published self-narrative means with no
    // recomputed d.
    for (const auto& table : result.tables) {
        if (table.id != "effect_table") continue;
        bool saw_row = false;
        for (const auto& row : table.rows) {
            if (!contains(row[0], "Self-narrative")) continue;
            saw_row = true;
            C_CHECK(row[1] == "9.60");
            C_CHECK(row[2] == "7.60");
            C_CHECK(row[5] == "n/a"); // recomputed_d
            C_CHECK(row[7] == "raw data unavailable");
        }
        C_CHECK(saw_row);
    }

    // Published agreement values appear only via the banding path; the ledger
    // names them kappa_band_*, never as recomputed agreement.
    bool saw_band_entries = false;
    for (const auto& entry : result.entries) {
        if (entry.name.rfind("kappa_band_", 0) == 0) {
            saw_band_entries = true;
            C_CHECK(!contains(entry.detail, "recomputed="));
        }
    }
    C_CHECK(saw_band_entries);

    // And the full ledger passes with zero failures.
    C_CHECK(result.ok());
}
