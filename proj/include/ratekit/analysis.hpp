#pragma once
// Reconstructs every study-level table from rating matrices or bundled
// fixtures: subscale score tables with group means and effect sizes, profile
// consensus/diff tables, coder-set sensitivity, tutoring/dialogue tables with
// ratios and correlations, the paired-difference heatmap, and agreement
// reports. Pure transformations over immutable inputs.

#include "ratekit/codebook.hpp"
#include "ratekit/corpus.hpp"
#include "ratekit/fixtures.hpp"
#include "ratekit/ratings.hpp"
#include "ratekit/stats.hpp"
#include "ratekit/table.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ratekit {

// ---------------------------------------------------------------------------
// Subscale table (four-subscale narrative scale)
// ---------------------------------------------------------------------------

struct MasaReport {
    ScoreTable table;  // subscales plus Total column, fixture row order
    GroupStats stats;  // per subscale and Total: T / paired-NT / all-NT means
    EffectSizeResult total_effect; // transfer vs paired non-transfer totals
};

MasaReport build_masa_table(const ScoreTable& subscales, const Study& study,
                            const Codebook& masa_cb);

// ---------------------------------------------------------------------------
// Profile tables (consensus + paired diffs per coder set)
// ---------------------------------------------------------------------------

struct ProfileTables {
    ConsensusTable consensus;
    PairedDiffTable diffs;
};

ProfileTables build_profile_tables(const ConsensusTable& consensus, const Study& study);

// Re-keys a document-level consensus table by condition. Every condition may
// be covered by at most one consensus document; conditions without one are
// simply absent from the result.
ScoreTable score_table_from_consensus(const ConsensusTable& consensus,
                                      const Study& study,
                                      const std::string& codebook_id);

// ---------------------------------------------------------------------------
// Sensitivity between coder sets
// ---------------------------------------------------------------------------

struct FindingSpec {
    std::string description;          // e.g. "SU_dir diffs positive in all families"
    std::string indicator_id;
    std::vector<std::string> families;
    int expected_sign = 1;            // sign each family's diff must have
};

struct DifferingCell {
    std::string document_id;
    std::string indicator_id;
    int value_a = 0;
    int value_b = 0;
};

struct DirectionRow {
    std::string family;
    std::string indicator_id;
    int diff_a = 0;
    int diff_b = 0;
    bool consistent = false; // same sign under both coder sets
};

struct FindingCheck {
    FindingSpec spec;
    bool holds_a = false;
    bool holds_b = false;
};

struct SensitivityReport {
    std::string set_a;
    std::string set_b;
    std::vector<DifferingCell> differing_cells; // empty iff tables identical
    std::vector<DirectionRow> directions;       // every (family, indicator)
    std::vector<FindingCheck> findings;
};

// Both tables must cover the same (document, indicator) cells.
SensitivityReport sensitivity_compare(const ConsensusTable& a, const ConsensusTable& b,
                                      const Study& study,
                                      const std::vector<FindingSpec>& findings);

// The declared primary findings for the bundled profile study.
std::vector<FindingSpec> bundled_profile_findings();

// ---------------------------------------------------------------------------
// Tutoring tables
// ---------------------------------------------------------------------------

struct CorrelationRow {
    std::string indicator_id;
    CorrelationResult corr;
};

struct TutoringReport {
    ScoreTable tutoring;  // with Total column
    ScoreTable dialogue;  // with Total column
    GroupStats tutoring_stats;
    GroupStats dialogue_stats;
    EffectSizeResult tutoring_effect; // on totals, T vs paired NT
    EffectSizeResult dialogue_effect;
    PairedDiffTable tutoring_diffs;   // per family, incl Total column
    std::vector<CorrelationRow> correlations; // each dialogue indicator vs
                                              // tutoring total, all conditions
};

TutoringReport build_tutoring_tables(const ScoreTable& tutoring_scores,
                                     const ScoreTable& dialogue_scores,
                                     const Study& study, const Codebook& tutoring_cb,
                                     const Codebook& dialogue_cb);

// ---------------------------------------------------------------------------
// Effect-size comparison table
// ---------------------------------------------------------------------------

struct EffectCategoryRow {
    std::string category;
    std::string scale_range;
    double published_transfer_mean = 0.0;
    double published_non_transfer_mean = 0.0;
    double published_d = 0.0;
    std::string published_interpretation;
    std::optional<EffectSizeResult> recomputed; // empty => raw data unavailable
    std::string note;                           // "raw data unavailable" when empty
};

// Joins the published per-category rows with the recomputed effects where raw
// per-condition rows exist; the self-narrative row is display-only.
std::vector<EffectCategoryRow> build_effect_table(
    const std::vector<PublishedEffectRow>& published, const MasaReport& masa,
    const TutoringReport& tutoring);

// ---------------------------------------------------------------------------
// Heatmap
// ---------------------------------------------------------------------------

struct HeatmapMatrix {
    std::vector<std::string> families;   // rows: corresponding families only
    std::vector<std::string> column_ids; // concatenated across groups
    std::vector<std::optional<int>> cells; // row-major; nullopt = no paired data

    std::optional<int> cell(std::size_t row, std::size_t col) const;
};

// Merges per-group paired-diff tables into one family x indicator matrix.
// Families keep first-appearance order; duplicate column ids are an error;
// at least one (family, indicator) cell must exist.
HeatmapMatrix build_heatmap(const std::vector<PairedDiffTable>& groups);

// ---------------------------------------------------------------------------
// Agreement report over a rating matrix
// ---------------------------------------------------------------------------

struct KappaReportOptions {
    double exclusion_threshold = 0.40; // mean pairwise kappa below this flags a coder
    std::vector<std::string> indicator_subset_coders; // per-indicator kappas use
                                                      // this subset; empty = all
};

struct KappaReport {
    struct PairEntry {
        std::string coder_a;
        std::string coder_b;
        KappaResult pooled;
    };
    struct IndicatorEntry {
        std::string indicator_id;
        // Mean pairwise kappa within the subset; absent when every pair is
        // degenerate.
        std::optional<double> mean_pairwise;
        std::optional<AgreementBand> band;
        std::size_t pair_count = 0;
    };
    struct CoderEntry {
        std::string coder_id;
        std::optional<double> mean_kappa; // mean pooled kappa with the others
        bool below_threshold = false;
    };

    std::vector<PairEntry> pairs;
    std::vector<IndicatorEntry> per_indicator;
    std::vector<CoderEntry> coders;
    double threshold = 0.40;
    std::vector<std::string> subset; // coders used for per-indicator kappas
};

KappaReport build_kappa_report(const RatingMatrix& matrix, const Codebook& cb,
                               const KappaReportOptions& options = {});

// ---------------------------------------------------------------------------
// Table renderers (shared by the CLI and the golden-file tests)
// ---------------------------------------------------------------------------

Table render_masa_table(const MasaReport& report, const Study& study);
Table render_group_stats(const GroupStats& stats, const std::string& table_id);
Table render_consensus_table(const ConsensusTable& consensus, const Study& study,
                             const Codebook& cb, const std::string& table_id);
Table render_diff_table(const PairedDiffTable& diffs, const std::string& table_id,
                        bool include_sum_row);
Table render_direction_table(const SensitivityReport& report,
                             const std::vector<std::string>& indicator_ids);
Table render_differing_cells(const SensitivityReport& report);
Table render_score_table(const ScoreTable& scores, const Study& study,
                         const std::string& table_id);
Table render_effect_table(const std::vector<EffectCategoryRow>& rows);
Table render_correlation_table(const std::vector<CorrelationRow>& rows);
Table render_heatmap(const HeatmapMatrix& heatmap);
Table render_kappa_pairs(const KappaReport& report);
Table render_kappa_indicators(const KappaReport& report);
Table render_kappa_coders(const KappaReport& report);
Table render_fixture_kappa_pairs(const std::vector<KappaPairFixture>& pairs,
                                 const std::vector<KappaGroupMeanFixture>& groups);
Table render_fixture_kappa_indicators(const std::vector<KappaIndicatorFixture>& rows);

} // namespace ratekit
