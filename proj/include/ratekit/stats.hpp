#pragma once
// Deterministic statistical core: Cohen's kappa (pairwise / pooled),
// Landis-Koch bands, median consensus, Cohen's d with interpretation bands,
// Pearson r^2, group means/ratios and paired transfer-minus-non-transfer
// differences. Everything here is a pure function of its inputs.

#include "ratekit/codebook.hpp"
#include "ratekit/corpus.hpp"
#include "ratekit/ratings.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ratekit {

// ---------------------------------------------------------------------------
// Agreement
// ---------------------------------------------------------------------------

// Upper-inclusive partition of [-1, 1]:
//   poor (<0) | slight [0,0.20] | fair (0.20,0.40] | moderate (0.40,0.60] |
//   substantial (0.60,0.80] | almost perfect (0.80,1.0]
enum class AgreementBand { Poor, Slight, Fair, Moderate, Substantial, AlmostPerfect };

const char* agreement_band_label(AgreementBand band); // "almost perfect", ...
AgreementBand landis_koch(double kappa);              // throws outside [-1, 1]

struct KappaResult {
    // Degenerate: both raters constant on the same single category (p_e = 1).
    // Reported as a distinct marker, never silently 1.0 or 0.0.
    bool degenerate = false;
    double kappa = 0.0; // meaningless when degenerate
    double p_observed = 0.0;
    double p_expected = 0.0;
    std::size_t n_items = 0;
    std::optional<AgreementBand> band; // absent when degenerate
};

// Cohen's kappa over two equal-length rating vectors. Marginals are
// estimated from the two vectors; contingency counts are kept in exact
// integer arithmetic so the degenerate case is detected without tolerance.
// Symmetric in (a, b) and invariant under category relabeling.
KappaResult cohen_kappa(const std::vector<int>& a, const std::vector<int>& b,
                        const std::vector<int>& categories);

// Concatenates all shared (document, indicator) cells of one coder pair into
// a single categorical sample over the union of the indicators' domains,
// then applies cohen_kappa. Empty shared-cell set -> error.
KappaResult pooled_kappa(const RatingMatrix& matrix, const std::string& coder_a,
                         const std::string& coder_b,
                         const std::vector<std::string>& indicator_ids,
                         const Codebook& cb);

// ---------------------------------------------------------------------------
// Effect size / correlation
// ---------------------------------------------------------------------------

// On |d|: negligible (<0.2) | small (<0.5) | medium (<0.8) | large (<1.2) |
// very large (>=1.2).
enum class EffectBand { Negligible, Small, Medium, Large, VeryLarge };

const char* effect_band_label(EffectBand band);
EffectBand classify_effect(double d);

struct EffectSizeResult {
    double mean_a = 0.0;
    double mean_b = 0.0;
    double sd_a = 0.0; // sample standard deviations (n-1 denominator)
    double sd_b = 0.0;
    double pooled_sd = 0.0;
    double d = 0.0; // sign convention: a minus b
    EffectBand band = EffectBand::Negligible;
};

// Pooled sd is sqrt((sd_a^2 + sd_b^2)/2) for equal group sizes, the general
// (n-1)-weighted formula otherwise. Groups need >= 2 values each and a
// nonzero pooled variance.
EffectSizeResult cohens_d(const std::vector<double>& group_a,
                          const std::vector<double>& group_b);

struct CorrelationResult {
    double r = 0.0;
    double r_squared = 0.0;
    std::size_t n = 0;
};

// Product-moment correlation; needs >= 3 paired values and nonzero variance
// on both sides.
CorrelationResult pearson_r2(const std::vector<double>& x,
                             const std::vector<double>& y);

// ---------------------------------------------------------------------------
// Consensus
// ---------------------------------------------------------------------------

// Median over one cell's coder values. Odd count: middle value. Even count:
// mean of the middle two; a non-integral midpoint rounds half toward zero
// (the "absent" direction). Result is always scale-valid.
int median_consensus(std::vector<int> values, const ScaleKind& scale);

// Per-(document, indicator) medians over a named coder set.
struct ConsensusTable {
    std::string coder_set_id; // e.g. "3C"
    std::vector<std::string> document_ids;
    std::vector<std::string> indicator_ids;
    std::vector<int> values; // row-major, documents x indicators

    int at(std::size_t doc_index, std::size_t ind_index) const;
    int value_of(const std::string& document_id, const std::string& indicator_id) const;
};

// Requires the matrix to be complete for the coder subset.
ConsensusTable build_consensus(const RatingMatrix& matrix,
                               const std::vector<std::string>& coder_ids,
                               const std::string& coder_set_id, const Codebook& cb);

// ---------------------------------------------------------------------------
// Scores and group statistics
// ---------------------------------------------------------------------------

// Integer scores per condition (already-aggregated consensus values, as in
// the published per-condition tables).
struct ScoreTable {
    std::string codebook_id;
    std::vector<std::string> indicator_ids;
    struct Row {
        std::string condition_id;
        std::vector<int> values;
    };
    std::vector<Row> rows;

    const Row* find_row(const std::string& condition_id) const;
    int value_of(const std::string& condition_id, const std::string& indicator_id) const;
    std::vector<double> column(const std::string& indicator_id) const;
    std::size_t column_index(const std::string& indicator_id) const;
};

// Appends a summed column (named total_column_id) over the codebook group.
ScoreTable with_total_column(const ScoreTable& table, const Codebook& cb,
                             const std::string& group_id,
                             const std::string& total_column_id);

struct GroupStatsRow {
    std::string indicator_id;
    double transfer_mean = 0.0;
    double non_transfer_mean_paired = 0.0; // corresponding families only
    double non_transfer_mean_all = 0.0;    // every non-transfer condition
    // transfer / paired non-transfer; absent when the denominator is zero
    // (directional scales routinely average to 0).
    std::optional<double> ratio_paired;
};

struct GroupStats {
    std::vector<GroupStatsRow> rows;
    const GroupStatsRow& row(const std::string& indicator_id) const;
    // The ratio as a hard requirement: throws the zero-denominator error.
    double require_ratio(const std::string& indicator_id) const;
};

// Per-indicator group means and transfer/non-transfer ratios. Reference
// conditions (no corresponding pair) count only toward the all-NT mean.
GroupStats group_stats(const ScoreTable& scores, const Study& study);

// ---------------------------------------------------------------------------
// Paired differences
// ---------------------------------------------------------------------------

struct PairedDiffRow {
    std::string family;
    std::vector<int> diffs;
};

// Transfer minus non-transfer per corresponding family; reference conditions
// never contribute.
struct PairedDiffTable {
    std::vector<std::string> indicator_ids;
    std::vector<PairedDiffRow> rows;

    std::vector<int> column_sums() const;
    int diff_of(const std::string& family, const std::string& indicator_id) const;
    void rename_column(const std::string& from, const std::string& to);
};

// Consensus variant: each corresponding condition must be covered by exactly
// one document in the consensus table.
PairedDiffTable paired_differences(const ConsensusTable& consensus, const Study& study);

// Score-table variant: rows are conditions.
PairedDiffTable paired_differences(const ScoreTable& scores, const Study& study);

} // namespace ratekit
