#include "ratekit/stats.hpp"

#include "ratekit/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace ratekit {

// ---------------------------------------------------------------------------
// Landis-Koch
// ---------------------------------------------------------------------------

const char* agreement_band_label(AgreementBand band) {
    switch (band) {
        case AgreementBand::Poor: return "poor";
        case AgreementBand::Slight: return "slight";
        case AgreementBand::Fair: return "fair";
        case AgreementBand::Moderate: return "moderate";
        case AgreementBand::Substantial: return "substantial";
        case AgreementBand::AlmostPerfect: return "almost perfect";
    }
    return "?";
}

AgreementBand landis_koch(double kappa) {
    if (!(kappa >= -1.0 && kappa <= 1.0)) {
        fail(ErrorCode::Validation, "kappa out of range [-1, 1]: " + std::to_string(kappa));
    }
    if (kappa < 0.0) return AgreementBand::Poor;
    if (kappa <= 0.20) return AgreementBand::Slight;
    if (kappa <= 0.40) return AgreementBand::Fair;
    if (kappa <= 0.60) return AgreementBand::Moderate;
    if (kappa <= 0.80) return AgreementBand::Substantial;
    return AgreementBand::AlmostPerfect;
}

// ---------------------------------------------------------------------------
// Cohen's kappa
// ---------------------------------------------------------------------------

KappaResult cohen_kappa(const std::vector<int>& a, const std::vector<int>& b,
                        const std::vector<int>& categories) {
    if (a.size() != b.size()) {
        fail(ErrorCode::Validation, "rating vectors differ in length (" +
                                        std::to_string(a.size()) + " vs " +
                                        std::to_string(b.size()) + ")");
    }
    if (a.empty()) fail(ErrorCode::Validation, "rating vectors are empty");

    std::set<int> cats(categories.begin(), categories.end());
    if (cats.empty()) fail(ErrorCode::Validation, "category set is empty");
    for (int v : a) {
        if (!cats.count(v)) {
            fail(ErrorCode::Validation, "value " + std::to_string(v) + " not in category set");
        }
    }
    for (int v : b) {
        if (!cats.count(v)) {
            fail(ErrorCode::Validation, "value " + std::to_string(v) + " not in category set");
        }
    }

    // Exact integer contingency counts; the degenerate case (p_e = 1) is a
    // precise integer identity, no tolerance involved.
    const std::size_t n = a.size();
    std::map<int, long long> row;
    std::map<int, long long> col;
    long long agree = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ++row[a[i]];
        ++col[b[i]];
        if (a[i] == b[i]) ++agree;
    }
    long long expected_num = 0; // sum of row_c * col_c; p_e = expected_num / n^2
    for (const auto& [cat, rc] : row) {
        auto it = col.find(cat);
        if (it != col.end()) expected_num += rc * it->second;
    }
    const long long n_ll = static_cast<long long>(n);
    const long long n_sq = n_ll * n_ll;

    KappaResult result;
    result.n_items = n;
    result.p_observed = static_cast<double>(agree) / static_cast<double>(n_ll);
    result.p_expected = static_cast<double>(expected_num) / static_cast<double>(n_sq);
    if (expected_num == n_sq) {
        result.degenerate = true;
        return result;
    }
    // kappa = (p_o - p_e) / (1 - p_e), rearranged over the integer counts.
    result.kappa = static_cast<double>(agree * n_ll - expected_num) /
                   static_cast<double>(n_sq - expected_num);
    result.band = landis_koch(result.kappa);
    return result;
}

KappaResult pooled_kappa(const RatingMatrix& matrix, const std::string& coder_a,
                         const std::string& coder_b,
                         const std::vector<std::string>& indicator_ids,
                         const Codebook& cb) {
    std::set<int> category_union;
    std::vector<int> a;
    std::vector<int> b;
    for (const auto& indicator : indicator_ids) {
        const ScaleKind& scale = cb.require(indicator).scale;
        for (int v = scale.lo(); v <= scale.hi(); ++v) category_union.insert(v);
        for (const auto& doc : matrix.documents()) {
            const auto va = matrix.get(coder_a, doc, indicator);
            const auto vb = matrix.get(coder_b, doc, indicator);
            if (va && vb) {
                a.push_back(*va);
                b.push_back(*vb);
            }
        }
    }
    if (a.empty()) {
        fail(ErrorCode::Validation, "coders '" + coder_a + "' and '" + coder_b +
                                        "' share no rated cells");
    }
    return cohen_kappa(a, b, {category_union.begin(), category_union.end()});
}

// ---------------------------------------------------------------------------
// Effect size
// ---------------------------------------------------------------------------

const char* effect_band_label(EffectBand band) {
    switch (band) {
        case EffectBand::Negligible: return "negligible";
        case EffectBand::Small: return "small";
        case EffectBand::Medium: return "medium";
        case EffectBand::Large: return "large";
        case EffectBand::VeryLarge: return "very large";
    }
    return "?";
}

EffectBand classify_effect(double d) {
    const double ad = std::fabs(d);
    if (ad < 0.2) return EffectBand::Negligible;
    if (ad < 0.5) return EffectBand::Small;
    if (ad < 0.8) return EffectBand::Medium;
    if (ad < 1.2) return EffectBand::Large;
    return EffectBand::VeryLarge;
}

namespace {

double mean_of(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs, double mean) {
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(xs.size() - 1);
}

} // namespace

EffectSizeResult cohens_d(const std::vector<double>& group_a,
                          const std::vector<double>& group_b) {
    if (group_a.size() < 2 || group_b.size() < 2) {
        fail(ErrorCode::Validation, "each group needs at least 2 values for Cohen's d");
    }
    EffectSizeResult r;
    r.mean_a = mean_of(group_a);
    r.mean_b = mean_of(group_b);
    const double var_a = sample_variance(group_a, r.mean_a);
    const double var_b = sample_variance(group_b, r.mean_b);
    r.sd_a = std::sqrt(var_a);
    r.sd_b = std::sqrt(var_b);

    double pooled_var;
    if (group_a.size() == group_b.size()) {
        pooled_var = (var_a + var_b) / 2.0;
    } else {
        const double na = static_cast<double>(group_a.size());
        const double nb = static_cast<double>(group_b.size());
        pooled_var = ((na - 1.0) * var_a + (nb - 1.0) * var_b) / (na + nb - 2.0);
    }
    if (pooled_var <= 0.0) {
        fail(ErrorCode::Validation, "zero pooled variance, Cohen's d undefined");
    }
    r.pooled_sd = std::sqrt(pooled_var);
    r.d = (r.mean_a - r.mean_b) / r.pooled_sd;
    r.band = classify_effect(r.d);
    return r;
}

CorrelationResult pearson_r2(const std::vector<double>& x,
                             const std::vector<double>& y) {
    if (x.size() != y.size()) {
        fail(ErrorCode::Validation, "correlation inputs differ in length");
    }
    if (x.size() < 3) {
        fail(ErrorCode::Validation, "correlation needs at least 3 paired values");
    }
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        fail(ErrorCode::Validation, "zero variance, correlation undefined");
    }
    CorrelationResult r;
    r.n = x.size();
    r.r = sxy / std::sqrt(sxx * syy);
    r.r_squared = r.r * r.r;
    return r;
}

// ---------------------------------------------------------------------------
// Median consensus
// ---------------------------------------------------------------------------

int median_consensus(std::vector<int> values, const ScaleKind& scale) {
    if (values.empty()) fail(ErrorCode::Validation, "median of an empty value list");
    for (int v : values) {
        if (!scale.contains(v)) {
            fail(ErrorCode::Validation,
                 "value " + std::to_string(v) + " outside scale " + scale.describe());
        }
    }
    const std::size_t n = values.size();
    const std::size_t mid = n / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                     values.end());
    const int upper = values[mid];
    if (n % 2 == 1) return upper;

    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid - 1),
                     values.begin() + static_cast<std::ptrdiff_t>(mid));
    const int lower = values[mid - 1];
    // Integer division truncates toward zero, which is exactly the tie rule:
    // a .5 midpoint rounds toward 0 ("absent").
    return (lower + upper) / 2;
}

int ConsensusTable::at(std::size_t doc_index, std::size_t ind_index) const {
    return values[doc_index * indicator_ids.size() + ind_index];
}

int ConsensusTable::value_of(const std::string& document_id,
                             const std::string& indicator_id) const {
    auto dit = std::find(document_ids.begin(), document_ids.end(), document_id);
    auto iit = std::find(indicator_ids.begin(), indicator_ids.end(), indicator_id);
    if (dit == document_ids.end() || iit == indicator_ids.end()) {
        fail(ErrorCode::Validation, "consensus table has no cell (" + document_id +
                                        ", " + indicator_id + ")");
    }
    return at(static_cast<std::size_t>(dit - document_ids.begin()),
              static_cast<std::size_t>(iit - indicator_ids.begin()));
}

ConsensusTable build_consensus(const RatingMatrix& matrix,
                               const std::vector<std::string>& coder_ids,
                               const std::string& coder_set_id, const Codebook& cb) {
    if (coder_ids.empty()) {
        fail(ErrorCode::Validation, "consensus requires at least one coder");
    }
    ConsensusTable table;
    table.coder_set_id = coder_set_id;
    table.document_ids = matrix.documents();
    table.indicator_ids = matrix.indicators();
    for (const auto& doc : table.document_ids) {
        for (const auto& indicator : table.indicator_ids) {
            std::vector<int> cell_values;
            for (const auto& coder : coder_ids) {
                const auto v = matrix.get(coder, doc, indicator);
                if (!v) {
                    fail(ErrorCode::Validation,
                         "matrix incomplete for coder set '" + coder_set_id +
                             "': missing (" + coder + ", " + doc + ", " + indicator + ")");
                }
                cell_values.push_back(*v);
            }
            table.values.push_back(
                median_consensus(std::move(cell_values), cb.require(indicator).scale));
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// Score tables and group statistics
// ---------------------------------------------------------------------------

const ScoreTable::Row* ScoreTable::find_row(const std::string& condition_id) const {
    for (const auto& row : rows) {
        if (row.condition_id == condition_id) return &row;
    }
    return nullptr;
}

std::size_t ScoreTable::column_index(const std::string& indicator_id) const {
    auto it = std::find(indicator_ids.begin(), indicator_ids.end(), indicator_id);
    if (it == indicator_ids.end()) {
        fail(ErrorCode::Validation, "score table has no column '" + indicator_id + "'");
    }
    return static_cast<std::size_t>(it - indicator_ids.begin());
}

int ScoreTable::value_of(const std::string& condition_id,
                         const std::string& indicator_id) const {
    const Row* row = find_row(condition_id);
    if (!row) {
        fail(ErrorCode::Validation, "score table has no row for condition '" +
                                        condition_id + "'");
    }
    return row->values.at(column_index(indicator_id));
}

std::vector<double> ScoreTable::column(const std::string& indicator_id) const {
    const std::size_t idx = column_index(indicator_id);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row.values.at(idx));
    return out;
}

ScoreTable with_total_column(const ScoreTable& table, const Codebook& cb,
                             const std::string& group_id,
                             const std::string& total_column_id) {
    const TotalGroup* group = cb.find_group(group_id);
    if (!group) {
        fail(ErrorCode::Validation, "codebook '" + cb.id + "' has no total group '" +
                                        group_id + "'");
    }
    ScoreTable out = table;
    out.indicator_ids.push_back(total_column_id);
    for (auto& row : out.rows) {
        int total = 0;
        for (const auto& member : group->members) {
            total += table.value_of(row.condition_id, member);
        }
        row.values.push_back(total);
    }
    return out;
}

const GroupStatsRow& GroupStats::row(const std::string& indicator_id) const {
    for (const auto& r : rows) {
        if (r.indicator_id == indicator_id) return r;
    }
    fail(ErrorCode::Validation, "no group stats for indicator '" + indicator_id + "'");
}

double GroupStats::require_ratio(const std::string& indicator_id) const {
    const GroupStatsRow& r = row(indicator_id);
    if (!r.ratio_paired) {
        fail(ErrorCode::Validation,
             "zero denominator for transfer/non-transfer ratio (indicator '" +
                 indicator_id + "')");
    }
    return *r.ratio_paired;
}

GroupStats group_stats(const ScoreTable& scores, const Study& study) {
    const auto pairs = corresponding_pairs(study);
    std::set<std::string> paired_nt;
    for (const auto& p : pairs) paired_nt.insert(p.non_transfer_condition);

    GroupStats stats;
    for (const auto& indicator : scores.indicator_ids) {
        std::vector<double> transfer;
        std::vector<double> nt_paired;
        std::vector<double> nt_all;
        for (const auto& row : scores.rows) {
            const Condition& c = study.require_condition(row.condition_id);
            const double v = row.values.at(scores.column_index(indicator));
            if (c.label == Label::Transfer) {
                transfer.push_back(v);
            } else {
                nt_all.push_back(v);
                if (paired_nt.count(c.id)) nt_paired.push_back(v);
            }
        }
        if (transfer.empty() || nt_all.empty()) {
            fail(ErrorCode::Validation,
                 "group stats need at least one condition per label (indicator '" +
                     indicator + "')");
        }
        GroupStatsRow row;
        row.indicator_id = indicator;
        row.transfer_mean = mean_of(transfer);
        row.non_transfer_mean_all = mean_of(nt_all);
        row.non_transfer_mean_paired =
            nt_paired.empty() ? row.non_transfer_mean_all : mean_of(nt_paired);
        if (row.non_transfer_mean_paired != 0.0) {
            row.ratio_paired = row.transfer_mean / row.non_transfer_mean_paired;
        }
        stats.rows.push_back(row);
    }
    return stats;
}

// ---------------------------------------------------------------------------
// Paired differences
// ---------------------------------------------------------------------------

std::vector<int> PairedDiffTable::column_sums() const {
    std::vector<int> sums(indicator_ids.size(), 0);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += row.diffs.at(i);
    }
    return sums;
}

int PairedDiffTable::diff_of(const std::string& family,
                             const std::string& indicator_id) const {
    auto iit = std::find(indicator_ids.begin(), indicator_ids.end(), indicator_id);
    if (iit == indicator_ids.end()) {
        fail(ErrorCode::Validation, "diff table has no column '" + indicator_id + "'");
    }
    for (const auto& row : rows) {
        if (row.family == family) {
            return row.diffs.at(static_cast<std::size_t>(iit - indicator_ids.begin()));
        }
    }
    fail(ErrorCode::Validation, "diff table has no family '" + family + "'");
}

void PairedDiffTable::rename_column(const std::string& from, const std::string& to) {
    for (auto& id : indicator_ids) {
        if (id == from) {
            id = to;
            return;
        }
    }
    fail(ErrorCode::Validation, "diff table has no column '" + from + "'");
}

namespace {

// Exactly one consensus document per condition; anything else is ambiguous.
std::string document_for_condition(const ConsensusTable& consensus, const Study& study,
                                   const std::string& condition_id) {
    std::string match;
    for (const auto& doc_id : consensus.document_ids) {
        const DialogueDocument* doc = study.find_document(doc_id);
        if (!doc) {
            fail(ErrorCode::Validation,
                 "consensus document '" + doc_id + "' is not in the study corpus");
        }
        if (doc->condition_id == condition_id) {
            if (!match.empty()) {
                fail(ErrorCode::Validation, "condition '" + condition_id +
                                                "' has multiple consensus documents");
            }
            match = doc_id;
        }
    }
    if (match.empty()) {
        fail(ErrorCode::Validation,
             "missing pair member: no consensus document for condition '" +
                 condition_id + "'");
    }
    return match;
}

} // namespace

PairedDiffTable paired_differences(const ConsensusTable& consensus, const Study& study) {
    const auto pairs = corresponding_pairs(study);
    if (pairs.empty()) fail(ErrorCode::Validation, "study has no corresponding pairs");

    PairedDiffTable table;
    table.indicator_ids = consensus.indicator_ids;
    for (const auto& pair : pairs) {
        const std::string t_doc = document_for_condition(consensus, study, pair.transfer_condition);
        const std::string nt_doc =
            document_for_condition(consensus, study, pair.non_transfer_condition);
        PairedDiffRow row;
        row.family = pair.family;
        for (const auto& indicator : table.indicator_ids) {
            row.diffs.push_back(consensus.value_of(t_doc, indicator) -
                                consensus.value_of(nt_doc, indicator));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

PairedDiffTable paired_differences(const ScoreTable& scores, const Study& study) {
    const auto pairs = corresponding_pairs(study);
    if (pairs.empty()) fail(ErrorCode::Validation, "study has no corresponding pairs");

    PairedDiffTable table;
    table.indicator_ids = scores.indicator_ids;
    for (const auto& pair : pairs) {
        if (!scores.find_row(pair.transfer_condition) ||
            !scores.find_row(pair.non_transfer_condition)) {
            fail(ErrorCode::Validation, "missing pair member for family '" +
                                            pair.family + "' in score table");
        }
        PairedDiffRow row;
        row.family = pair.family;
        for (const auto& indicator : table.indicator_ids) {
            row.diffs.push_back(scores.value_of(pair.transfer_condition, indicator) -
                                scores.value_of(pair.non_transfer_condition, indicator));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace ratekit
