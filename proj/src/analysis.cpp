#include "ratekit/analysis.hpp"

#include "ratekit/error.hpp"
#include "ratekit/util.hpp"

#include <algorithm>
#include <set>

namespace ratekit {

namespace {

int sign_of(int v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

std::vector<double> totals_by_conditions(const ScoreTable& table,
                                         const std::vector<std::string>& condition_ids,
                                         const std::string& total_column) {
    std::vector<double> out;
    for (const auto& id : condition_ids) {
        out.push_back(table.value_of(id, total_column));
    }
    return out;
}

EffectSizeResult total_effect_for(const ScoreTable& with_total, const Study& study,
                                  const std::string& total_column) {
    const auto pairs = corresponding_pairs(study);
    std::vector<std::string> transfer_ids;
    std::vector<std::string> nt_ids;
    for (const auto& p : pairs) {
        transfer_ids.push_back(p.transfer_condition);
        nt_ids.push_back(p.non_transfer_condition);
    }
    return cohens_d(totals_by_conditions(with_total, transfer_ids, total_column),
                    totals_by_conditions(with_total, nt_ids, total_column));
}

// Cell values are rendered signed for ternary scales, plain otherwise.
std::string render_value(int value, const ScaleKind& scale) {
    if (scale.type == ScaleType::TernaryDirectional) return format_signed(value);
    return std::to_string(value);
}

std::string condition_label_word(const Condition& c) {
    return c.label == Label::Transfer ? "Transfer" : "Non-transfer";
}

} // namespace

// ---------------------------------------------------------------------------
// Subscale table
// ---------------------------------------------------------------------------

MasaReport build_masa_table(const ScoreTable& subscales, const Study& study,
                            const Codebook& masa_cb) {
    // with_total_column fails loudly if any subscale column is missing.
    for (const auto& g : masa_cb.total_groups) {
        for (const auto& member : g.members) {
            if (std::find(subscales.indicator_ids.begin(), subscales.indicator_ids.end(),
                          member) == subscales.indicator_ids.end()) {
                fail(ErrorCode::Validation, "missing subscale column '" + member + "'");
            }
        }
    }
    MasaReport report;
    report.table = with_total_column(subscales, masa_cb, "total", "Total");
    // Effect size first: degenerate all-equal input should surface as the
    // zero-variance error, not as a ratio-denominator complaint.
    report.total_effect = total_effect_for(report.table, study, "Total");
    report.stats = group_stats(report.table, study);
    return report;
}

// ---------------------------------------------------------------------------
// Profile tables
// ---------------------------------------------------------------------------

ProfileTables build_profile_tables(const ConsensusTable& consensus, const Study& study) {
    return {consensus, paired_differences(consensus, study)};
}

ScoreTable score_table_from_consensus(const ConsensusTable& consensus,
                                      const Study& study,
                                      const std::string& codebook_id) {
    ScoreTable table;
    table.codebook_id = codebook_id;
    table.indicator_ids = consensus.indicator_ids;
    std::set<std::string> covered;
    for (std::size_t d = 0; d < consensus.document_ids.size(); ++d) {
        const DialogueDocument* doc = study.find_document(consensus.document_ids[d]);
        if (!doc) {
            fail(ErrorCode::Validation, "consensus document '" +
                                            consensus.document_ids[d] +
                                            "' is not in the study corpus");
        }
        if (!covered.insert(doc->condition_id).second) {
            fail(ErrorCode::Validation, "condition '" + doc->condition_id +
                                            "' has multiple consensus documents");
        }
        ScoreTable::Row row;
        row.condition_id = doc->condition_id;
        for (std::size_t i = 0; i < consensus.indicator_ids.size(); ++i) {
            row.values.push_back(consensus.at(d, i));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

// ---------------------------------------------------------------------------
// Sensitivity
// ---------------------------------------------------------------------------

SensitivityReport sensitivity_compare(const ConsensusTable& a, const ConsensusTable& b,
                                      const Study& study,
                                      const std::vector<FindingSpec>& findings) {
    if (a.document_ids != b.document_ids || a.indicator_ids != b.indicator_ids) {
        fail(ErrorCode::Validation,
             "consensus tables cover different (document, indicator) cells");
    }

    SensitivityReport report;
    report.set_a = a.coder_set_id;
    report.set_b = b.coder_set_id;

    for (std::size_t d = 0; d < a.document_ids.size(); ++d) {
        for (std::size_t i = 0; i < a.indicator_ids.size(); ++i) {
            const int va = a.at(d, i);
            const int vb = b.at(d, i);
            if (va != vb) {
                report.differing_cells.push_back(
                    {a.document_ids[d], a.indicator_ids[i], va, vb});
            }
        }
    }

    const PairedDiffTable diffs_a = paired_differences(a, study);
    const PairedDiffTable diffs_b = paired_differences(b, study);
    for (const auto& row : diffs_a.rows) {
        for (std::size_t i = 0; i < diffs_a.indicator_ids.size(); ++i) {
            const std::string& indicator = diffs_a.indicator_ids[i];
            const int da = row.diffs[i];
            const int db = diffs_b.diff_of(row.family, indicator);
            report.directions.push_back(
                {row.family, indicator, da, db, sign_of(da) == sign_of(db)});
        }
    }

    for (const auto& spec : findings) {
        FindingCheck check;
        check.spec = spec;
        check.holds_a = true;
        check.holds_b = true;
        for (const auto& family : spec.families) {
            if (sign_of(diffs_a.diff_of(family, spec.indicator_id)) != spec.expected_sign) {
                check.holds_a = false;
            }
            if (sign_of(diffs_b.diff_of(family, spec.indicator_id)) != spec.expected_sign) {
                check.holds_b = false;
            }
        }
        report.findings.push_back(std::move(check));
    }
    return report;
}

std::vector<FindingSpec> bundled_profile_findings() {
    return {
        {"SU_dir paired diffs positive in all families",
         "SU_dir",
         {"Sonnet 4.5", "GPT-5.4", "Gemini 3"},
         1},
        {"LA_dir paired diffs positive in two families",
         "LA_dir",
         {"Sonnet 4.5", "GPT-5.4"},
         1},
    };
}

// ---------------------------------------------------------------------------
// Tutoring tables
// ---------------------------------------------------------------------------

TutoringReport build_tutoring_tables(const ScoreTable& tutoring_scores,
                                     const ScoreTable& dialogue_scores,
                                     const Study& study, const Codebook& tutoring_cb,
                                     const Codebook& dialogue_cb) {
    TutoringReport report;
    report.tutoring = with_total_column(tutoring_scores, tutoring_cb, "total", "Total");
    report.dialogue = with_total_column(dialogue_scores, dialogue_cb, "total", "Total");
    report.tutoring_stats = group_stats(report.tutoring, study);
    report.dialogue_stats = group_stats(report.dialogue, study);
    report.tutoring_effect = total_effect_for(report.tutoring, study, "Total");
    report.dialogue_effect = total_effect_for(report.dialogue, study, "Total");
    report.tutoring_diffs = paired_differences(report.tutoring, study);

    // Correlations across every condition present in both tables (reference
    // conditions included): dialogue indicator vs tutoring total.
    std::vector<double> tutoring_totals;
    for (const auto& row : report.dialogue.rows) {
        tutoring_totals.push_back(report.tutoring.value_of(row.condition_id, "Total"));
    }
    for (const auto& indicator : dialogue_scores.indicator_ids) {
        std::vector<double> ys;
        for (const auto& row : report.dialogue.rows) {
            ys.push_back(row.values.at(report.dialogue.column_index(indicator)));
        }
        report.correlations.push_back({indicator, pearson_r2(tutoring_totals, ys)});
    }
    return report;
}

// ---------------------------------------------------------------------------
// Effect-size comparison table
// ---------------------------------------------------------------------------

std::vector<EffectCategoryRow> build_effect_table(
    const std::vector<PublishedEffectRow>& published, const MasaReport& masa,
    const TutoringReport& tutoring) {
    std::vector<EffectCategoryRow> rows;
    for (const auto& p : published) {
        EffectCategoryRow row;
        row.category = p.category;
        row.scale_range = p.scale_range;
        row.published_transfer_mean = p.transfer_mean;
        row.published_non_transfer_mean = p.non_transfer_mean;
        row.published_d = p.d;
        row.published_interpretation = p.interpretation;
        if (p.source == "masa") {
            row.recomputed = masa.total_effect;
        } else if (p.source == "tutoring") {
            row.recomputed = tutoring.tutoring_effect;
        } else if (p.source == "dialogue") {
            row.recomputed = tutoring.dialogue_effect;
        } else if (p.source == "self_narrative") {
            row.note = "raw data unavailable";
        } else {
            fail(ErrorCode::Schema, "unknown effect-row source '" + p.source + "'");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Heatmap
// ---------------------------------------------------------------------------

std::optional<int> HeatmapMatrix::cell(std::size_t row, std::size_t col) const {
    return cells.at(row * column_ids.size() + col);
}

HeatmapMatrix build_heatmap(const std::vector<PairedDiffTable>& groups) {
    HeatmapMatrix heatmap;
    std::set<std::string> seen_columns;
    std::set<std::string> seen_families;
    for (const auto& group : groups) {
        for (const auto& indicator : group.indicator_ids) {
            if (!seen_columns.insert(indicator).second) {
                fail(ErrorCode::Validation,
                     "duplicate heatmap column '" + indicator +
                         "'; rename group totals before merging");
            }
            heatmap.column_ids.push_back(indicator);
        }
        for (const auto& row : group.rows) {
            if (seen_families.insert(row.family).second) {
                heatmap.families.push_back(row.family);
            }
        }
    }
    if (heatmap.families.empty() || heatmap.column_ids.empty()) {
        fail(ErrorCode::Validation, "no pairable data for heatmap");
    }

    heatmap.cells.assign(heatmap.families.size() * heatmap.column_ids.size(),
                         std::nullopt);
    std::size_t column_offset = 0;
    for (const auto& group : groups) {
        for (const auto& row : group.rows) {
            const std::size_t r =
                static_cast<std::size_t>(std::find(heatmap.families.begin(),
                                                   heatmap.families.end(), row.family) -
                                         heatmap.families.begin());
            for (std::size_t i = 0; i < group.indicator_ids.size(); ++i) {
                heatmap.cells[r * heatmap.column_ids.size() + column_offset + i] =
                    row.diffs[i];
            }
        }
        column_offset += group.indicator_ids.size();
    }
    return heatmap;
}

// ---------------------------------------------------------------------------
// Agreement report
// ---------------------------------------------------------------------------

KappaReport build_kappa_report(const RatingMatrix& matrix, const Codebook& cb,
                               const KappaReportOptions& options) {
    const auto& coders = matrix.coders();
    if (coders.size() < 2) {
        fail(ErrorCode::Validation, "agreement report needs at least 2 coders");
    }

    std::vector<std::string> all_indicators = matrix.indicators();

    KappaReport report;
    report.threshold = options.exclusion_threshold;
    report.subset = options.indicator_subset_coders.empty()
                        ? coders
                        : options.indicator_subset_coders;

    for (std::size_t i = 0; i < coders.size(); ++i) {
        for (std::size_t j = i + 1; j < coders.size(); ++j) {
            report.pairs.push_back(
                {coders[i], coders[j],
                 pooled_kappa(matrix, coders[i], coders[j], all_indicators, cb)});
        }
    }

    // Per-indicator: mean pairwise kappa within the named subset; degenerate
    // pairs are excluded rather than counted as agreement.
    for (const auto& indicator : all_indicators) {
        KappaReport::IndicatorEntry entry;
        entry.indicator_id = indicator;
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < report.subset.size(); ++i) {
            for (std::size_t j = i + 1; j < report.subset.size(); ++j) {
                const KappaResult k = pooled_kappa(matrix, report.subset[i],
                                                   report.subset[j], {indicator}, cb);
                if (!k.degenerate) {
                    sum += k.kappa;
                    ++count;
                }
            }
        }
        entry.pair_count = count;
        if (count > 0) {
            entry.mean_pairwise = sum / static_cast<double>(count);
            entry.band = landis_koch(*entry.mean_pairwise);
        }
        report.per_indicator.push_back(std::move(entry));
    }

    for (const auto& coder : coders) {
        KappaReport::CoderEntry entry;
        entry.coder_id = coder;
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& pair : report.pairs) {
            if (pair.coder_a != coder && pair.coder_b != coder) continue;
            if (pair.pooled.degenerate) continue;
            sum += pair.pooled.kappa;
            ++count;
        }
        if (count > 0) {
            entry.mean_kappa = sum / static_cast<double>(count);
            entry.below_threshold = *entry.mean_kappa < options.exclusion_threshold;
        }
        report.coders.push_back(std::move(entry));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Renderers
// ---------------------------------------------------------------------------

Table render_masa_table(const MasaReport& report, const Study& study) {
    Table t;
    t.id = "masa_table";
    t.columns = {"Model"};
    for (const auto& id : report.table.indicator_ids) t.columns.push_back(id);
    t.columns.push_back("Condition");
    for (const auto& row : report.table.rows) {
        const Condition& c = study.require_condition(row.condition_id);
        std::vector<std::string> cells{c.family};
        for (int v : row.values) cells.push_back(std::to_string(v));
        cells.push_back(condition_label_word(c));
        t.add_row(std::move(cells));
    }
    return t;
}

Table render_group_stats(const GroupStats& stats, const std::string& table_id) {
    Table t;
    t.id = table_id;
    t.columns = {"indicator", "transfer_mean", "non_transfer_mean_paired",
                 "non_transfer_mean_all", "ratio"};
    for (const auto& row : stats.rows) {
        t.add_row({row.indicator_id, format_fixed(row.transfer_mean, 2),
                   format_fixed(row.non_transfer_mean_paired, 2),
                   format_fixed(row.non_transfer_mean_all, 2),
                   row.ratio_paired ? format_fixed(*row.ratio_paired, 2) : "n/a"});
    }
    return t;
}

Table render_consensus_table(const ConsensusTable& consensus, const Study& study,
                             const Codebook& cb, const std::string& table_id) {
    Table t;
    t.id = table_id;
    t.columns = {"Document"};
    for (const auto& id : consensus.indicator_ids) t.columns.push_back(id);
    for (std::size_t d = 0; d < consensus.document_ids.size(); ++d) {
        const DialogueDocument* doc = study.find_document(consensus.document_ids[d]);
        const std::string label =
            doc ? study.require_condition(doc->condition_id).display_name
                : consensus.document_ids[d];
        std::vector<std::string> cells{label};
        for (std::size_t i = 0; i < consensus.indicator_ids.size(); ++i) {
            cells.push_back(render_value(consensus.at(d, i),
                                         cb.require(consensus.indicator_ids[i]).scale));
        }
        t.add_row(std::move(cells));
    }
    return t;
}

Table render_diff_table(const PairedDiffTable& diffs, const std::string& table_id,
                        bool include_sum_row) {
    Table t;
    t.id = table_id;
    t.columns = {"Family"};
    for (const auto& id : diffs.indicator_ids) t.columns.push_back(id);
    for (const auto& row : diffs.rows) {
        std::vector<std::string> cells{row.family};
        for (int v : row.diffs) cells.push_back(format_signed(v));
        t.add_row(std::move(cells));
    }
    if (include_sum_row) {
        std::vector<std::string> cells{"Sum"};
        for (int v : diffs.column_sums()) cells.push_back(format_signed(v));
        t.add_row(std::move(cells));
    }
    return t;
}

Table render_direction_table(const SensitivityReport& report,
                             const std::vector<std::string>& indicator_ids) {
    Table t;
    t.id = "direction_consistency";
    t.columns = {"Family", "Indicator", "diff_" + report.set_a, "diff_" + report.set_b,
                 "consistent"};
    for (const auto& row : report.directions) {
        if (!indicator_ids.empty() &&
            std::find(indicator_ids.begin(), indicator_ids.end(), row.indicator_id) ==
                indicator_ids.end()) {
            continue;
        }
        t.add_row({row.family, row.indicator_id, format_signed(row.diff_a),
                   format_signed(row.diff_b), row.consistent ? "yes" : "no"});
    }
    return t;
}

Table render_differing_cells(const SensitivityReport& report) {
    Table t;
    t.id = "sensitivity_cells";
    t.columns = {"Document", "Indicator", "value_" + report.set_a,
                 "value_" + report.set_b};
    for (const auto& cell : report.differing_cells) {
        t.add_row({cell.document_id, cell.indicator_id, format_signed(cell.value_a),
                   format_signed(cell.value_b)});
    }
    return t;
}

Table render_score_table(const ScoreTable& scores, const Study& study,
                         const std::string& table_id) {
    Table t;
    t.id = table_id;
    t.columns = {"Condition"};
    for (const auto& id : scores.indicator_ids) t.columns.push_back(id);
    t.columns.push_back("Group");
    for (const auto& row : scores.rows) {
        const Condition& c = study.require_condition(row.condition_id);
        std::vector<std::string> cells{c.id};
        for (int v : row.values) cells.push_back(std::to_string(v));
        cells.push_back(condition_label_word(c));
        t.add_row(std::move(cells));
    }
    return t;
}

Table render_effect_table(const std::vector<EffectCategoryRow>& rows) {
    Table t;
    t.id = "effect_table";
    t.columns = {"Category",    "transfer_mean", "non_transfer_mean", "scale_range",
                 "published_d", "recomputed_d",  "interpretation",    "note"};
    for (const auto& row : rows) {
        const bool rec = row.recomputed.has_value();
        t.add_row({row.category,
                   format_fixed(rec ? row.recomputed->mean_a : row.published_transfer_mean, 2),
                   format_fixed(rec ? row.recomputed->mean_b : row.published_non_transfer_mean, 2),
                   row.scale_range, format_fixed(row.published_d, 2),
                   rec ? format_fixed(row.recomputed->d, 2) : "n/a",
                   rec ? effect_band_label(row.recomputed->band)
                       : row.published_interpretation,
                   row.note.empty() ? "recomputed from raw rows" : row.note});
    }
    return t;
}

Table render_correlation_table(const std::vector<CorrelationRow>& rows) {
    Table t;
    t.id = "correlations";
    t.columns = {"Indicator", "r_squared", "n"};
    for (const auto& row : rows) {
        t.add_row({row.indicator_id, format_fixed(row.corr.r_squared, 2),
                   std::to_string(row.corr.n)});
    }
    return t;
}

Table render_heatmap(const HeatmapMatrix& heatmap) {
    Table t;
    t.id = "heatmap";
    t.columns = {"Family"};
    for (const auto& id : heatmap.column_ids) t.columns.push_back(id);
    for (std::size_t r = 0; r < heatmap.families.size(); ++r) {
        std::vector<std::string> cells{heatmap.families[r]};
        for (std::size_t c = 0; c < heatmap.column_ids.size(); ++c) {
            const auto v = heatmap.cell(r, c);
            cells.push_back(v ? format_signed(*v) : "NA");
        }
        t.add_row(std::move(cells));
    }
    return t;
}

namespace {

std::string kappa_cell(const KappaResult& k) {
    return k.degenerate ? "n/a" : format_fixed(k.kappa, 2);
}

std::string band_cell(const KappaResult& k) {
    return k.degenerate ? "n/a" : agreement_band_label(*k.band);
}

} // namespace

Table render_kappa_pairs(const KappaReport& report) {
    Table t;
    t.id = "kappa_pairs";
    t.columns = {"coder_a", "coder_b", "kappa", "band", "n_items"};
    for (const auto& pair : report.pairs) {
        t.add_row({pair.coder_a, pair.coder_b, kappa_cell(pair.pooled),
                   band_cell(pair.pooled), std::to_string(pair.pooled.n_items)});
    }
    return t;
}

Table render_kappa_indicators(const KappaReport& report) {
    Table t;
    t.id = "kappa_indicators";
    t.columns = {"indicator", "mean_pairwise_kappa", "band", "pairs"};
    for (const auto& entry : report.per_indicator) {
        t.add_row({entry.indicator_id,
                   entry.mean_pairwise ? format_fixed(*entry.mean_pairwise, 2) : "n/a",
                   entry.band ? agreement_band_label(*entry.band) : "n/a",
                   std::to_string(entry.pair_count)});
    }
    return t;
}

Table render_kappa_coders(const KappaReport& report) {
    Table t;
    t.id = "kappa_coders";
    t.columns = {"coder", "mean_kappa", "below_threshold"};
    for (const auto& entry : report.coders) {
        t.add_row({entry.coder_id,
                   entry.mean_kappa ? format_fixed(*entry.mean_kappa, 2) : "n/a",
                   entry.below_threshold ? "yes" : "no"});
    }
    return t;
}

Table render_fixture_kappa_pairs(const std::vector<KappaPairFixture>& pairs,
                                 const std::vector<KappaGroupMeanFixture>& groups) {
    Table t;
    t.id = "kappa_pairs_published";
    t.columns = {"coder_a", "coder_b", "kappa", "band"};
    for (const auto& pair : pairs) {
        t.add_row({pair.coder_a, pair.coder_b, format_fixed(pair.kappa, 2),
                   agreement_band_label(landis_koch(pair.kappa))});
    }
    for (const auto& group : groups) {
        t.add_row({group.group, "(mean)", format_fixed(group.kappa, 2),
                   agreement_band_label(landis_koch(group.kappa))});
    }
    return t;
}

Table render_fixture_kappa_indicators(const std::vector<KappaIndicatorFixture>& rows) {
    Table t;
    t.id = "kappa_indicators_published";
    t.columns = {"indicator", "kappa", "band"};
    for (const auto& row : rows) {
        t.add_row({row.indicator, format_fixed(row.kappa, 2),
                   agreement_band_label(landis_koch(row.kappa))});
    }
    return t;
}

} // namespace ratekit
