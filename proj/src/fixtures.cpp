#include "ratekit/fixtures.hpp"

#include "ratekit/embedded_data.hpp"
#include "ratekit/error.hpp"
#include "ratekit/util.hpp"

#include <json.hpp>

using nlohmann::ordered_json;

namespace ratekit {

namespace {

ordered_json parse_json(const std::string& text, const std::string& origin) {
    try {
        return ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        fail(ErrorCode::Parse, origin + ": " + e.what());
    }
}

ScoreFixture parse_score_fixture(const std::string& text, const std::string& origin) {
    const ordered_json j = parse_json(text, origin);
    ScoreFixture fixture;
    try {
        fixture.fixture_id = j.at("fixture_id").get<std::string>();
        fixture.scores.codebook_id = j.at("codebook").get<std::string>();
        for (const auto& ind : j.at("indicators")) {
            fixture.scores.indicator_ids.push_back(ind.get<std::string>());
        }
        for (const auto& jr : j.at("rows")) {
            ScoreTable::Row row;
            row.condition_id = jr.at("condition").get<std::string>();
            for (const auto& v : jr.at("values")) row.values.push_back(v.get<int>());
            if (row.values.size() != fixture.scores.indicator_ids.size()) {
                fail(ErrorCode::Schema, origin + ": row '" + row.condition_id +
                                            "' has the wrong number of values");
            }
            fixture.scores.rows.push_back(std::move(row));
            fixture.published_totals.push_back(jr.at("published_total").get<int>());
        }
    } catch (const ordered_json::exception& e) {
        fail(ErrorCode::Schema, origin + ": " + e.what());
    }
    return fixture;
}

ConsensusTable parse_consensus_fixture(const std::string& text, const std::string& origin) {
    const ordered_json j = parse_json(text, origin);
    ConsensusTable table;
    try {
        table.coder_set_id = j.at("coder_set").get<std::string>();
        for (const auto& ind : j.at("indicators")) {
            table.indicator_ids.push_back(ind.get<std::string>());
        }
        for (const auto& jr : j.at("rows")) {
            table.document_ids.push_back(jr.at("document").get<std::string>());
            const auto& values = jr.at("values");
            if (values.size() != table.indicator_ids.size()) {
                fail(ErrorCode::Schema, origin + ": row '" + table.document_ids.back() +
                                            "' has the wrong number of values");
            }
            for (const auto& v : values) table.values.push_back(v.get<int>());
        }
    } catch (const ordered_json::exception& e) {
        fail(ErrorCode::Schema, origin + ": " + e.what());
    }
    return table;
}

PairedDiffTable parse_diff_fixture(const std::string& text, const std::string& origin) {
    const ordered_json j = parse_json(text, origin);
    PairedDiffTable table;
    try {
        for (const auto& ind : j.at("indicators")) {
            table.indicator_ids.push_back(ind.get<std::string>());
        }
        for (const auto& jr : j.at("rows")) {
            PairedDiffRow row;
            row.family = jr.at("family").get<std::string>();
            for (const auto& v : jr.at("diffs")) row.diffs.push_back(v.get<int>());
            if (row.diffs.size() != table.indicator_ids.size()) {
                fail(ErrorCode::Schema, origin + ": row '" + row.family +
                                            "' has the wrong number of diffs");
            }
            table.rows.push_back(std::move(row));
        }
    } catch (const ordered_json::exception& e) {
        fail(ErrorCode::Schema, origin + ": " + e.what());
    }
    return table;
}

std::vector<double> parse_double_array(const ordered_json& j) {
    std::vector<double> out;
    for (const auto& v : j) out.push_back(v.get<double>());
    return out;
}

MasaPublished parse_masa_published(const ordered_json& j) {
    MasaPublished p;
    p.transfer_total_mean = j.at("transfer_total_mean").get<double>();
    p.non_transfer_total_mean_paired = j.at("non_transfer_total_mean_paired").get<double>();
    p.non_transfer_total_mean_all = j.at("non_transfer_total_mean_all").get<double>();
    p.sr_transfer_mean = j.at("sr_transfer_mean").get<double>();
    p.sr_non_transfer_mean_all = j.at("sr_non_transfer_mean_all").get<double>();
    p.decentration_mean_diff = j.at("decentration_mean_diff").get<double>();
    p.d = j.at("d").get<double>();
    p.interpretation = j.at("interpretation").get<std::string>();
    return p;
}

TutoringPublished parse_tutoring_published(const ordered_json& j) {
    TutoringPublished p;
    p.transfer_means = parse_double_array(j.at("transfer_means"));
    p.non_transfer_means_paired = parse_double_array(j.at("non_transfer_means_paired"));
    p.non_transfer_means_all = parse_double_array(j.at("non_transfer_means_all"));
    p.transfer_total_mean = j.at("transfer_total_mean").get<double>();
    p.non_transfer_total_mean_paired = j.at("non_transfer_total_mean_paired").get<double>();
    p.non_transfer_total_mean_all = j.at("non_transfer_total_mean_all").get<double>();
    p.ratios = parse_double_array(j.at("ratios"));
    p.mean_ratio = j.at("mean_ratio").get<double>();
    p.paired_total_diff_sum = j.at("paired_total_diff_sum").get<int>();
    p.d = j.at("d").get<double>();
    p.interpretation = j.at("interpretation").get<std::string>();
    return p;
}

DialoguePublished parse_dialogue_published(const ordered_json& j) {
    DialoguePublished p;
    p.transfer_means = parse_double_array(j.at("transfer_means"));
    p.non_transfer_means_paired = parse_double_array(j.at("non_transfer_means_paired"));
    p.non_transfer_means_all = parse_double_array(j.at("non_transfer_means_all"));
    p.transfer_total_mean = j.at("transfer_total_mean").get<double>();
    p.non_transfer_total_mean_paired = j.at("non_transfer_total_mean_paired").get<double>();
    p.non_transfer_total_mean_all = j.at("non_transfer_total_mean_all").get<double>();
    p.mc_transfer_mean = j.at("mc_transfer_mean").get<double>();
    p.mc_non_transfer_mean_paired = j.at("mc_non_transfer_mean_paired").get<double>();
    p.d = j.at("d").get<double>();
    p.interpretation = j.at("interpretation").get<std::string>();
    return p;
}

struct FixtureSources {
    std::string profile_cb, masa_cb, tutoring_cb, dialogue_cb;
    std::string profile_study, tutoring_study;
    std::string masa_table1, profile_a1, profile_a2, profile_diffs;
    std::string tutoring_table5, dialogue_table7;
    std::string kappa_b1, kappa_b2, effects, correlations;
};

PaperFixtures build_fixtures(const FixtureSources& src, const std::string& origin_prefix) {
    auto origin = [&](const char* name) { return origin_prefix + name; };

    PaperFixtures f;
    f.profile_cb = parse_codebook(src.profile_cb, origin("cognitive-profile-7.json"));
    f.masa_cb = parse_codebook(src.masa_cb, origin("masa.json"));
    f.tutoring_cb = parse_codebook(src.tutoring_cb, origin("tutoring-context-3.json"));
    f.dialogue_cb = parse_codebook(src.dialogue_cb, origin("dialogue-promotion-7.json"));
    f.profile_study = parse_study(src.profile_study, origin("profile_study.json"));
    f.tutoring_study = parse_study(src.tutoring_study, origin("tutoring_study.json"));

    {
        const ordered_json j = parse_json(src.masa_table1, origin("masa_table1.json"));
        f.masa = parse_score_fixture(src.masa_table1, origin("masa_table1.json"));
        f.masa_published = parse_masa_published(j.at("published"));
    }
    f.profile_3c = parse_consensus_fixture(src.profile_a1, origin("profile_a1.json"));
    f.profile_4c = parse_consensus_fixture(src.profile_a2, origin("profile_a2.json"));
    f.profile_diffs_published =
        parse_diff_fixture(src.profile_diffs, origin("profile_diffs_published.json"));
    {
        const ordered_json j = parse_json(src.tutoring_table5, origin("tutoring_table5.json"));
        f.tutoring = parse_score_fixture(src.tutoring_table5, origin("tutoring_table5.json"));
        f.tutoring_published = parse_tutoring_published(j.at("published"));
    }
    {
        const ordered_json j = parse_json(src.dialogue_table7, origin("dialogue_table7.json"));
        f.dialogue = parse_score_fixture(src.dialogue_table7, origin("dialogue_table7.json"));
        f.dialogue_published = parse_dialogue_published(j.at("published"));
    }
    {
        const ordered_json j = parse_json(src.kappa_b1, origin("kappa_b1.json"));
        try {
            for (const auto& jp : j.at("pairs")) {
                f.kappa_pairs.push_back({jp.at("coder_a").get<std::string>(),
                                         jp.at("coder_b").get<std::string>(),
                                         jp.at("kappa").get<double>(),
                                         jp.at("interpretation").get<std::string>()});
            }
            for (const auto& jg : j.at("group_means")) {
                f.kappa_group_means.push_back({jg.at("group").get<std::string>(),
                                               jg.at("kappa").get<double>(),
                                               jg.at("interpretation").get<std::string>()});
            }
            for (const auto& jc : j.at("coder_means")) {
                f.kappa_coder_means.push_back({jc.at("coder").get<std::string>(),
                                               jc.at("mean_kappa").get<double>()});
            }
        } catch (const ordered_json::exception& e) {
            fail(ErrorCode::Schema, origin("kappa_b1.json") + ": " + e.what());
        }
    }
    {
        const ordered_json j = parse_json(src.kappa_b2, origin("kappa_b2.json"));
        try {
            for (const auto& ji : j.at("indicators")) {
                f.kappa_indicators.push_back({ji.at("indicator").get<std::string>(),
                                              ji.at("kappa").get<double>(),
                                              ji.at("interpretation").get<std::string>()});
            }
        } catch (const ordered_json::exception& e) {
            fail(ErrorCode::Schema, origin("kappa_b2.json") + ": " + e.what());
        }
    }
    {
        const ordered_json j = parse_json(src.effects, origin("effects_table6.json"));
        try {
            for (const auto& jr : j.at("rows")) {
                f.effect_rows.push_back({jr.at("category").get<std::string>(),
                                         jr.at("source").get<std::string>(),
                                         jr.at("transfer_mean").get<double>(),
                                         jr.at("non_transfer_mean").get<double>(),
                                         jr.at("scale_range").get<std::string>(),
                                         jr.at("d").get<double>(),
                                         jr.at("interpretation").get<std::string>(),
                                         jr.at("raw_rows_available").get<bool>()});
            }
        } catch (const ordered_json::exception& e) {
            fail(ErrorCode::Schema, origin("effects_table6.json") + ": " + e.what());
        }
    }
    {
        const ordered_json j = parse_json(src.correlations, origin("correlations_published.json"));
        try {
            f.correlations.cd = j.at("r_squared").at("CD").get<double>();
            f.correlations.q = j.at("r_squared").at("Q").get<double>();
            f.correlations.mc = j.at("r_squared").at("MC").get<double>();
            f.correlations.others_low = j.at("others_range").at("low").get<double>();
            f.correlations.others_high = j.at("others_range").at("high").get<double>();
        } catch (const ordered_json::exception& e) {
            fail(ErrorCode::Schema, origin("correlations_published.json") + ": " + e.what());
        }
    }
    return f;
}

FixtureSources embedded_sources() {
    FixtureSources src;
    src.profile_cb = std::string(embedded::data_codebooks_cognitive_profile_7_json);
    src.masa_cb = std::string(embedded::data_codebooks_masa_json);
    src.tutoring_cb = std::string(embedded::data_codebooks_tutoring_context_3_json);
    src.dialogue_cb = std::string(embedded::data_codebooks_dialogue_promotion_7_json);
    src.profile_study = std::string(embedded::data_corpus_profile_study_json);
    src.tutoring_study = std::string(embedded::data_corpus_tutoring_study_json);
    src.masa_table1 = std::string(embedded::data_fixtures_masa_table1_json);
    src.profile_a1 = std::string(embedded::data_fixtures_profile_a1_json);
    src.profile_a2 = std::string(embedded::data_fixtures_profile_a2_json);
    src.profile_diffs = std::string(embedded::data_fixtures_profile_diffs_published_json);
    src.tutoring_table5 = std::string(embedded::data_fixtures_tutoring_table5_json);
    src.dialogue_table7 = std::string(embedded::data_fixtures_dialogue_table7_json);
    src.kappa_b1 = std::string(embedded::data_fixtures_kappa_b1_json);
    src.kappa_b2 = std::string(embedded::data_fixtures_kappa_b2_json);
    src.effects = std::string(embedded::data_fixtures_effects_table6_json);
    src.correlations = std::string(embedded::data_fixtures_correlations_published_json);
    return src;
}

} // namespace

PaperFixtures load_paper_fixtures() {
    return build_fixtures(embedded_sources(), "embedded:");
}

PaperFixtures load_paper_fixtures_from_dir(const std::string& dir) {
    FixtureSources src = embedded_sources();
    // Codebooks and studies stay embedded; the per-table fixture files are
    // read from the directory so edited copies take effect.
    src.masa_table1 = read_text_file(dir + "/masa_table1.json");
    src.profile_a1 = read_text_file(dir + "/profile_a1.json");
    src.profile_a2 = read_text_file(dir + "/profile_a2.json");
    src.profile_diffs = read_text_file(dir + "/profile_diffs_published.json");
    src.tutoring_table5 = read_text_file(dir + "/tutoring_table5.json");
    src.dialogue_table7 = read_text_file(dir + "/dialogue_table7.json");
    src.kappa_b1 = read_text_file(dir + "/kappa_b1.json");
    src.kappa_b2 = read_text_file(dir + "/kappa_b2.json");
    src.effects = read_text_file(dir + "/effects_table6.json");
    src.correlations = read_text_file(dir + "/correlations_published.json");
    return build_fixtures(src, dir + "/");
}

const Codebook& bundled_codebook(const std::string& id) {
    static const PaperFixtures fixtures = load_paper_fixtures();
    if (id == fixtures.profile_cb.id) return fixtures.profile_cb;
    if (id == fixtures.masa_cb.id) return fixtures.masa_cb;
    if (id == fixtures.tutoring_cb.id) return fixtures.tutoring_cb;
    if (id == fixtures.dialogue_cb.id) return fixtures.dialogue_cb;
    fail(ErrorCode::Validation, "no bundled codebook with id '" + id + "'");
}

const Study& bundled_profile_study() {
    static const Study study = load_paper_fixtures().profile_study;
    return study;
}

const Study& bundled_tutoring_study() {
    static const Study study = load_paper_fixtures().tutoring_study;
    return study;
}

} // namespace ratekit
