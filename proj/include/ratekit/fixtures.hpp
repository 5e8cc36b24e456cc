#pragma once
// Bundled study fixtures: the published per-condition score tables, consensus
// tables and agreement values, version-pinned and compiled into the binary.
// A directory override exists so integrity checks can run against edited
// copies without a rebuild.

#include "ratekit/codebook.hpp"
#include "ratekit/corpus.hpp"
#include "ratekit/stats.hpp"

#include <string>
#include <vector>

namespace ratekit {

// Score table plus the published row totals it must stay consistent with.
struct ScoreFixture {
    std::string fixture_id;
    ScoreTable scores;
    std::vector<int> published_totals; // aligned with scores.rows
};

struct MasaPublished {
    double transfer_total_mean = 0.0;
    double non_transfer_total_mean_paired = 0.0;
    double non_transfer_total_mean_all = 0.0;
    double sr_transfer_mean = 0.0;
    double sr_non_transfer_mean_all = 0.0;
    double decentration_mean_diff = 0.0;
    double d = 0.0;
    std::string interpretation;
};

struct TutoringPublished {
    std::vector<double> transfer_means;
    std::vector<double> non_transfer_means_paired;
    std::vector<double> non_transfer_means_all;
    double transfer_total_mean = 0.0;
    double non_transfer_total_mean_paired = 0.0;
    double non_transfer_total_mean_all = 0.0;
    std::vector<double> ratios;
    double mean_ratio = 0.0;
    int paired_total_diff_sum = 0;
    double d = 0.0;
    std::string interpretation;
};

struct DialoguePublished {
    std::vector<double> transfer_means;
    std::vector<double> non_transfer_means_paired;
    std::vector<double> non_transfer_means_all;
    double transfer_total_mean = 0.0;
    double non_transfer_total_mean_paired = 0.0;
    double non_transfer_total_mean_all = 0.0;
    double mc_transfer_mean = 0.0;
    double mc_non_transfer_mean_paired = 0.0;
    double d = 0.0;
    std::string interpretation;
};

// Published agreement values. These are fixture *inputs* exercising banding
// and report formatting; the raw per-coder ratings behind them are not
// published, so they are never recomputed.
struct KappaPairFixture {
    std::string coder_a;
    std::string coder_b;
    double kappa = 0.0;
    std::string interpretation;
};

struct KappaGroupMeanFixture {
    std::string group;
    double kappa = 0.0;
    std::string interpretation;
};

struct KappaCoderMeanFixture {
    std::string coder;
    double mean_kappa = 0.0;
};

struct KappaIndicatorFixture {
    std::string indicator;
    double kappa = 0.0;
    std::string interpretation;
};

struct PublishedEffectRow {
    std::string category;
    std::string source; // masa | self_narrative | dialogue | tutoring
    double transfer_mean = 0.0;
    double non_transfer_mean = 0.0;
    std::string scale_range;
    double d = 0.0;
    std::string interpretation;
    bool raw_rows_available = false;
};

struct PublishedCorrelations {
    double cd = 0.0;
    double q = 0.0;
    double mc = 0.0;
    double others_low = 0.0;
    double others_high = 0.0;
};

struct PaperFixtures {
    Codebook profile_cb;
    Codebook masa_cb;
    Codebook tutoring_cb;
    Codebook dialogue_cb;

    Study profile_study;
    Study tutoring_study;

    ScoreFixture masa;
    MasaPublished masa_published;

    ConsensusTable profile_3c; // by document, over the profile study
    ConsensusTable profile_4c;
    PairedDiffTable profile_diffs_published;

    ScoreFixture tutoring;
    TutoringPublished tutoring_published;
    ScoreFixture dialogue;
    DialoguePublished dialogue_published;

    std::vector<KappaPairFixture> kappa_pairs;
    std::vector<KappaGroupMeanFixture> kappa_group_means;
    std::vector<KappaCoderMeanFixture> kappa_coder_means;
    std::vector<KappaIndicatorFixture> kappa_indicators;

    std::vector<PublishedEffectRow> effect_rows;
    PublishedCorrelations correlations;
};

// Compiled-in fixtures (the bundled data files, embedded at build time).
PaperFixtures load_paper_fixtures();

// Same schema loaded from a directory with the canonical file names
// (masa_table1.json, profile_a1.json, ...). Used for integrity testing.
PaperFixtures load_paper_fixtures_from_dir(const std::string& dir);

// Embedded copies of the bundled codebooks and study files, for consumers
// that need them without touching the filesystem.
const Codebook& bundled_codebook(const std::string& id); // by codebook id
const Study& bundled_profile_study();
const Study& bundled_tutoring_study();

} // namespace ratekit
