#pragma once
// End-to-end orchestration shared by the CLI and the integration tests:
// judge-config parsing, the bounded-parallel judge run, run manifests, the
// stats bundle, and the one-shot reproduction of every bundled study table
// with its pass/fail ledger.

#include "ratekit/analysis.hpp"
#include "ratekit/codebook.hpp"
#include "ratekit/corpus.hpp"
#include "ratekit/fixtures.hpp"
#include "ratekit/judging.hpp"
#include "ratekit/table.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ratekit {

// ---------------------------------------------------------------------------
// Judge configuration
// ---------------------------------------------------------------------------

struct JudgeRunConfig {
    std::vector<JudgeProfile> profiles;
    int retries = 2;     // re-requests per malformed/failed response
    int parallelism = 1; // concurrent (coder, item) requests
    RatingMode mode = RatingMode::PerDocument;
};

// base_dir resolves relative fixture/template paths in the config file.
JudgeRunConfig parse_judge_config(const std::string& json_text, const std::string& origin,
                                  const std::string& base_dir);
JudgeRunConfig load_judge_config(const std::string& path);

// ---------------------------------------------------------------------------
// Run manifest
// ---------------------------------------------------------------------------

// Everything needed to replay a run; never contains secret material (auth
// env-var names are config, their values never leave the environment).
struct RunManifest {
    std::string run_id; // digest of (seed, input digests): replay identity
    std::string started_at;
    std::string finished_at;
    std::uint64_t seed = 0;
    std::string codebook_id;
    std::string codebook_version;
    struct CoderInfo {
        std::string coder_id;
        std::string backend_kind; // "scripted" | "external"
        std::string endpoint;     // external only
        std::string model;        // external only
        std::string auth_env;     // env var NAME, external only
        double temperature = 0.0;
        std::string fixture; // scripted only
    };
    std::vector<CoderInfo> coders;
    int retries = 2;
    int parallelism = 1;
    std::string mode;
    struct InputDigest {
        std::string label;
        std::string fnv1a64_hex;
    };
    std::vector<InputDigest> input_digests;
    int total_retries = 0;
    std::size_t failed_cells = 0;
};

std::string serialize_manifest(const RunManifest& manifest);
std::string iso_utc_now();
std::string digest_hex(std::string_view bytes);

// ---------------------------------------------------------------------------
// Judge pipeline
// ---------------------------------------------------------------------------

struct JudgePipelineResult {
    BlindingResult blinding;
    std::vector<RatingRecord> records;
    std::vector<ItemFailure> failures;
    int total_retries = 0;
};

// Blinds the study's documents with the seed, then rates every (coder, item)
// pair, fanning out over a bounded worker pool. Dispatch order is coder-major
// in each coder's own presentation order; aggregation is deterministic
// regardless of completion order.
JudgePipelineResult run_judge_pipeline(const Study& study, const Codebook& cb,
                                       const JudgeRunConfig& config, std::uint64_t seed);

std::string serialize_failures(const std::vector<ItemFailure>& failures);

// ---------------------------------------------------------------------------
// Stats bundle
// ---------------------------------------------------------------------------

struct CoderSetSpec {
    std::string set_id; // e.g. "3C"
    std::vector<std::string> coder_ids;
};

struct StatsBundle {
    struct PerSet {
        CoderSetSpec spec;
        ConsensusTable consensus;
        std::optional<PairedDiffTable> diffs; // needs corresponding pairs
    };
    std::vector<PerSet> sets;
    std::optional<KappaReport> kappa; // absent (with warning) for one coder
    std::vector<std::string> warnings;
};

StatsBundle build_stats_bundle(const RatingMatrix& matrix, const Study& study,
                               const Codebook& cb,
                               const std::vector<CoderSetSpec>& sets);

// ---------------------------------------------------------------------------
// Reproduction
// ---------------------------------------------------------------------------

struct LedgerEntry {
    enum class Status { Pass, Fail, Skip };
    std::string name;
    Status status = Status::Pass;
    std::string detail;
};

struct ReproduceResult {
    std::vector<LedgerEntry> entries;
    std::vector<Table> tables;

    bool ok() const;
    std::size_t failed_count() const;
    std::string ledger_text() const; // deterministic; no timestamps
    std::vector<std::string> failed_names() const;
};

// Rebuilds every in-scope table from the fixtures, recomputes every
// derivable statistic, and compares against the published values at the
// pinned tolerances.
ReproduceResult run_reproduce(const PaperFixtures& fixtures);

} // namespace ratekit
