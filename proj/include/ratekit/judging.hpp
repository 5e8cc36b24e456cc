#pragma once
// Judge orchestration: prompt rendering, backend dispatch (HTTP
// chat-completion endpoints or scripted fixtures), strict output parsing,
// coder qualification against a gold set, and session bookkeeping. Every
// item is rated in a fresh request that carries no other item's content and
// no other coder's output.

#include "ratekit/codebook.hpp"
#include "ratekit/corpus.hpp"
#include "ratekit/ratings.hpp"
#include "ratekit/stats.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ratekit {

// ---------------------------------------------------------------------------
// Profiles and backends
// ---------------------------------------------------------------------------

enum class BackendKind { External, Scripted };
enum class RatingMode { PerDocument, PerIndicator };

struct ExternalBackendConfig {
    std::string endpoint;   // chat-completion style HTTP endpoint
    std::string model;
    std::string auth_env;   // env var holding the bearer token; never the token
    double temperature = 0.0;
    int timeout_seconds = 30;
};

struct ScriptedBackendConfig {
    std::string fixture_path;
};

struct JudgeProfile {
    std::string coder_id;
    BackendKind kind = BackendKind::Scripted;
    ExternalBackendConfig external;
    ScriptedBackendConfig scripted;
    std::optional<std::string> prompt_template; // defaults to the built-in
};

// One backend call: everything the judge sees for one rating request.
struct RatingRequest {
    std::string blinded_id;
    std::vector<std::string> indicator_ids; // the indicators this request covers
    std::string prompt;
};

// Abstract judge endpoint. complete() returns the raw judge output for one
// request; implementations must be stateless across calls (session
// independence is enforced structurally: each call gets only one item).
class JudgeBackend {
public:
    virtual ~JudgeBackend() = default;
    virtual std::string complete(const RatingRequest& request) = 0;
};

// Replays a fixture mapping (blinded_id, indicator_id) -> (value, rationale).
// Output is shaped like a real judge response so the normal parse path runs.
class ScriptedBackend : public JudgeBackend {
public:
    explicit ScriptedBackend(const std::string& fixture_path);
    static std::unique_ptr<ScriptedBackend> from_json(const std::string& json_text,
                                                      const std::string& origin);
    std::string complete(const RatingRequest& request) override;

private:
    struct Cell {
        int value;
        std::string rationale;
    };
    ScriptedBackend() = default;
    // blinded_id -> indicator -> cell
    std::map<std::string, std::map<std::string, Cell>> cells_;
    std::string origin_;
};

// POSTs the rendered prompt to a chat-completion style endpoint. The auth
// token is read from the env var named in the profile at construction time.
class ExternalBackend : public JudgeBackend {
public:
    explicit ExternalBackend(const ExternalBackendConfig& config);
    std::string complete(const RatingRequest& request) override;

private:
    ExternalBackendConfig config_;
    std::string auth_token_;
};

std::unique_ptr<JudgeBackend> make_backend(const JudgeProfile& profile);

// ---------------------------------------------------------------------------
// Prompt rendering and output parsing
// ---------------------------------------------------------------------------

// The built-in instruction template. Placeholders: {{item_id}},
// {{indicator_count}}, {{indicators}}, {{transcript}}, {{response_schema}}.
const std::string& default_prompt_template();

// Renders instructions for one blinded item: every requested indicator's
// definition and anchors, the item's turns, and the required structured
// output schema. Contains no condition metadata. Unresolved placeholders and
// empty indicator lists are errors. indicator_ids defaults to the whole
// codebook.
std::string render_prompt(const Codebook& cb, const BlindedItem& item,
                          const std::string& template_text,
                          const std::vector<std::string>& indicator_ids = {});

struct ParsedRating {
    std::string indicator_id;
    int value = 0;
    std::string rationale;
};

// Strict parse of the judge output schema: a JSON object whose "ratings"
// array has exactly one entry per expected indicator, each with an integer
// value inside the indicator's scale. Markdown code fences around the JSON
// are tolerated (LLM output hygiene); everything else is not.
std::vector<ParsedRating> parse_judge_output(const std::string& raw, const Codebook& cb,
                                             const std::vector<std::string>& expected_indicators);

std::vector<ParsedRating> parse_judge_output(const std::string& raw, const Codebook& cb);

// ---------------------------------------------------------------------------
// Rating sessions
// ---------------------------------------------------------------------------

struct SessionOptions {
    int retry_limit = 2; // re-requests per malformed/failed response
    RatingMode mode = RatingMode::PerDocument;
    // Presentation order: seed-derived permutation independent per coder.
    std::optional<std::uint64_t> presentation_seed;
};

struct ItemFailure {
    std::string coder_id;
    std::string blinded_id;
    std::string message;
};

struct SessionResult {
    std::vector<RatingRecord> records;
    std::vector<ItemFailure> failures;
    int total_retries = 0;
};

// Rates one item (one request in per-document mode, one per indicator
// otherwise). The unit the pipeline fans out over.
struct ItemOutcome {
    std::vector<RatingRecord> records;
    std::optional<std::string> error;
    int retries_used = 0;
};

ItemOutcome rate_item(const JudgeProfile& profile, JudgeBackend& backend,
                      const BlindedItem& item, const Codebook& cb,
                      const SessionOptions& options);

// Rates every item with one coder. Each (item[, indicator]) is a fresh
// request; malformed output or transport failure is re-requested up to the
// retry limit, then recorded as a per-item failure.
SessionResult run_rating_session(const JudgeProfile& profile, JudgeBackend& backend,
                                 const std::vector<BlindedItem>& items,
                                 const Codebook& cb, const SessionOptions& options);

// ---------------------------------------------------------------------------
// Qualification
// ---------------------------------------------------------------------------

struct GoldRating {
    std::string blinded_id;
    std::string indicator_id;
    int value = 0;
};

struct GoldSet {
    std::vector<BlindedItem> items;
    std::vector<GoldRating> ratings;
};

GoldSet parse_gold_set(const std::string& json_text, const std::string& origin);
GoldSet load_gold_set(const std::string& path);

struct QualificationResult {
    std::string coder_id;
    struct IndicatorKappa {
        std::string indicator_id;
        KappaResult kappa;
    };
    std::vector<IndicatorKappa> per_indicator;
    // Mean over non-degenerate per-indicator kappas (degenerate agreement is
    // never counted as 1.0).
    double mean_kappa = 0.0;
    double threshold = 0.0;
    bool pass = false; // mean_kappa >= threshold (inclusive)
};

// Runs a rating session over the gold items and scores the coder against the
// gold values. Gold must be nonempty and cover >= 2 distinct values overall.
QualificationResult qualify_coder(const JudgeProfile& profile, JudgeBackend& backend,
                                  const GoldSet& gold, const Codebook& cb,
                                  double threshold, const SessionOptions& options);

} // namespace ratekit
