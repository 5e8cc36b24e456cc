#include "ratekit/judging.hpp"

#include "ratekit/error.hpp"
#include "ratekit/util.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

using nlohmann::ordered_json;

namespace ratekit {

namespace {

constexpr std::size_t kMaxRationaleChars = 2000;

std::string bounded_rationale(std::string text) {
    if (text.size() > kMaxRationaleChars) {
        text.resize(kMaxRationaleChars);
        text += "...";
    }
    return text;
}

} // namespace

// ---------------------------------------------------------------------------
// Scripted backend
// ---------------------------------------------------------------------------

ScriptedBackend::ScriptedBackend(const std::string& fixture_path) {
    auto parsed = from_json(read_text_file(fixture_path), fixture_path);
    cells_ = std::move(parsed->cells_);
    origin_ = fixture_path;
}

std::unique_ptr<ScriptedBackend> ScriptedBackend::from_json(const std::string& json_text,
                                                            const std::string& origin) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const ordered_json::parse_error& e) {
        fail(ErrorCode::Parse, origin + ": " + e.what());
    }
    auto backend = std::unique_ptr<ScriptedBackend>(new ScriptedBackend());
    backend->origin_ = origin;
    try {
        for (const auto& [blinded_id, indicators] : j.at("ratings").items()) {
            for (const auto& [indicator_id, cell] : indicators.items()) {
                backend->cells_[blinded_id][indicator_id] = {
                    cell.at("value").get<int>(),
                    cell.value("rationale", std::string{})};
            }
        }
    } catch (const ordered_json::exception& e) {
        fail(ErrorCode::Schema, origin + ": " + e.what());
    }
    return backend;
}

std::string ScriptedBackend::complete(const RatingRequest& request) {
    auto item_it = cells_.find(request.blinded_id);
    ordered_json out;
    out["ratings"] = ordered_json::array();
    for (const auto& indicator : request.indicator_ids) {
        if (item_it == cells_.end() || !item_it->second.count(indicator)) {
            fail(ErrorCode::Backend, "scripted fixture '" + origin_ +
                                         "' has no cell for (" + request.blinded_id +
                                         ", " + indicator + ")");
        }
        const Cell& cell = item_it->second.at(indicator);
        out["ratings"].push_back({{"indicator", indicator},
                                  {"value", cell.value},
                                  {"rationale", cell.rationale}});
    }
    return out.dump();
}

// ---------------------------------------------------------------------------
// External backend
// ---------------------------------------------------------------------------

ExternalBackend::ExternalBackend(const ExternalBackendConfig& config) : config_(config) {
    if (!config_.auth_env.empty()) {
        const char* token = std::getenv(config_.auth_env.c_str());
        if (!token) {
            fail(ErrorCode::Backend,
                 "auth token env var '" + config_.auth_env + "' is not set");
        }
        auth_token_ = token;
    }
}

std::string ExternalBackend::complete(const RatingRequest& request) {
    // Split endpoint into host part and path.
    std::string url = config_.endpoint;
    std::string scheme_host = url;
    std::string path = "/";
    const auto scheme_pos = url.find("://");
    const auto path_pos = url.find('/', scheme_pos == std::string::npos ? 0 : scheme_pos + 3);
    if (path_pos != std::string::npos) {
        scheme_host = url.substr(0, path_pos);
        path = url.substr(path_pos);
    }

    httplib::Client client(scheme_host);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);

    httplib::Headers headers;
    if (!auth_token_.empty()) {
        headers.emplace("Authorization", "Bearer " + auth_token_);
    }

    ordered_json body;
    body["model"] = config_.model;
    body["temperature"] = config_.temperature;
    body["messages"] = ordered_json::array();
    body["messages"].push_back({{"role", "user"}, {"content", request.prompt}});

    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res) {
        fail(ErrorCode::Backend,
             "transport failure contacting " + config_.endpoint + ": " +
                 httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        fail(ErrorCode::Backend, "endpoint returned HTTP " + std::to_string(res->status));
    }

    try {
        const auto reply = ordered_json::parse(res->body);
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const ordered_json::exception& e) {
        fail(ErrorCode::Backend, std::string("malformed completion envelope: ") + e.what());
    }
}

std::unique_ptr<JudgeBackend> make_backend(const JudgeProfile& profile) {
    if (profile.kind == BackendKind::Scripted) {
        return std::make_unique<ScriptedBackend>(profile.scripted.fixture_path);
    }
    return std::make_unique<ExternalBackend>(profile.external);
}

// ---------------------------------------------------------------------------
// Prompt rendering
// ---------------------------------------------------------------------------

const std::string& default_prompt_template() {
    static const std::string tmpl =
        "You are one of several independent raters in a blind coding task.\n"
        "Rate the response text below on each indicator, using only the text\n"
        "itself. You are not told where the text comes from; do not guess.\n"
        "\n"
        "Item: {{item_id}}\n"
        "\n"
        "There are {{indicator_count}} indicators.\n"
        "\n"
        "{{indicators}}\n"
        "Response text to rate:\n"
        "{{transcript}}\n"
        "{{response_schema}}\n";
    return tmpl;
}

namespace {

std::string render_indicator_section(const IndicatorSpec& ind) {
    std::ostringstream out;
    out << "## Indicator " << ind.id << " — " << ind.name << "\n";
    out << "Scale: " << ind.scale.describe() << "\n";
    out << "Definition: " << ind.definition << "\n";
    for (const auto& anchor : ind.anchors) {
        out << "Anchor (" << format_signed(anchor.value) << "): " << anchor.example << "\n";
    }
    if (ind.rating_aid) {
        out << "Rating aid: " << *ind.rating_aid << "\n";
    }
    return out.str();
}

std::string render_schema_section(const std::vector<std::string>& indicator_ids) {
    std::ostringstream out;
    out << "Reply with a single JSON object and nothing else, in this shape:\n"
        << "{\"ratings\": [";
    for (std::size_t i = 0; i < indicator_ids.size(); ++i) {
        if (i > 0) out << ", ";
        out << "{\"indicator\": \"" << indicator_ids[i]
            << "\", \"value\": <integer>, \"rationale\": \"<2-3 sentences citing the text>\"}";
    }
    out << "]}\n"
        << "Every listed indicator must appear exactly once; values must be\n"
        << "integers inside the indicator's scale.";
    return out.str();
}

void substitute(std::string& text, const std::string& placeholder,
                const std::string& value) {
    std::size_t pos = 0;
    while ((pos = text.find(placeholder, pos)) != std::string::npos) {
        text.replace(pos, placeholder.size(), value);
        pos += value.size();
    }
}

} // namespace

std::string render_prompt(const Codebook& cb, const BlindedItem& item,
                          const std::string& template_text,
                          const std::vector<std::string>& indicator_ids) {
    std::vector<std::string> ids = indicator_ids;
    if (ids.empty()) {
        for (const auto& ind : cb.indicators) ids.push_back(ind.id);
    }
    if (ids.empty()) {
        fail(ErrorCode::Validation,
             "codebook '" + cb.id + "' has no indicators, nothing to rate");
    }

    std::ostringstream indicators;
    for (const auto& id : ids) {
        indicators << render_indicator_section(cb.require(id)) << "\n";
    }

    std::ostringstream transcript;
    for (const auto& turn : item.turns) {
        transcript << "[" << speaker_name(turn.speaker) << "] " << turn.text << "\n";
    }

    std::string prompt = template_text;
    substitute(prompt, "{{item_id}}", item.blinded_id);
    substitute(prompt, "{{indicator_count}}", std::to_string(ids.size()));
    substitute(prompt, "{{indicators}}", indicators.str());
    substitute(prompt, "{{transcript}}", transcript.str());
    substitute(prompt, "{{response_schema}}", render_schema_section(ids));

    const auto open = prompt.find("{{");
    if (open != std::string::npos) {
        const auto close = prompt.find("}}", open);
        const std::string name =
            close == std::string::npos ? "?" : prompt.substr(open + 2, close - open - 2);
        fail(ErrorCode::Validation, "unresolved template placeholder '{{" + name + "}}'");
    }
    return prompt;
}

// ---------------------------------------------------------------------------
// Output parsing
// ---------------------------------------------------------------------------

namespace {

// Accepts either a bare JSON document or one wrapped in a markdown fence.
std::string strip_code_fence(const std::string& raw) {
    const auto start = raw.find("```");
    if (start == std::string::npos) return raw;
    auto body_start = raw.find('\n', start);
    if (body_start == std::string::npos) return raw;
    ++body_start;
    const auto end = raw.find("```", body_start);
    if (end == std::string::npos) return raw;
    return raw.substr(body_start, end - body_start);
}

int parse_rating_value(const ordered_json& v, const std::string& indicator) {
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_string()) {
        // Tolerate "+1"-style strings; domain checking happens afterwards.
        const std::string s = trim(v.get<std::string>());
        try {
            std::size_t used = 0;
            const int parsed = std::stoi(s, &used);
            if (used == s.size()) return parsed;
        } catch (const std::exception&) {
        }
    }
    fail(ErrorCode::Schema,
         "indicator '" + indicator + "': value is not an integer");
}

} // namespace

std::vector<ParsedRating> parse_judge_output(
    const std::string& raw, const Codebook& cb,
    const std::vector<std::string>& expected_indicators) {
    ordered_json j;
    try {
        j = ordered_json::parse(strip_code_fence(raw));
    } catch (const ordered_json::parse_error& e) {
        fail(ErrorCode::Parse, std::string("malformed judge output: ") + e.what());
    }
    if (!j.is_object() || !j.contains("ratings") || !j.at("ratings").is_array()) {
        fail(ErrorCode::Schema, "judge output must be an object with a 'ratings' array");
    }

    std::set<std::string> expected(expected_indicators.begin(), expected_indicators.end());
    std::set<std::string> seen;
    std::vector<ParsedRating> ratings;
    for (const auto& entry : j.at("ratings")) {
        if (!entry.is_object() || !entry.contains("indicator")) {
            fail(ErrorCode::Schema, "rating entry without an 'indicator' field");
        }
        const std::string indicator = entry.at("indicator").get<std::string>();
        if (!expected.count(indicator)) {
            fail(ErrorCode::Schema, "unknown indicator '" + indicator + "' in judge output");
        }
        if (!seen.insert(indicator).second) {
            fail(ErrorCode::Schema, "indicator '" + indicator + "' rated twice");
        }
        if (!entry.contains("value")) {
            fail(ErrorCode::Schema, "indicator '" + indicator + "' has no value");
        }
        const int value = parse_rating_value(entry.at("value"), indicator);
        if (!validate_value(cb, indicator, value)) {
            fail(ErrorCode::Schema, "indicator '" + indicator + "': value " +
                                        std::to_string(value) + " outside scale " +
                                        cb.require(indicator).scale.describe());
        }
        ParsedRating r;
        r.indicator_id = indicator;
        r.value = value;
        r.rationale = bounded_rationale(entry.value("rationale", std::string{}));
        ratings.push_back(std::move(r));
    }
    for (const auto& indicator : expected_indicators) {
        if (!seen.count(indicator)) {
            fail(ErrorCode::Schema, "missing indicator '" + indicator + "' in judge output");
        }
    }
    return ratings;
}

std::vector<ParsedRating> parse_judge_output(const std::string& raw, const Codebook& cb) {
    std::vector<std::string> all;
    for (const auto& ind : cb.indicators) all.push_back(ind.id);
    return parse_judge_output(raw, cb, all);
}

// ---------------------------------------------------------------------------
// Rating sessions
// ---------------------------------------------------------------------------

namespace {

// One request with retries; returns the parsed ratings or throws the last
// error once the retry budget is exhausted.
std::vector<ParsedRating> request_with_retries(JudgeBackend& backend,
                                               const RatingRequest& request,
                                               const Codebook& cb, int retry_limit,
                                               int& retries_used) {
    std::string last_error;
    for (int attempt = 0; attempt <= retry_limit; ++attempt) {
        if (attempt > 0) ++retries_used;
        try {
            const std::string raw = backend.complete(request);
            return parse_judge_output(raw, cb, request.indicator_ids);
        } catch (const Error& e) {
            last_error = e.what();
        }
    }
    fail(ErrorCode::Backend, "after " + std::to_string(retry_limit) +
                                 " retries: " + last_error);
}

} // namespace

ItemOutcome rate_item(const JudgeProfile& profile, JudgeBackend& backend,
                      const BlindedItem& item, const Codebook& cb,
                      const SessionOptions& options) {
    if (cb.indicators.empty()) {
        fail(ErrorCode::Validation, "codebook '" + cb.id + "' has no indicators");
    }
    std::vector<std::string> all_indicators;
    for (const auto& ind : cb.indicators) all_indicators.push_back(ind.id);

    std::vector<std::vector<std::string>> passes;
    if (options.mode == RatingMode::PerDocument) {
        passes.push_back(all_indicators);
    } else {
        for (const auto& id : all_indicators) passes.push_back({id});
    }

    const std::string& template_text =
        profile.prompt_template ? *profile.prompt_template : default_prompt_template();

    ItemOutcome outcome;
    try {
        for (const auto& pass : passes) {
            RatingRequest request;
            request.blinded_id = item.blinded_id;
            request.indicator_ids = pass;
            request.prompt = render_prompt(cb, item, template_text, pass);
            int retries_used = 0;
            const auto ratings = request_with_retries(backend, request, cb,
                                                      options.retry_limit, retries_used);
            outcome.retries_used += retries_used;
            for (const auto& r : ratings) {
                outcome.records.push_back({profile.coder_id, item.blinded_id,
                                           r.indicator_id, r.value, r.rationale});
            }
        }
    } catch (const Error& e) {
        outcome.records.clear();
        outcome.error = e.what();
    }
    return outcome;
}

SessionResult run_rating_session(const JudgeProfile& profile, JudgeBackend& backend,
                                 const std::vector<BlindedItem>& items,
                                 const Codebook& cb, const SessionOptions& options) {
    // Independent per-coder presentation order, so coders cannot be
    // correlated through order effects.
    std::vector<std::size_t> order(items.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (options.presentation_seed) {
        order = seeded_permutation(items.size(),
                                   *options.presentation_seed ^ fnv1a64(profile.coder_id));
    }

    SessionResult result;
    for (const std::size_t idx : order) {
        const BlindedItem& item = items[idx];
        ItemOutcome outcome = rate_item(profile, backend, item, cb, options);
        result.total_retries += outcome.retries_used;
        if (outcome.error) {
            result.failures.push_back({profile.coder_id, item.blinded_id, *outcome.error});
        } else {
            for (auto& rec : outcome.records) result.records.push_back(std::move(rec));
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Qualification
// ---------------------------------------------------------------------------

GoldSet parse_gold_set(const std::string& json_text, const std::string& origin) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const ordered_json::parse_error& e) {
        fail(ErrorCode::Parse, origin + ": " + e.what());
    }
    GoldSet gold;
    try {
        for (const auto& ji : j.at("items")) {
            BlindedItem item;
            item.blinded_id = ji.at("blinded_id").get<std::string>();
            item.context = parse_context_kind(ji.at("context").get<std::string>());
            for (const auto& jt : ji.at("turns")) {
                item.turns.push_back({parse_speaker(jt.at("speaker").get<std::string>()),
                                      jt.at("text").get<std::string>()});
            }
            gold.items.push_back(std::move(item));
        }
        for (const auto& jg : j.at("gold")) {
            gold.ratings.push_back({jg.at("blinded_id").get<std::string>(),
                                    jg.at("indicator_id").get<std::string>(),
                                    jg.at("value").get<int>()});
        }
    } catch (const ordered_json::exception& e) {
        fail(ErrorCode::Schema, origin + ": " + e.what());
    }
    return gold;
}

GoldSet load_gold_set(const std::string& path) {
    return parse_gold_set(read_text_file(path), path);
}

QualificationResult qualify_coder(const JudgeProfile& profile, JudgeBackend& backend,
                                  const GoldSet& gold, const Codebook& cb,
                                  double threshold, const SessionOptions& options) {
    if (gold.ratings.empty()) {
        fail(ErrorCode::Validation, "gold set is empty");
    }
    {
        std::set<int> distinct;
        for (const auto& g : gold.ratings) distinct.insert(g.value);
        if (distinct.size() < 2) {
            fail(ErrorCode::Validation,
                 "gold set must cover at least 2 distinct values overall");
        }
    }

    SessionResult session = run_rating_session(profile, backend, gold.items, cb, options);
    if (!session.failures.empty()) {
        fail(ErrorCode::Backend, "qualification session failed for item '" +
                                     session.failures.front().blinded_id +
                                     "': " + session.failures.front().message);
    }

    // Coder value lookup.
    std::map<std::pair<std::string, std::string>, int> coder_values;
    for (const auto& rec : session.records) {
        coder_values[{rec.blinded_id, rec.indicator_id}] = rec.value;
    }

    // Group gold by indicator, preserving codebook order.
    QualificationResult result;
    result.coder_id = profile.coder_id;
    result.threshold = threshold;
    double kappa_sum = 0.0;
    std::size_t kappa_count = 0;
    for (const auto& ind : cb.indicators) {
        std::vector<int> coder_vec;
        std::vector<int> gold_vec;
        for (const auto& g : gold.ratings) {
            if (g.indicator_id != ind.id) continue;
            auto it = coder_values.find({g.blinded_id, g.indicator_id});
            if (it == coder_values.end()) {
                fail(ErrorCode::Backend, "coder produced no rating for gold cell (" +
                                             g.blinded_id + ", " + g.indicator_id + ")");
            }
            coder_vec.push_back(it->second);
            gold_vec.push_back(g.value);
        }
        if (gold_vec.empty()) continue;

        std::vector<int> categories;
        for (int v = ind.scale.lo(); v <= ind.scale.hi(); ++v) categories.push_back(v);
        const KappaResult kappa = cohen_kappa(coder_vec, gold_vec, categories);
        result.per_indicator.push_back({ind.id, kappa});
        if (!kappa.degenerate) {
            kappa_sum += kappa.kappa;
            ++kappa_count;
        }
    }
    if (kappa_count == 0) {
        fail(ErrorCode::Validation,
             "every per-indicator kappa is degenerate; gold set cannot discriminate");
    }
    result.mean_kappa = kappa_sum / static_cast<double>(kappa_count);
    result.pass = result.mean_kappa >= threshold;
    return result;
}

} // namespace ratekit
