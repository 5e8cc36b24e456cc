#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include "ratekit/error.hpp"
#include "ratekit/fixtures.hpp"
#include "ratekit/judging.hpp"
#include "ratekit/pipeline.hpp"

#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <thread>

using namespace ratekit;
using nlohmann::ordered_json;
using testsup::contains;
using testsup::icontains;
using testsup::source_path;

namespace {

BlindedItem make_item(const std::string& id, const std::string& text) {
    return {id, ContextKind::SelfNarrative, {{Speaker::Model, text}}};
}

std::string valid_response(const Codebook& cb,
                           const std::vector<std::string>& indicators,
                           const std::map<std::string, int>& values,
                           const std::string& rationale_tag) {
    ordered_json j;
    j["ratings"] = ordered_json::array();
    for (const auto& id : indicators) {
        const auto it = values.find(id);
        const int v = it != values.end() ? it->second : cb.require(id).scale.lo();
        j["ratings"].push_back(
            {{"indicator", id}, {"value", v}, {"rationale", rationale_tag}});
    }
    return j.dump();
}

} // namespace

// ---------------------------------------------------------------------------
// Prompt rendering
// ---------------------------------------------------------------------------

TEST_CASE("render_prompt lists every indicator and the item's turns") {
    const Codebook cb = bundled_codebook("cognitive-profile-7");
    const BlindedItem item = make_item("item-01", "a distinctive transcript line");
    const std::string prompt = render_prompt(cb, item, default_prompt_template());

    std::size_t sections = 0;
    std::size_t pos = 0;
    while ((pos = prompt.find("## Indicator ", pos)) != std::string::npos) {
        ++sections;
        pos += 1;
    }
    CHECK(sections == 7);
    CHECK(contains(prompt, "a distinctive transcript line"));
    CHECK(contains(prompt, "item-01"));
    CHECK(contains(prompt, "\"ratings\""));
    // The deletion-test rating aid travels with LA_dir.
    CHECK(contains(prompt, "Deletion test"));
}

TEST_CASE("rendered prompts carry no condition metadata for the bundled corpus") {
    const Codebook cb = bundled_codebook("cognitive-profile-7");
    const Study study = bundled_profile_study();
    const BlindingResult blinding = blind(study.documents, 42);
    for (const auto& item : blinding.items) {
        const std::string prompt = render_prompt(cb, item, default_prompt_template());
        for (const auto& c : study.conditions) {
            CHECK(!icontains(prompt, c.id));
            CHECK(!icontains(prompt, c.family));
            CHECK(!icontains(prompt, c.display_name));
        }
        CHECK(!icontains(prompt, "transfer"));
    }
}

TEST_CASE("render_prompt errors") {
    Codebook empty;
    empty.id = "empty";
    empty.version = "1";
    const BlindedItem item = make_item("item-01", "text");
    CHECK_THROWS_WITH_AS(render_prompt(empty, item, default_prompt_template()),
                         doctest::Contains("no indicators"), Error);

    const Codebook cb = bundled_codebook("cognitive-profile-7");
    CHECK_THROWS_WITH_AS(render_prompt(cb, item, "{{indicators}} {{bogus}}"),
                         doctest::Contains("unresolved template placeholder '{{bogus}}'"),
                         Error);
}

// ---------------------------------------------------------------------------
// Output parsing
// ---------------------------------------------------------------------------

TEST_CASE("parse_judge_output accepts a well-formed response") {
    const Codebook cb = bundled_codebook("cognitive-profile-7");
    std::vector<std::string> all;
    for (const auto& ind : cb.indicators) all.push_back(ind.id);
    const std::string raw = valid_response(cb, all, {{"SU_dir", 1}, {"TC", -1}}, "why");
    const auto ratings = parse_judge_output(raw, cb);
    REQUIRE(ratings.size() == 7);
    for (const auto& r : ratings) {
        if (r.indicator_id == "SU_dir") CHECK(r.value == 1);
        if (r.indicator_id == "TC") CHECK(r.value == -1);
    }

    // Markdown fences around the JSON are tolerated.
    const auto fenced = parse_judge_output("```json\n" + raw + "\n```", cb);
    CHECK(fenced.size() == 7);
}

TEST_CASE("parse_judge_output rejects malformed responses") {
    const Codebook cb = bundled_codebook("cognitive-profile-7");
    std::vector<std::string> all;
    for (const auto& ind : cb.indicators) all.push_back(ind.id);

    // Missing indicator (drop TC).
    std::vector<std::string> missing_tc(all.begin(), all.end() - 1);
    const std::string no_tc = valid_response(cb, missing_tc, {}, "r");
    CHECK_THROWS_WITH_AS(parse_judge_output(no_tc, cb),
                         doctest::Contains("missing indicator 'TC'"), Error);

    // Unknown indicator.
    std::string with_extra = valid_response(cb, all, {}, "r");
    with_extra.insert(with_extra.find(']'),
                      R"(,{"indicator":"ZZ","value":0,"rationale":"r"})");
    CHECK_THROWS_WITH_AS(parse_judge_output(with_extra, cb),
                         doctest::Contains("unknown indicator 'ZZ'"), Error);

    // Out-of-domain value, numeric and string spellings.
    CHECK_THROWS_WITH_AS(
        parse_judge_output(valid_response(cb, all, {{"SU_dir", 2}}, "r"), cb),
        doctest::Contains("outside scale"), Error);
    std::string string_value = valid_response(cb, all, {}, "r");
    string_value.replace(string_value.find(R"("indicator":"SU_dir","value":-1)"),
                         std::string(R"("indicator":"SU_dir","value":-1)").size(),
                         R"("indicator":"SU_dir","value":"+2")");
    CHECK_THROWS_WITH_AS(parse_judge_output(string_value, cb),
                         doctest::Contains("outside scale"), Error);

    // Duplicate indicator.
    std::string dup = valid_response(cb, all, {}, "r");
    dup.insert(dup.find(']'), R"(,{"indicator":"EH","value":0,"rationale":"r"})");
    CHECK_THROWS_WITH_AS(parse_judge_output(dup, cb), doctest::Contains("rated twice"),
                         Error);

    // Syntactically malformed.
    try {
        parse_judge_output("not json at all", cb);
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Parse);
    }
}

TEST_CASE("parse_judge_output accepts integer-string values and bounds rationales") {
    Codebook cb;
    cb.id = "one";
    cb.version = "1";
    cb.indicators.push_back({"X", "X", ScaleKind::ternary(), "", {}, {}});
    const std::string long_rationale(5000, 'x');
    const std::string raw = R"({"ratings":[{"indicator":"X","value":"+1","rationale":")" +
                            long_rationale + R"("}]})";
    const auto ratings = parse_judge_output(raw, cb);
    REQUIRE(ratings.size() == 1);
    CHECK(ratings[0].value == 1);
    CHECK(ratings[0].rationale.size() < long_rationale.size());
}

// ---------------------------------------------------------------------------
// Scripted sessions
// ---------------------------------------------------------------------------

TEST_CASE("scripted judge rates the whole bundled corpus: 6 items x 7 indicators") {
    const Codebook cb = bundled_codebook("cognitive-profile-7");
    const Study study = bundled_profile_study();
    const BlindingResult blinding = blind(study.documents, 42);

    JudgeProfile profile;
    profile.coder_id = "opus46-nt";
    profile.kind = BackendKind::Scripted;
    profile.scripted.fixture_path = source_path("data/judges/opus46-nt.json");
    auto backend = make_backend(profile);

    const SessionResult result =
        run_rating_session(profile, *backend, blinding.items, cb, {});
    CHECK(result.failures.empty());
    CHECK(result.records.size() == 42);
    CHECK(result.total_retries == 0);

    // Scripted runs are fully deterministic.
    const SessionResult again =
        run_rating_session(profile, *backend, blinding.items, cb, {});
    CHECK(again.records == result.records);
}

TEST_CASE("scripted fixture gap surfaces as a per-item error naming the cell") {
    Codebook cb;
    cb.id = "pair";
    cb.version = "1";
    cb.indicators.push_back({"X", "X", ScaleKind::ternary(), "", {}, {}});
    cb.indicators.push_back({"Y", "Y", ScaleKind::ternary(), "", {}, {}});

    auto backend = ScriptedBackend::from_json(
        R"({"ratings":{"i1":{"X":{"value":1,"rationale":"r"},
                             "Y":{"value":0,"rationale":"r"}},
                       "i2":{"X":{"value":1,"rationale":"r"}}}})",
        "inline");

    JudgeProfile profile;
    profile.coder_id = "c";
    const std::vector<BlindedItem> items{make_item("i1", "t1"), make_item("i2", "t2")};
    const SessionResult result = run_rating_session(profile, *backend, items, cb, {});
    CHECK(result.records.size() == 2); // i1 rated fully
    REQUIRE(result.failures.size() == 1);
    CHECK(result.failures[0].blinded_id == "i2");
    CHECK(contains(result.failures[0].message, "(i2, Y)"));
}

// ---------------------------------------------------------------------------
// Retry policy
// ---------------------------------------------------------------------------

namespace {

// Returns an out-of-domain SU_dir value a fixed number of times, then the
// valid response.
class FlakyBackend : public JudgeBackend {
public:
    FlakyBackend(const Codebook& cb, int bad_responses)
        : cb_(cb), remaining_bad_(bad_responses) {}

    std::string complete(const RatingRequest& request) override {
        const int su = remaining_bad_-- > 0 ? 2 : -1;
        ordered_json j;
        j["ratings"] = ordered_json::array();
        for (const auto& id : request.indicator_ids) {
            const int v = id == "SU_dir" ? su : cb_.require(id).scale.lo();
            j["ratings"].push_back({{"indicator", id}, {"value", v}, {"rationale", "r"}});
        }
        return j.dump();
    }

private:
    const Codebook& cb_;
    int remaining_bad_;
};

} // namespace

TEST_CASE("malformed output is re-requested up to the retry limit") {
    const Codebook cb = bundled_codebook("cognitive-profile-7");
    JudgeProfile profile;
    profile.coder_id = "flaky";
    const std::vector<BlindedItem> items{make_item("i1", "text")};

    // Bad value twice, then -1: succeeds with retry count 2.
    {
        FlakyBackend backend(cb, 2);
        SessionOptions options;
        options.retry_limit = 2;
        const SessionResult result = run_rating_session(profile, backend, items, cb, options);
        CHECK(result.failures.empty());
        CHECK(result.total_retries == 2);
        bool saw_su = false;
        for (const auto& r : result.records) {
            if (r.indicator_id == "SU_dir") {
                saw_su = true;
                CHECK(r.value == -1);
            }
        }
        CHECK(saw_su);
    }

    // Retry budget exhausted: the item fails.
    {
        FlakyBackend backend(cb, 3);
        SessionOptions options;
        options.retry_limit = 2;
        const SessionResult result = run_rating_session(profile, backend, items, cb, options);
        CHECK(result.records.empty());
        REQUIRE(result.failures.size() == 1);
        CHECK(contains(result.failures[0].message, "retries"));
    }
}

// ---------------------------------------------------------------------------
// Session isolation
// ---------------------------------------------------------------------------

namespace {

class RecordingBackend : public JudgeBackend {
public:
    explicit RecordingBackend(const Codebook& cb) : cb_(cb) {}

    std::string complete(const RatingRequest& request) override {
        prompts.push_back(request.prompt);
        ordered_json j;
        j["ratings"] = ordered_json::array();
        for (const auto& id : request.indicator_ids) {
            j["ratings"].push_back({{"indicator", id},
                                    {"value", cb_.require(id).scale.lo()},
                                    {"rationale", "SECRET-" + request.blinded_id}});
        }
        return j.dump();
    }

    std::vector<std::string> prompts;

private:
    const Codebook& cb_;
};

} // namespace

TEST_CASE("each request carries only its own item's content") {
    const Codebook cb = bundled_codebook("cognitive-profile-7");
    const std::vector<BlindedItem> items{make_item("i1", "TOKEN_ALPHA"),
                                         make_item("i2", "TOKEN_BRAVO"),
                                         make_item("i3", "TOKEN_CHARLIE")};
    const std::vector<std::string> tokens{"TOKEN_ALPHA", "TOKEN_BRAVO", "TOKEN_CHARLIE"};

    JudgeProfile profile;
    profile.coder_id = "rec";
    RecordingBackend backend(cb);
    const SessionResult result = run_rating_session(profile, backend, items, cb, {});
    CHECK(result.failures.empty());
    REQUIRE(backend.prompts.size() == 3);

    for (std::size_t i = 0; i < items.size(); ++i) {
        CHECK(contains(backend.prompts[i], tokens[i]));
        for (std::size_t j = 0; j < tokens.size(); ++j) {
            if (j != i) CHECK(!contains(backend.prompts[i], tokens[j]));
        }
        // No earlier response content leaks into later prompts.
        CHECK(!contains(backend.prompts[i], "SECRET-"));
    }
}

TEST_CASE("per-indicator mode yields the same ratings as per-document mode") {
    const Codebook cb = bundled_codebook("cognitive-profile-7");
    const Study study = bundled_profile_study();
    const BlindingResult blinding = blind(study.documents, 42);

    JudgeProfile profile;
    profile.coder_id = "opus46-nt";
    profile.kind = BackendKind::Scripted;
    profile.scripted.fixture_path = source_path("data/judges/opus46-nt.json");
    auto backend = make_backend(profile);

    SessionOptions per_document;
    SessionOptions per_indicator;
    per_indicator.mode = RatingMode::PerIndicator;

    auto sorted_records = [](SessionResult result) {
        std::sort(result.records.begin(), result.records.end(),
                  [](const RatingRecord& a, const RatingRecord& b) {
                      return std::tie(a.blinded_id, a.indicator_id) <
                             std::tie(b.blinded_id, b.indicator_id);
                  });
        return result.records;
    };

    const auto doc_records = sorted_records(
        run_rating_session(profile, *backend, blinding.items, cb, per_document));
    const auto ind_records = sorted_records(
        run_rating_session(profile, *backend, blinding.items, cb, per_indicator));
    CHECK(doc_records == ind_records);
    CHECK(ind_records.size() == 42);
}

TEST_CASE("presentation order is an independent per-coder permutation") {
    const Codebook cb = bundled_codebook("cognitive-profile-7");
    std::vector<BlindedItem> items;
    for (int i = 1; i <= 6; ++i) {
        items.push_back(make_item("i" + std::to_string(i), "t" + std::to_string(i)));
    }

    auto order_for = [&](const std::string& coder) {
        JudgeProfile profile;
        profile.coder_id = coder;
        RecordingBackend backend(cb);
        SessionOptions options;
        options.presentation_seed = 42;
        run_rating_session(profile, backend, items, cb, options);
        std::vector<std::string> order;
        for (const auto& prompt : backend.prompts) {
            for (const auto& item : items) {
                if (contains(prompt, "Item: " + item.blinded_id + "\n")) {
                    order.push_back(item.blinded_id);
                }
            }
        }
        return order;
    };

    const auto alpha = order_for("alpha");
    const auto beta = order_for("beta");
    REQUIRE(alpha.size() == 6);
    REQUIRE(beta.size() == 6);
    CHECK(alpha == order_for("alpha")); // same coder, same order
    CHECK(alpha != beta);               // different coders, independent orders
}

// ---------------------------------------------------------------------------
// Qualification
// ---------------------------------------------------------------------------

TEST_CASE("a coder reproducing gold exactly passes with mean kappa 1.0") {
    const Codebook cb = bundled_codebook("cognitive-profile-7");
    const GoldSet gold = load_gold_set(source_path("data/judges/gold_profile.json"));

    JudgeProfile profile;
    profile.coder_id = "opus46-nt";
    profile.kind = BackendKind::Scripted;
    profile.scripted.fixture_path = source_path("data/judges/opus46-nt.json");
    auto backend = make_backend(profile);

    const QualificationResult result =
        qualify_coder(profile, *backend, gold, cb, 0.40, {});
    CHECK(result.pass);
    CHECK(result.mean_kappa == doctest::Approx(1.0));
    // Degenerate indicators (constant in gold and coder) are excluded, not
    // counted as perfect agreement.
    bool saw_degenerate = false;
    for (const auto& entry : result.per_indicator) {
        saw_degenerate = saw_degenerate || entry.kappa.degenerate;
    }
    CHECK(saw_degenerate); // PR_dir and RL are constant across the two gold items
}

TEST_CASE("a constant-output coder fails against varied gold") {
    Codebook cb;
    cb.id = "one-binary";
    cb.version = "1";
    cb.indicators.push_back({"X", "X", ScaleKind::binary(), "", {}, {}});

    GoldSet gold;
    for (int i = 0; i < 4; ++i) {
        const std::string id = "g" + std::to_string(i);
        gold.items.push_back(make_item(id, "t" + std::to_string(i)));
        // Gold: 1,1,0,0. A constant-1 coder gets p_o=0.5, p_e=0.5, kappa=0.
        gold.ratings.push_back({id, "X", i < 2 ? 1 : 0});
    }

    ordered_json fixture;
    for (int i = 0; i < 4; ++i) {
        fixture["ratings"]["g" + std::to_string(i)]["X"] = {{"value", 1},
                                                            {"rationale", "r"}};
    }
    auto backend = ScriptedBackend::from_json(fixture.dump(), "inline");
    JudgeProfile profile;
    profile.coder_id = "constant";

    const QualificationResult result =
        qualify_coder(profile, *backend, gold, cb, 0.40, {});
    CHECK(!result.pass);
    CHECK(result.mean_kappa == doctest::Approx(0.0));
    CHECK(result.mean_kappa <= 0.0);
}

TEST_CASE("qualification threshold is inclusive") {
    Codebook cb;
    cb.id = "one-binary";
    cb.version = "1";
    cb.indicators.push_back({"X", "X", ScaleKind::binary(), "", {}, {}});

    // Contingency n(coder,gold): (0,0)=4, (1,0)=2, (0,1)=1, (1,1)=3
    // -> p_o=0.7, p_e=0.5, kappa=0.4 exactly.
    const std::vector<int> gold_values{0, 0, 0, 0, 0, 0, 1, 1, 1, 1};
    const std::vector<int> coder_values{0, 0, 0, 0, 1, 1, 0, 1, 1, 1};

    GoldSet gold;
    ordered_json fixture;
    for (int i = 0; i < 10; ++i) {
        const std::string id = "g" + std::to_string(i);
        gold.items.push_back(make_item(id, "t" + std::to_string(i)));
        gold.ratings.push_back({id, "X", gold_values[i]});
        fixture["ratings"][id]["X"] = {{"value", coder_values[i]}, {"rationale", "r"}};
    }
    auto backend = ScriptedBackend::from_json(fixture.dump(), "inline");
    JudgeProfile profile;
    profile.coder_id = "edge";

    const auto at_threshold = qualify_coder(profile, *backend, gold, cb, 0.40, {});
    CHECK(at_threshold.mean_kappa == doctest::Approx(0.4));
    CHECK(at_threshold.pass); // >= is inclusive

    const auto above_threshold = qualify_coder(profile, *backend, gold, cb, 0.41, {});
    CHECK(!above_threshold.pass);
}

TEST_CASE("qualification preconditions") {
    const Codebook cb = bundled_codebook("cognitive-profile-7");
    JudgeProfile profile;
    profile.coder_id = "c";
    RecordingBackend backend(cb);

    GoldSet empty;
    CHECK_THROWS_WITH_AS(qualify_coder(profile, backend, empty, cb, 0.4, {}),
                         doctest::Contains("gold set is empty"), Error);

    GoldSet constant;
    constant.items.push_back(make_item("g1", "t"));
    constant.ratings.push_back({"g1", "EH", 1});
    constant.ratings.push_back({"g1", "QD", 1});
    CHECK_THROWS_WITH_AS(qualify_coder(profile, backend, constant, cb, 0.4, {}),
                         doctest::Contains("2 distinct"), Error);
}

// ---------------------------------------------------------------------------
// Matrix assembly
// ---------------------------------------------------------------------------

TEST_CASE("assemble_matrix over the full demo run: 4 x 6 x 7 complete") {
    const Codebook cb = bundled_codebook("cognitive-profile-7");
    const Study study = bundled_profile_study();
    const JudgeRunConfig config =
        load_judge_config(source_path("data/judges/judges.json"));
    const JudgePipelineResult run = run_judge_pipeline(study, cb, config, 42);
    REQUIRE(run.failures.empty());
    CHECK(run.records.size() == 168);

    const RatingMatrix matrix = assemble_matrix(run.records, run.blinding.map, cb);
    CHECK(matrix.coders().size() == 4);
    CHECK(matrix.documents().size() == 6);
    CHECK(matrix.indicators().size() == 7);
    CHECK(matrix.present_count() == 168);
    CHECK(matrix.complete_for(matrix.coders()));
    CHECK(matrix.complete_for({"opus46-nt", "gpt54-nt", "sonnet46-t"}));

    // Duplicate cell.
    std::vector<RatingRecord> duplicated = run.records;
    duplicated.push_back(duplicated.front());
    CHECK_THROWS_WITH_AS(assemble_matrix(duplicated, run.blinding.map, cb),
                         doctest::Contains("duplicate rating cell"), Error);

    // Unknown blinded id.
    std::vector<RatingRecord> unknown = run.records;
    unknown.front().blinded_id = "item-99";
    CHECK_THROWS_WITH_AS(assemble_matrix(unknown, run.blinding.map, cb),
                         doctest::Contains("unknown blinded id"), Error);

    // Out-of-scale value is re-checked at assembly.
    std::vector<RatingRecord> invalid = run.records;
    invalid.front().value = 9;
    CHECK_THROWS_AS(assemble_matrix(invalid, run.blinding.map, cb), Error);

    // Records from 3 coders only: complete for that subset.
    std::vector<RatingRecord> three;
    for (const auto& r : run.records) {
        if (r.coder_id != "gemini3t-t") three.push_back(r);
    }
    const RatingMatrix partial = assemble_matrix(three, run.blinding.map, cb);
    CHECK(partial.coders().size() == 3);
    CHECK(partial.complete_for(partial.coders()));
}

// ---------------------------------------------------------------------------
// External backend over local HTTP
// ---------------------------------------------------------------------------

TEST_CASE("external backend speaks the chat-completion protocol") {
    const Codebook cb = bundled_codebook("cognitive-profile-7");
    std::vector<std::string> all;
    for (const auto& ind : cb.indicators) all.push_back(ind.id);
    const std::string body = valid_response(cb, all, {{"SU_dir", 1}}, "served");

    httplib::Server server;
    std::atomic<int> requests{0};
    std::string seen_auth;
    server.Post("/v1/chat/completions",
                [&](const httplib::Request& req, httplib::Response& res) {
                    ++requests;
                    seen_auth = req.get_header_value("Authorization");
                    // First call: transport-level failure the client must retry.
                    if (requests == 1) {
                        res.status = 500;
                        return;
                    }
                    ordered_json reply;
                    reply["choices"] = ordered_json::array();
                    reply["choices"].push_back(
                        {{"message", ordered_json{{"role", "assistant"},
                                                  {"content", body}}}});
                    res.set_content(reply.dump(), "application/json");
                });

    const int port = server.bind_to_any_port("127.0.0.1");
    if (port <= 0) {
        WARN("skipping: cannot bind a localhost port in this environment");
        return;
    }
    std::thread server_thread([&]() { server.listen_after_bind(); });
    server.wait_until_ready();

    setenv("RATEKIT_TEST_TOKEN", "sk-local-test", 1);
    JudgeProfile profile;
    profile.coder_id = "ext";
    profile.kind = BackendKind::External;
    profile.external.endpoint =
        "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
    profile.external.model = "test-model";
    profile.external.auth_env = "RATEKIT_TEST_TOKEN";
    profile.external.temperature = 0.0;

    auto backend = make_backend(profile);
    SessionOptions options;
    options.retry_limit = 2;
    const std::vector<BlindedItem> items{make_item("i1", "text")};
    const SessionResult result = run_rating_session(profile, *backend, items, cb, options);

    server.stop();
    server_thread.join();

    CHECK(result.failures.empty());
    CHECK(result.records.size() == 7);
    CHECK(result.total_retries == 1); // the 500 cost one retry
    CHECK(seen_auth == "Bearer sk-local-test");
}

TEST_CASE("missing auth env var is a backend error") {
    unsetenv("RATEKIT_NO_SUCH_TOKEN");
    JudgeProfile profile;
    profile.coder_id = "ext";
    profile.kind = BackendKind::External;
    profile.external.endpoint = "http://127.0.0.1:1/v1/chat/completions";
    profile.external.model = "m";
    profile.external.auth_env = "RATEKIT_NO_SUCH_TOKEN";
    try {
        make_backend(profile);
        FAIL("expected backend error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Backend);
    }
}
