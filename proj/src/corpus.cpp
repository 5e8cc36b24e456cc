#include "ratekit/corpus.hpp"

#include "ratekit/error.hpp"
#include "ratekit/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

using nlohmann::ordered_json;

namespace ratekit {

const char* label_name(Label label) {
    return label == Label::Transfer ? "transfer" : "non_transfer";
}

const char* context_kind_name(ContextKind kind) {
    switch (kind) {
        case ContextKind::SelfNarrative: return "self_narrative";
        case ContextKind::TutoringSession: return "tutoring_session";
        case ContextKind::Reflection: return "reflection";
    }
    return "?";
}

const char* speaker_name(Speaker speaker) {
    switch (speaker) {
        case Speaker::Learner: return "learner";
        case Speaker::Tutor: return "tutor";
        case Speaker::Interviewer: return "interviewer";
        case Speaker::Model: return "model";
    }
    return "?";
}

Label parse_label(const std::string& s) {
    if (s == "transfer") return Label::Transfer;
    if (s == "non_transfer") return Label::NonTransfer;
    fail(ErrorCode::Schema, "unknown label '" + s + "'");
}

ContextKind parse_context_kind(const std::string& s) {
    if (s == "self_narrative") return ContextKind::SelfNarrative;
    if (s == "tutoring_session") return ContextKind::TutoringSession;
    if (s == "reflection") return ContextKind::Reflection;
    fail(ErrorCode::Schema, "unknown context kind '" + s + "'");
}

Speaker parse_speaker(const std::string& s) {
    if (s == "learner") return Speaker::Learner;
    if (s == "tutor") return Speaker::Tutor;
    if (s == "interviewer") return Speaker::Interviewer;
    if (s == "model") return Speaker::Model;
    fail(ErrorCode::Schema, "unknown speaker '" + s + "'");
}

const Condition* Study::find_condition(const std::string& condition_id) const {
    for (const auto& c : conditions) {
        if (c.id == condition_id) return &c;
    }
    return nullptr;
}

const Condition& Study::require_condition(const std::string& condition_id) const {
    const Condition* c = find_condition(condition_id);
    if (!c) fail(ErrorCode::Validation, "unknown condition '" + condition_id + "'");
    return *c;
}

const DialogueDocument* Study::find_document(const std::string& document_id) const {
    for (const auto& d : documents) {
        if (d.id == document_id) return &d;
    }
    return nullptr;
}

std::vector<FamilyPair> corresponding_pairs(const Study& study) {
    std::vector<FamilyPair> pairs;
    for (const auto& c : study.conditions) {
        if (c.label != Label::Transfer) continue;
        for (const auto& other : study.conditions) {
            if (other.label == Label::NonTransfer && other.family == c.family) {
                pairs.push_back({c.family, c.id, other.id});
                break;
            }
        }
    }
    return pairs;
}

std::vector<std::string> reference_conditions(const Study& study) {
    std::vector<std::string> refs;
    for (const auto& c : study.conditions) {
        bool paired = false;
        for (const auto& other : study.conditions) {
            if (other.family == c.family && other.label != c.label) {
                paired = true;
                break;
            }
        }
        if (!paired) refs.push_back(c.id);
    }
    return refs;
}

void validate_study(const Study& study) {
    std::set<std::string> condition_ids;
    std::set<std::pair<std::string, Label>> family_labels;
    for (const auto& c : study.conditions) {
        if (!condition_ids.insert(c.id).second) {
            fail(ErrorCode::Schema, "duplicate condition id '" + c.id + "'");
        }
        if (!family_labels.insert({c.family, c.label}).second) {
            fail(ErrorCode::Schema, "duplicate (family, label) pair for family '" +
                                        c.family + "', label " + label_name(c.label));
        }
    }
    std::set<std::string> document_ids;
    for (const auto& d : study.documents) {
        if (!document_ids.insert(d.id).second) {
            fail(ErrorCode::Schema, "duplicate document id '" + d.id + "'");
        }
        if (!condition_ids.count(d.condition_id)) {
            fail(ErrorCode::Schema, "document '" + d.id +
                                        "' references unknown condition '" +
                                        d.condition_id + "'");
        }
        if (d.turns.empty()) {
            fail(ErrorCode::Schema, "document '" + d.id + "' has no turns");
        }
        for (const auto& turn : d.turns) {
            if (trim(turn.text).empty()) {
                fail(ErrorCode::Schema, "document '" + d.id + "' has an empty turn");
            }
        }
    }
}

Study parse_study(const std::string& json_text, const std::string& origin) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const ordered_json::parse_error& e) {
        fail(ErrorCode::Parse, origin + ": " + e.what());
    }

    Study study;
    try {
        study.id = j.at("id").get<std::string>();
        for (const auto& jc : j.at("conditions")) {
            Condition c;
            c.id = jc.at("id").get<std::string>();
            c.family = jc.at("family").get<std::string>();
            c.label = parse_label(jc.at("label").get<std::string>());
            c.display_name = jc.at("display_name").get<std::string>();
            study.conditions.push_back(std::move(c));
        }
        if (j.contains("documents")) {
            for (const auto& jd : j.at("documents")) {
                DialogueDocument d;
                d.id = jd.at("id").get<std::string>();
                d.condition_id = jd.at("condition").get<std::string>();
                d.context = parse_context_kind(jd.at("context").get<std::string>());
                for (const auto& jt : jd.at("turns")) {
                    d.turns.push_back({parse_speaker(jt.at("speaker").get<std::string>()),
                                       jt.at("text").get<std::string>()});
                }
                study.documents.push_back(std::move(d));
            }
        }
    } catch (const ordered_json::exception& e) {
        fail(ErrorCode::Schema, origin + ": " + e.what());
    }

    validate_study(study);
    return study;
}

Study ingest_corpus(const std::string& path) {
    return parse_study(read_text_file(path), path);
}

std::string serialize_study(const Study& study) {
    ordered_json j;
    j["id"] = study.id;
    j["conditions"] = ordered_json::array();
    for (const auto& c : study.conditions) {
        j["conditions"].push_back({{"id", c.id},
                                   {"family", c.family},
                                   {"label", label_name(c.label)},
                                   {"display_name", c.display_name}});
    }
    j["documents"] = ordered_json::array();
    for (const auto& d : study.documents) {
        ordered_json jd;
        jd["id"] = d.id;
        jd["condition"] = d.condition_id;
        jd["context"] = context_kind_name(d.context);
        jd["turns"] = ordered_json::array();
        for (const auto& t : d.turns) {
            jd["turns"].push_back({{"speaker", speaker_name(t.speaker)}, {"text", t.text}});
        }
        j["documents"].push_back(std::move(jd));
    }
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Blinding
// ---------------------------------------------------------------------------

const std::string* BlindingMap::find_document(const std::string& blinded_id) const {
    for (const auto& [bid, did] : entries) {
        if (bid == blinded_id) return &did;
    }
    return nullptr;
}

BlindingResult blind(const std::vector<DialogueDocument>& documents,
                     std::uint64_t seed) {
    if (documents.empty()) {
        fail(ErrorCode::Validation, "cannot blind an empty document set");
    }

    // Canonical ordering makes the result a pure function of (seed, set).
    std::vector<const DialogueDocument*> sorted;
    sorted.reserve(documents.size());
    for (const auto& d : documents) sorted.push_back(&d);
    std::sort(sorted.begin(), sorted.end(),
              [](const DialogueDocument* a, const DialogueDocument* b) {
                  return a->id < b->id;
              });

    const auto perm = seeded_permutation(sorted.size(), seed);

    BlindingResult result;
    result.map.seed = seed;
    for (std::size_t pos = 0; pos < perm.size(); ++pos) {
        const DialogueDocument& doc = *sorted[perm[pos]];
        char buf[32];
        std::snprintf(buf, sizeof(buf), "item-%02zu", pos + 1);
        BlindedItem item;
        item.blinded_id = buf;
        item.context = doc.context;
        item.turns = doc.turns;
        result.items.push_back(std::move(item));
        result.map.entries.emplace_back(buf, doc.id);
    }
    return result;
}

std::string unblind(const BlindingMap& map, const std::string& blinded_id) {
    const std::string* doc = map.find_document(blinded_id);
    if (!doc) fail(ErrorCode::Validation, "unknown blinded id '" + blinded_id + "'");
    return *doc;
}

std::string serialize_blinded_items(const std::vector<BlindedItem>& items) {
    ordered_json j;
    j["items"] = ordered_json::array();
    for (const auto& item : items) {
        ordered_json ji;
        ji["blinded_id"] = item.blinded_id;
        ji["context"] = context_kind_name(item.context);
        ji["turns"] = ordered_json::array();
        for (const auto& t : item.turns) {
            ji["turns"].push_back({{"speaker", speaker_name(t.speaker)}, {"text", t.text}});
        }
        j["items"].push_back(std::move(ji));
    }
    return j.dump(2) + "\n";
}

std::vector<BlindedItem> parse_blinded_items(const std::string& json_text,
                                             const std::string& origin) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const ordered_json::parse_error& e) {
        fail(ErrorCode::Parse, origin + ": " + e.what());
    }
    std::vector<BlindedItem> items;
    try {
        for (const auto& ji : j.at("items")) {
            BlindedItem item;
            item.blinded_id = ji.at("blinded_id").get<std::string>();
            item.context = parse_context_kind(ji.at("context").get<std::string>());
            for (const auto& jt : ji.at("turns")) {
                item.turns.push_back({parse_speaker(jt.at("speaker").get<std::string>()),
                                      jt.at("text").get<std::string>()});
            }
            items.push_back(std::move(item));
        }
    } catch (const ordered_json::exception& e) {
        fail(ErrorCode::Schema, origin + ": " + e.what());
    }
    return items;
}

std::string serialize_blinding_map(const BlindingMap& map) {
    ordered_json j;
    j["seed"] = map.seed;
    j["entries"] = ordered_json::array();
    for (const auto& [bid, did] : map.entries) {
        j["entries"].push_back({{"blinded_id", bid}, {"document_id", did}});
    }
    return j.dump(2) + "\n";
}

BlindingMap parse_blinding_map(const std::string& json_text, const std::string& origin) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const ordered_json::parse_error& e) {
        fail(ErrorCode::Parse, origin + ": " + e.what());
    }
    BlindingMap map;
    try {
        map.seed = j.at("seed").get<std::uint64_t>();
        std::set<std::string> bids;
        std::set<std::string> dids;
        for (const auto& je : j.at("entries")) {
            std::string bid = je.at("blinded_id").get<std::string>();
            std::string did = je.at("document_id").get<std::string>();
            if (!bids.insert(bid).second || !dids.insert(did).second) {
                fail(ErrorCode::Schema, origin + ": blinding map is not a bijection");
            }
            map.entries.emplace_back(std::move(bid), std::move(did));
        }
    } catch (const ordered_json::exception& e) {
        fail(ErrorCode::Schema, origin + ": " + e.what());
    }
    return map;
}

} // namespace ratekit
