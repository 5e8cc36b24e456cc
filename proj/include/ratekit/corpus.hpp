#pragma once
// Study corpora: model-family x label conditions, the dialogue documents
// rated under them, and the blinding step that strips condition identity
// before anything reaches a coder. Loaded corpora and blinding maps are
// immutable and safe for concurrent reads.

#include "ratekit/codebook.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ratekit {

enum class Label { Transfer, NonTransfer };
enum class ContextKind { SelfNarrative, TutoringSession, Reflection };
enum class Speaker { Learner, Tutor, Interviewer, Model };

const char* label_name(Label label);            // "transfer" / "non_transfer"
const char* context_kind_name(ContextKind kind);
const char* speaker_name(Speaker speaker);
Label parse_label(const std::string& s);
ContextKind parse_context_kind(const std::string& s);
Speaker parse_speaker(const std::string& s);

struct Turn {
    Speaker speaker = Speaker::Model;
    std::string text;

    bool operator==(const Turn&) const = default;
};

struct Condition {
    std::string id;     // e.g. "Sonnet4.6-T"
    std::string family; // e.g. "Sonnet 4.6"
    Label label = Label::NonTransfer;
    std::string display_name;

    bool operator==(const Condition&) const = default;
};

struct DialogueDocument {
    std::string id;
    std::string condition_id;
    ContextKind context = ContextKind::SelfNarrative;
    std::vector<Turn> turns;

    bool operator==(const DialogueDocument&) const = default;
};

struct Study {
    std::string id;
    std::vector<Condition> conditions;
    std::vector<DialogueDocument> documents;

    const Condition* find_condition(const std::string& condition_id) const;
    const Condition& require_condition(const std::string& condition_id) const;
    const DialogueDocument* find_document(const std::string& document_id) const;
};

// A family carrying both labels supports paired transfer-minus-non-transfer
// analysis. Listed in first-appearance order of the transfer conditions.
struct FamilyPair {
    std::string family;
    std::string transfer_condition;
    std::string non_transfer_condition;

    bool operator==(const FamilyPair&) const = default;
};

std::vector<FamilyPair> corresponding_pairs(const Study& study);

// Conditions whose family has only one label; excluded from paired analyses.
std::vector<std::string> reference_conditions(const Study& study);

void validate_study(const Study& study);
Study parse_study(const std::string& json_text, const std::string& origin);
Study ingest_corpus(const std::string& path);
std::string serialize_study(const Study& study);

// ---------------------------------------------------------------------------
// Blinding
// ---------------------------------------------------------------------------

// Label-free view of a document. Carries no condition id, family, label or
// display name by construction.
struct BlindedItem {
    std::string blinded_id;
    ContextKind context = ContextKind::SelfNarrative;
    std::vector<Turn> turns;

    bool operator==(const BlindedItem&) const = default;
};

struct BlindingMap {
    std::uint64_t seed = 0;
    // blinded id -> document id, sorted by blinded id; a bijection.
    std::vector<std::pair<std::string, std::string>> entries;

    const std::string* find_document(const std::string& blinded_id) const;
};

struct BlindingResult {
    std::vector<BlindedItem> items; // in blinded-id order
    BlindingMap map;
};

// Pure function of (seed, document set): documents are canonically ordered
// by id, permuted with the seed, and assigned ids item-01, item-02, ...
BlindingResult blind(const std::vector<DialogueDocument>& documents,
                     std::uint64_t seed);

// Inverse lookup; unknown blinded ids throw Error(Validation).
std::string unblind(const BlindingMap& map, const std::string& blinded_id);

std::string serialize_blinded_items(const std::vector<BlindedItem>& items);
std::vector<BlindedItem> parse_blinded_items(const std::string& json_text,
                                             const std::string& origin);
std::string serialize_blinding_map(const BlindingMap& map);
BlindingMap parse_blinding_map(const std::string& json_text, const std::string& origin);

} // namespace ratekit
