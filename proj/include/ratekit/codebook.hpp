#pragma once
// Rating codebooks: indicator scales, operational definitions, anchor
// examples, and the summed-total groups used for aggregate scores.
// Codebooks are immutable after load and safe for concurrent reads.

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ratekit {

enum class ScaleType { Binary, TernaryDirectional, BoundedOrdinal };

// Value domain of one indicator. Binary is {0,1}; ternary is the categorical
// direction set {-1,0,+1} (+1/-1 are distinct directions, not magnitudes);
// ordinal is the closed integer range [min,max].
struct ScaleKind {
    ScaleType type = ScaleType::Binary;
    int min = 0; // BoundedOrdinal only
    int max = 1;

    static ScaleKind binary() { return {ScaleType::Binary, 0, 1}; }
    static ScaleKind ternary() { return {ScaleType::TernaryDirectional, -1, 1}; }
    static ScaleKind ordinal(int min, int max); // requires min < max

    bool contains(int value) const { return value >= lo() && value <= hi(); }
    int lo() const;
    int hi() const;
    std::string describe() const; // "binary {0,1}", "ordinal 0..5", ...

    bool operator==(const ScaleKind&) const = default;
};

struct Anchor {
    int value = 0;
    std::string example;

    bool operator==(const Anchor&) const = default;
};

struct IndicatorSpec {
    std::string id;   // short token, e.g. "SU_dir"
    std::string name; // display string
    ScaleKind scale;
    std::string definition;
    std::vector<Anchor> anchors;
    std::optional<std::string> rating_aid;

    bool operator==(const IndicatorSpec&) const = default;
};

// Indicators whose values are summed into one aggregate score.
struct TotalGroup {
    std::string id;
    std::vector<std::string> members;

    bool operator==(const TotalGroup&) const = default;
};

struct Codebook {
    std::string id;
    std::string version;
    std::vector<IndicatorSpec> indicators; // order is meaningful
    std::vector<TotalGroup> total_groups;

    const IndicatorSpec* find(const std::string& indicator_id) const;
    const IndicatorSpec& require(const std::string& indicator_id) const;
    const TotalGroup* find_group(const std::string& group_id) const;

    // Theoretical [lo, hi] of a summed total group.
    std::pair<int, int> group_range(const std::string& group_id) const;

    bool operator==(const Codebook&) const = default;
};

// Throws Error(Schema/Validation) on any invariant violation: duplicate
// indicator id, anchor value outside its scale, unknown total-group member,
// ordinal bounds with min >= max.
void validate_codebook(const Codebook& cb);

Codebook parse_codebook(const std::string& json_text, const std::string& origin);
Codebook load_codebook(const std::string& path);

// Canonical JSON form; parse(serialize(cb)) == cb.
std::string serialize_codebook(const Codebook& cb);

// True iff value is in the indicator's scale domain. Unknown indicator ids
// throw Error(Validation).
bool validate_value(const Codebook& cb, const std::string& indicator_id, int value);

} // namespace ratekit
