#include "ratekit/codebook.hpp"

#include "ratekit/error.hpp"
#include "ratekit/util.hpp"

#include <json.hpp>

#include <set>

using nlohmann::ordered_json;

namespace ratekit {

ScaleKind ScaleKind::ordinal(int min, int max) {
    if (min >= max) {
        fail(ErrorCode::Schema,
             "ordinal scale requires min < max, got [" + std::to_string(min) +
                 ", " + std::to_string(max) + "]");
    }
    return {ScaleType::BoundedOrdinal, min, max};
}

int ScaleKind::lo() const {
    switch (type) {
        case ScaleType::Binary: return 0;
        case ScaleType::TernaryDirectional: return -1;
        case ScaleType::BoundedOrdinal: return min;
    }
    return 0;
}

int ScaleKind::hi() const {
    switch (type) {
        case ScaleType::Binary: return 1;
        case ScaleType::TernaryDirectional: return 1;
        case ScaleType::BoundedOrdinal: return max;
    }
    return 0;
}

std::string ScaleKind::describe() const {
    switch (type) {
        case ScaleType::Binary: return "binary {0,1}";
        case ScaleType::TernaryDirectional: return "ternary {-1,0,+1}";
        case ScaleType::BoundedOrdinal:
            return "ordinal " + std::to_string(min) + ".." + std::to_string(max);
    }
    return "?";
}

const IndicatorSpec* Codebook::find(const std::string& indicator_id) const {
    for (const auto& ind : indicators) {
        if (ind.id == indicator_id) return &ind;
    }
    return nullptr;
}

const IndicatorSpec& Codebook::require(const std::string& indicator_id) const {
    const IndicatorSpec* ind = find(indicator_id);
    if (!ind) {
        fail(ErrorCode::Validation,
             "unknown indicator '" + indicator_id + "' in codebook '" + id + "'");
    }
    return *ind;
}

const TotalGroup* Codebook::find_group(const std::string& group_id) const {
    for (const auto& g : total_groups) {
        if (g.id == group_id) return &g;
    }
    return nullptr;
}

std::pair<int, int> Codebook::group_range(const std::string& group_id) const {
    const TotalGroup* g = find_group(group_id);
    if (!g) {
        fail(ErrorCode::Validation,
             "unknown total group '" + group_id + "' in codebook '" + id + "'");
    }
    int lo = 0;
    int hi = 0;
    for (const auto& member : g->members) {
        const ScaleKind& scale = require(member).scale;
        lo += scale.lo();
        hi += scale.hi();
    }
    return {lo, hi};
}

void validate_codebook(const Codebook& cb) {
    std::set<std::string> seen;
    for (const auto& ind : cb.indicators) {
        if (ind.id.empty()) {
            fail(ErrorCode::Schema, "codebook '" + cb.id + "': indicator with empty id");
        }
        if (!seen.insert(ind.id).second) {
            fail(ErrorCode::Schema,
                 "codebook '" + cb.id + "': duplicate indicator id '" + ind.id + "'");
        }
        if (ind.scale.type == ScaleType::BoundedOrdinal && ind.scale.min >= ind.scale.max) {
            fail(ErrorCode::Schema, "indicator '" + ind.id + "': ordinal scale requires min < max");
        }
        for (const auto& anchor : ind.anchors) {
            if (!ind.scale.contains(anchor.value)) {
                fail(ErrorCode::Schema,
                     "indicator '" + ind.id + "': anchor value " +
                         std::to_string(anchor.value) + " outside scale " +
                         ind.scale.describe());
            }
        }
    }
    std::set<std::string> group_ids;
    for (const auto& g : cb.total_groups) {
        if (!group_ids.insert(g.id).second) {
            fail(ErrorCode::Schema, "codebook '" + cb.id + "': duplicate total group '" + g.id + "'");
        }
        for (const auto& member : g.members) {
            if (!cb.find(member)) {
                fail(ErrorCode::Schema,
                     "total group '" + g.id + "': unknown member indicator '" + member + "'");
            }
        }
    }
}

namespace {

ScaleKind parse_scale(const ordered_json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("kind")) {
        fail(ErrorCode::Schema, where + ": scale must be an object with a 'kind' field");
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "binary") return ScaleKind::binary();
    if (kind == "ternary") return ScaleKind::ternary();
    if (kind == "ordinal") {
        if (!j.contains("min") || !j.contains("max")) {
            fail(ErrorCode::Schema, where + ": ordinal scale requires 'min' and 'max'");
        }
        int min = j.at("min").get<int>();
        int max = j.at("max").get<int>();
        if (min >= max) {
            fail(ErrorCode::Schema, where + ".scale: ordinal requires min < max");
        }
        return {ScaleType::BoundedOrdinal, min, max};
    }
    fail(ErrorCode::Schema, where + ": unknown scale kind '" + kind + "'");
}

ordered_json scale_to_json(const ScaleKind& scale) {
    switch (scale.type) {
        case ScaleType::Binary: return {{"kind", "binary"}};
        case ScaleType::TernaryDirectional: return {{"kind", "ternary"}};
        case ScaleType::BoundedOrdinal:
            return {{"kind", "ordinal"}, {"min", scale.min}, {"max", scale.max}};
    }
    return {};
}

} // namespace

Codebook parse_codebook(const std::string& json_text, const std::string& origin) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const ordered_json::parse_error& e) {
        fail(ErrorCode::Parse, origin + ": " + e.what());
    }

    Codebook cb;
    try {
        cb.id = j.at("id").get<std::string>();
        cb.version = j.at("version").get<std::string>();
        for (const auto& ji : j.at("indicators")) {
            IndicatorSpec ind;
            ind.id = ji.at("id").get<std::string>();
            ind.name = ji.at("name").get<std::string>();
            ind.scale = parse_scale(ji.at("scale"), origin + ": indicator '" + ind.id + "'");
            ind.definition = ji.at("definition").get<std::string>();
            if (ji.contains("anchors")) {
                for (const auto& ja : ji.at("anchors")) {
                    ind.anchors.push_back(
                        {ja.at("value").get<int>(), ja.at("example").get<std::string>()});
                }
            }
            if (ji.contains("rating_aid")) {
                ind.rating_aid = ji.at("rating_aid").get<std::string>();
            }
            cb.indicators.push_back(std::move(ind));
        }
        if (j.contains("total_groups")) {
            for (const auto& jg : j.at("total_groups")) {
                TotalGroup g;
                g.id = jg.at("id").get<std::string>();
                for (const auto& m : jg.at("members")) {
                    g.members.push_back(m.get<std::string>());
                }
                cb.total_groups.push_back(std::move(g));
            }
        }
    } catch (const ordered_json::exception& e) {
        fail(ErrorCode::Schema, origin + ": " + e.what());
    }

    validate_codebook(cb);
    return cb;
}

Codebook load_codebook(const std::string& path) {
    return parse_codebook(read_text_file(path), path);
}

std::string serialize_codebook(const Codebook& cb) {
    ordered_json j;
    j["id"] = cb.id;
    j["version"] = cb.version;
    j["indicators"] = ordered_json::array();
    for (const auto& ind : cb.indicators) {
        ordered_json ji;
        ji["id"] = ind.id;
        ji["name"] = ind.name;
        ji["scale"] = scale_to_json(ind.scale);
        ji["definition"] = ind.definition;
        ji["anchors"] = ordered_json::array();
        for (const auto& a : ind.anchors) {
            ji["anchors"].push_back({{"value", a.value}, {"example", a.example}});
        }
        if (ind.rating_aid) ji["rating_aid"] = *ind.rating_aid;
        j["indicators"].push_back(std::move(ji));
    }
    j["total_groups"] = ordered_json::array();
    for (const auto& g : cb.total_groups) {
        j["total_groups"].push_back({{"id", g.id}, {"members", g.members}});
    }
    return j.dump(2) + "\n";
}

bool validate_value(const Codebook& cb, const std::string& indicator_id, int value) {
    return cb.require(indicator_id).scale.contains(value);
}

} // namespace ratekit
