#include "ratekit/ratings.hpp"

#include "ratekit/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>

using nlohmann::ordered_json;

namespace ratekit {

RatingMatrix::RatingMatrix(std::vector<std::string> coders,
                           std::vector<std::string> documents,
                           std::vector<std::string> indicators)
    : coders_(std::move(coders)),
      documents_(std::move(documents)),
      indicators_(std::move(indicators)),
      values_(coders_.size() * documents_.size() * indicators_.size(), 0),
      present_(coders_.size() * documents_.size() * indicators_.size(), false) {}

std::size_t RatingMatrix::index_of(const std::vector<std::string>& axis,
                                   const std::string& key, const char* what) const {
    auto it = std::find(axis.begin(), axis.end(), key);
    if (it == axis.end()) {
        fail(ErrorCode::Validation, std::string("unknown ") + what + " '" + key + "'");
    }
    return static_cast<std::size_t>(it - axis.begin());
}

std::size_t RatingMatrix::cell(std::size_t c, std::size_t d, std::size_t i) const {
    return (c * documents_.size() + d) * indicators_.size() + i;
}

void RatingMatrix::set(const std::string& coder, const std::string& document,
                       const std::string& indicator, int value) {
    const std::size_t idx = cell(index_of(coders_, coder, "coder"),
                                 index_of(documents_, document, "document"),
                                 index_of(indicators_, indicator, "indicator"));
    if (present_[idx]) {
        fail(ErrorCode::Validation, "duplicate rating cell (" + coder + ", " +
                                        document + ", " + indicator + ")");
    }
    values_[idx] = value;
    present_[idx] = true;
}

std::optional<int> RatingMatrix::get(const std::string& coder,
                                     const std::string& document,
                                     const std::string& indicator) const {
    const std::size_t idx = cell(index_of(coders_, coder, "coder"),
                                 index_of(documents_, document, "document"),
                                 index_of(indicators_, indicator, "indicator"));
    if (!present_[idx]) return std::nullopt;
    return values_[idx];
}

bool RatingMatrix::complete_for(const std::vector<std::string>& coder_subset) const {
    for (const auto& coder : coder_subset) {
        const std::size_t c = index_of(coders_, coder, "coder");
        for (std::size_t d = 0; d < documents_.size(); ++d) {
            for (std::size_t i = 0; i < indicators_.size(); ++i) {
                if (!present_[cell(c, d, i)]) return false;
            }
        }
    }
    return true;
}

std::size_t RatingMatrix::present_count() const {
    std::size_t n = 0;
    for (bool p : present_) n += p ? 1 : 0;
    return n;
}

RatingMatrix assemble_matrix(const std::vector<RatingRecord>& records,
                             const BlindingMap& map, const Codebook& cb) {
    std::set<std::string> coder_set;
    std::set<std::string> document_set;
    for (const auto& r : records) {
        coder_set.insert(r.coder_id);
        document_set.insert(unblind(map, r.blinded_id));
    }

    std::vector<std::string> indicators;
    for (const auto& ind : cb.indicators) indicators.push_back(ind.id);

    RatingMatrix matrix({coder_set.begin(), coder_set.end()},
                        {document_set.begin(), document_set.end()}, indicators);

    for (const auto& r : records) {
        // Scale validity is enforced at parse time and re-checked here.
        if (!validate_value(cb, r.indicator_id, r.value)) {
            fail(ErrorCode::Validation,
                 "rating value " + std::to_string(r.value) + " for indicator '" +
                     r.indicator_id + "' is outside its scale");
        }
        matrix.set(r.coder_id, unblind(map, r.blinded_id), r.indicator_id, r.value);
    }
    return matrix;
}

std::string serialize_records(std::vector<RatingRecord> records, const Codebook& cb) {
    std::map<std::string, std::size_t> indicator_rank;
    for (std::size_t i = 0; i < cb.indicators.size(); ++i) {
        indicator_rank[cb.indicators[i].id] = i;
    }
    std::sort(records.begin(), records.end(),
              [&](const RatingRecord& a, const RatingRecord& b) {
                  if (a.coder_id != b.coder_id) return a.coder_id < b.coder_id;
                  if (a.blinded_id != b.blinded_id) return a.blinded_id < b.blinded_id;
                  return indicator_rank[a.indicator_id] < indicator_rank[b.indicator_id];
              });

    ordered_json j;
    j["records"] = ordered_json::array();
    for (const auto& r : records) {
        j["records"].push_back({{"coder_id", r.coder_id},
                                {"blinded_id", r.blinded_id},
                                {"indicator_id", r.indicator_id},
                                {"value", r.value},
                                {"rationale", r.rationale}});
    }
    return j.dump(2) + "\n";
}

std::vector<RatingRecord> parse_records(const std::string& json_text,
                                        const std::string& origin) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const ordered_json::parse_error& e) {
        fail(ErrorCode::Parse, origin + ": " + e.what());
    }
    std::vector<RatingRecord> records;
    try {
        for (const auto& jr : j.at("records")) {
            RatingRecord r;
            r.coder_id = jr.at("coder_id").get<std::string>();
            r.blinded_id = jr.at("blinded_id").get<std::string>();
            r.indicator_id = jr.at("indicator_id").get<std::string>();
            r.value = jr.at("value").get<int>();
            r.rationale = jr.at("rationale").get<std::string>();
            records.push_back(std::move(r));
        }
    } catch (const ordered_json::exception& e) {
        fail(ErrorCode::Schema, origin + ": " + e.what());
    }
    return records;
}

} // namespace ratekit
