#pragma once
// Rating records and the dense coder x document x indicator cube they are
// assembled into. Part of the judging layer; split out so the statistics
// code can consume matrices without pulling in backend machinery.

#include "ratekit/codebook.hpp"
#include "ratekit/corpus.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ratekit {

// One coder's value for one (blinded item, indicator).
struct RatingRecord {
    std::string coder_id;
    std::string blinded_id;
    std::string indicator_id;
    int value = 0;
    std::string rationale;

    bool operator==(const RatingRecord&) const = default;
};

// Unblinded dense matrix with per-cell presence flags. Axis orders are
// canonical (sorted coders/documents, codebook indicator order), so equal
// inputs produce equal matrices regardless of record arrival order.
class RatingMatrix {
public:
    RatingMatrix(std::vector<std::string> coders,
                 std::vector<std::string> documents,
                 std::vector<std::string> indicators);

    const std::vector<std::string>& coders() const { return coders_; }
    const std::vector<std::string>& documents() const { return documents_; }
    const std::vector<std::string>& indicators() const { return indicators_; }

    void set(const std::string& coder, const std::string& document,
             const std::string& indicator, int value); // duplicate cell -> error

    std::optional<int> get(const std::string& coder, const std::string& document,
                           const std::string& indicator) const;

    bool complete_for(const std::vector<std::string>& coder_subset) const;
    std::size_t present_count() const;

private:
    std::size_t index_of(const std::vector<std::string>& axis,
                         const std::string& key, const char* what) const;
    std::size_t cell(std::size_t c, std::size_t d, std::size_t i) const;

    std::vector<std::string> coders_;
    std::vector<std::string> documents_;
    std::vector<std::string> indicators_;
    std::vector<int> values_;
    std::vector<bool> present_;
};

// Unblinds, validates every value against the codebook, and fills the cube.
// Duplicate (coder, document, indicator) cells and unknown blinded ids are
// errors.
RatingMatrix assemble_matrix(const std::vector<RatingRecord>& records,
                             const BlindingMap& map, const Codebook& cb);

// Deterministic ratings file format (records sorted by coder, blinded id,
// codebook indicator order).
std::string serialize_records(std::vector<RatingRecord> records, const Codebook& cb);
std::vector<RatingRecord> parse_records(const std::string& json_text,
                                        const std::string& origin);

} // namespace ratekit
