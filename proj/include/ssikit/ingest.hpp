#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ssikit/ssi.hpp"

namespace ssikit {

// Fixed attribute column order. Every weight vector, report and output file
// uses this order.
inline constexpr int kNumAttributes = 4;
inline constexpr std::array<const char*, 4> kAttributeNames = {
    "sanitation", "water", "structural", "overcrowding"};

// One census table row, already mapped onto canonical fields.
struct BlockRecord {
    std::string block_id;
    std::string locality_id;
    int year = 0;
    long houses_total = 0;
    long houses_no_water = 0;
    long houses_dirt_floor_or_single_room = 0;
    long houses_no_sanitation = 0;
    long occupants_total = 0;
    long rooms_total = 0;
};

struct ColumnRange {
    double min = 0.0;
    double max = 1.0;
};

// n x 4 matrix of deprivation attributes, all entries in [0, 1].
struct AttributeMatrix {
    std::vector<std::string> block_ids;
    std::vector<std::array<double, 4>> values;   // rows follow block_ids
    std::array<ColumnRange, 4> normalization;    // scale applied per column

    std::size_t rows() const { return values.size(); }
};

// Maps canonical field names onto the input table's header names; lets the
// same pipeline ingest census vintages with differing column naming.
struct CensusConfig {
    char delimiter = ',';
    std::map<std::string, std::string> columns;  // field -> header name

    static const std::vector<std::string>& field_names();
    static CensusConfig load(const std::filesystem::path& path);
};

struct ParseReport {
    std::vector<std::string> warnings;
    std::size_t rows_zero_houses = 0;  // retained but flagged
};

// Reads a delimited census table (header row required) into block records.
// Rows with houses_total = 0 are kept and flagged via the report.
std::vector<BlockRecord> parse_census(const std::filesystem::path& table_path,
                                      const CensusConfig& config,
                                      ParseReport* report = nullptr);

struct DeriveReport {
    std::vector<std::string> warnings;
    std::size_t excluded_zero_houses = 0;
    std::size_t excluded_zero_rooms = 0;
};

// Columns 0-2 are proportions of deprived houses; column 3 is persons per
// room min-max rescaled over the dataset. Records with houses_total = 0 or
// rooms_total = 0 are excluded with a warning.
AttributeMatrix derive_attributes(const std::vector<BlockRecord>& records,
                                  DeriveReport* report = nullptr);

struct LocalitySummary {
    std::string locality_id;
    std::size_t n_blocks = 0;
    double mean = 0;
    double weighted_mean = 0;  // weights = houses_total
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

// One summary row per locality, sorted by locality id. Every block in `ssi`
// must have a matching record.
std::vector<LocalitySummary> aggregate_ssi(const SsiVector& ssi,
                                           const std::vector<BlockRecord>& records);

}  // namespace ssikit
