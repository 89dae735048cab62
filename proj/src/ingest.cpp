#include "ssikit/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "ssikit/error.hpp"
#include "ssikit/util.hpp"

namespace ssikit {

namespace {

long parse_count(const std::string& cell, const std::string& column, std::size_t row) {
    std::string v = trim(cell);
    if (v.empty())
        throw ValidationError("row " + std::to_string(row) + ": empty value in column '" +
                              column + "'");
    std::size_t pos = 0;
    long n = 0;
    try {
        n = std::stol(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size())
        throw ValidationError("row " + std::to_string(row) + ": '" + v +
                              "' in column '" + column + "' is not an integer");
    if (n < 0)
        throw ValidationError("row " + std::to_string(row) + ": negative count " + v +
                              " in column '" + column + "'");
    return n;
}

// Linear interpolation between order statistics (R type 7). v must be sorted.
double quantile(const std::vector<double>& v, double p) {
    if (v.size() == 1) return v[0];
    double h = (static_cast<double>(v.size()) - 1.0) * p;
    std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= v.size()) return v.back();
    double frac = h - static_cast<double>(lo);
    return v[lo] + frac * (v[lo + 1] - v[lo]);
}

}  // namespace

const std::vector<std::string>& CensusConfig::field_names() {
    static const std::vector<std::string> fields = {
        "block_id",        "locality_id",
        "year",            "houses_total",
        "houses_no_water", "houses_dirt_floor_or_single_room",
        "houses_no_sanitation", "occupants_total",
        "rooms_total"};
    return fields;
}

CensusConfig CensusConfig::load(const std::filesystem::path& path) {
    auto kv = read_kv(path);
    CensusConfig cfg;
    auto it = kv.find("delimiter");
    if (it != kv.end()) {
        std::string d = it->second;
        if (d == "\\t") d = "\t";
        if (d.size() != 1)
            throw ValidationError("config: delimiter must be a single character");
        cfg.delimiter = d[0];
    }
    for (const auto& field : field_names()) {
        auto f = kv.find(field);
        if (f == kv.end())
            throw ValidationError("config: missing column mapping for '" + field + "'");
        cfg.columns[field] = f->second;
    }
    return cfg;
}

std::vector<BlockRecord> parse_census(const std::filesystem::path& table_path,
                                      const CensusConfig& config, ParseReport* report) {
    ParseReport local;
    ParseReport& rep = report ? *report : local;

    std::istringstream in(read_file(table_path));
    std::string header_line;
    if (!std::getline(in, header_line)) {
        rep.warnings.push_back("empty census file '" + table_path.string() + "'");
        return {};
    }
    if (!header_line.empty() && header_line.back() == '\r') header_line.pop_back();

    std::vector<std::string> header = split(header_line, config.delimiter);
    std::map<std::string, std::size_t> col_index;
    for (std::size_t i = 0; i < header.size(); ++i) col_index[trim(header[i])] = i;

    // Resolve the mapped column of each canonical field up front.
    std::map<std::string, std::size_t> field_col;
    for (const auto& field : CensusConfig::field_names()) {
        const std::string& name = config.columns.at(field);
        auto it = col_index.find(name);
        if (it == col_index.end())
            throw ValidationError("column '" + name + "' (mapped from '" + field +
                                  "') not found in '" + table_path.string() + "'");
        field_col[field] = it->second;
    }

    std::vector<BlockRecord> records;
    std::string line;
    std::size_t row = 1;  // header is row 1
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split(line, config.delimiter);
        if (cells.size() != header.size())
            throw ValidationError("row " + std::to_string(row) + ": expected " +
                                  std::to_string(header.size()) + " fields, got " +
                                  std::to_string(cells.size()));
        auto cell = [&](const std::string& field) -> const std::string& {
            return cells[field_col.at(field)];
        };
        BlockRecord r;
        r.block_id = trim(cell("block_id"));
        r.locality_id = trim(cell("locality_id"));
        r.year = static_cast<int>(parse_count(cell("year"), config.columns.at("year"), row));
        r.houses_total = parse_count(cell("houses_total"), config.columns.at("houses_total"), row);
        r.houses_no_water =
            parse_count(cell("houses_no_water"), config.columns.at("houses_no_water"), row);
        r.houses_dirt_floor_or_single_room =
            parse_count(cell("houses_dirt_floor_or_single_room"),
                        config.columns.at("houses_dirt_floor_or_single_room"), row);
        r.houses_no_sanitation = parse_count(cell("houses_no_sanitation"),
                                             config.columns.at("houses_no_sanitation"), row);
        r.occupants_total =
            parse_count(cell("occupants_total"), config.columns.at("occupants_total"), row);
        r.rooms_total = parse_count(cell("rooms_total"), config.columns.at("rooms_total"), row);

        if (r.block_id.empty())
            throw ValidationError("row " + std::to_string(row) + ": empty block id");
        for (long c : {r.houses_no_water, r.houses_dirt_floor_or_single_room,
                       r.houses_no_sanitation}) {
            if (c > r.houses_total)
                throw ValidationError("row " + std::to_string(row) + " (block " + r.block_id +
                                      "): deprivation count " + std::to_string(c) +
                                      " exceeds houses_total " + std::to_string(r.houses_total));
        }
        if (r.houses_total == 0) {
            ++rep.rows_zero_houses;
            rep.warnings.push_back("row " + std::to_string(row) + " (block " + r.block_id +
                                   "): houses_total is 0; excluded from attribute derivation");
        }
        records.push_back(std::move(r));
    }
    if (records.empty())
        rep.warnings.push_back("census file '" + table_path.string() + "' has no data rows");
    return records;
}

AttributeMatrix derive_attributes(const std::vector<BlockRecord>& records,
                                  DeriveReport* report) {
    DeriveReport local;
    DeriveReport& rep = report ? *report : local;

    AttributeMatrix X;
    std::vector<double> density;
    for (const auto& r : records) {
        if (r.houses_total == 0) {
            ++rep.excluded_zero_houses;
            continue;
        }
        if (r.rooms_total == 0) {
            ++rep.excluded_zero_rooms;
            rep.warnings.push_back("block " + r.block_id +
                                   ": rooms_total is 0, density undefined; record excluded");
            continue;
        }
        double h = static_cast<double>(r.houses_total);
        std::array<double, 4> row{};
        row[0] = static_cast<double>(r.houses_no_sanitation) / h;
        row[1] = static_cast<double>(r.houses_no_water) / h;
        row[2] = static_cast<double>(r.houses_dirt_floor_or_single_room) / h;
        density.push_back(static_cast<double>(r.occupants_total) /
                          static_cast<double>(r.rooms_total));
        X.block_ids.push_back(r.block_id);
        X.values.push_back(row);
    }

    if (X.rows() < 2)
        throw ValidationError("attribute derivation needs at least 2 usable records, got " +
                              std::to_string(X.rows()));

    double dmin = *std::min_element(density.begin(), density.end());
    double dmax = *std::max_element(density.begin(), density.end());
    X.normalization = {ColumnRange{0.0, 1.0}, ColumnRange{0.0, 1.0}, ColumnRange{0.0, 1.0},
                       ColumnRange{dmin, dmax}};
    if (dmax == dmin) {
        rep.warnings.push_back(
            "all density values identical; overcrowding column set to 0 (zero range)");
        for (auto& row : X.values) row[3] = 0.0;
    } else {
        for (std::size_t i = 0; i < X.rows(); ++i)
            X.values[i][3] = (density[i] - dmin) / (dmax - dmin);
    }
    return X;
}

std::vector<LocalitySummary> aggregate_ssi(const SsiVector& ssi,
                                           const std::vector<BlockRecord>& records) {
    struct Member {
        double value;
        double weight;
    };
    std::map<std::string, std::pair<std::string, double>> by_block;  // id -> (locality, houses)
    for (const auto& r : records)
        by_block.emplace(r.block_id, std::make_pair(r.locality_id,
                                                    static_cast<double>(r.houses_total)));

    std::map<std::string, std::vector<Member>> localities;
    std::vector<std::string> orphans;
    for (std::size_t i = 0; i < ssi.size(); ++i) {
        auto it = by_block.find(ssi.block_ids[i]);
        if (it == by_block.end()) {
            orphans.push_back(ssi.block_ids[i]);
            continue;
        }
        localities[it->second.first].push_back({ssi.values[i], it->second.second});
    }
    if (!orphans.empty()) {
        std::string msg = "blocks without a locality mapping:";
        for (const auto& id : orphans) msg += " " + id;
        throw ValidationError(msg);
    }

    std::vector<LocalitySummary> out;
    for (auto& [locality, members] : localities) {
        LocalitySummary s;
        s.locality_id = locality;
        s.n_blocks = members.size();
        std::vector<double> vals;
        double sum = 0, wsum = 0, w = 0;
        for (const auto& m : members) {
            vals.push_back(m.value);
            sum += m.value;
            wsum += m.value * m.weight;
            w += m.weight;
        }
        std::sort(vals.begin(), vals.end());
        s.mean = sum / static_cast<double>(vals.size());
        s.weighted_mean = w > 0 ? wsum / w : s.mean;
        s.min = vals.front();
        s.q1 = quantile(vals, 0.25);
        s.median = quantile(vals, 0.5);
        s.q3 = quantile(vals, 0.75);
        s.max = vals.back();
        out.push_back(std::move(s));
    }
    return out;  // std::map iteration keeps locality order sorted
}

}  // namespace ssikit
