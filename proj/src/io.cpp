#include "ssikit/io.hpp"

#include <sstream>

#include "ssikit/error.hpp"
#include "ssikit/util.hpp"

namespace ssikit {

namespace {

double parse_double(const std::string& cell, const std::filesystem::path& path,
                    std::size_t row) {
    std::string v = trim(cell);
    std::size_t used = 0;
    double d = 0;
    try {
        d = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (v.empty() || used != v.size())
        throw ValidationError(path.string() + " row " + std::to_string(row) +
                              ": '" + cell + "' is not a number");
    return d;
}

long parse_long(const std::string& cell, const std::filesystem::path& path, std::size_t row) {
    std::string v = trim(cell);
    std::size_t used = 0;
    long d = 0;
    try {
        d = std::stol(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (v.empty() || used != v.size())
        throw ValidationError(path.string() + " row " + std::to_string(row) +
                              ": '" + cell + "' is not an integer");
    return d;
}

// Header-checked CSV: returns data rows already split, validating the column
// count against the header.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               const std::string& expected_header) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line))
        throw ValidationError(path.string() + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected_header)
        throw ValidationError(path.string() + ": expected header '" + expected_header +
                              "', got '" + line + "'");
    std::size_t n_cols = split(expected_header, ',').size();
    std::vector<std::vector<std::string>> rows;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto cells = split(line, ',');
        if (cells.size() != n_cols)
            throw ValidationError(path.string() + " row " + std::to_string(row) +
                                  ": expected " + std::to_string(n_cols) + " fields");
        rows.push_back(std::move(cells));
    }
    return rows;
}

constexpr const char* kAttributeHeader = "block_id,sanitation,water,structural,overcrowding";
constexpr const char* kSsiHeader = "block_id,ssi";
constexpr const char* kFeatureHeader =
    "block_id,uniformity,entropy,contrast,idm,variance,covariance,correlation,n_windows";
constexpr const char* kClusterHeader = "block_id,cluster";
constexpr const char* kSummaryHeader =
    "locality_id,n_blocks,mean,weighted_mean,min,q1,median,q3,max";
constexpr const char* kPeaksHeader = "location,density";
constexpr const char* kKdeHeader = "x,density";
constexpr const char* kLabelHeader = "label,block_id";

}  // namespace

void write_attribute_file(const std::filesystem::path& path, const AttributeMatrix& X) {
    std::string out(kAttributeHeader);
    out += '\n';
    for (std::size_t i = 0; i < X.rows(); ++i) {
        out += X.block_ids[i];
        for (int j = 0; j < 4; ++j) {
            out += ',';
            out += fmt_num(X.values[i][j]);
        }
        out += '\n';
    }
    atomic_write(path, out);
}

AttributeMatrix read_attribute_file(const std::filesystem::path& path) {
    AttributeMatrix X;
    std::size_t row = 1;
    for (const auto& cells : read_csv(path, kAttributeHeader)) {
        ++row;
        X.block_ids.push_back(trim(cells[0]));
        std::array<double, 4> vals{};
        for (int j = 0; j < 4; ++j) {
            vals[j] = parse_double(cells[j + 1], path, row);
            if (vals[j] < 0.0 || vals[j] > 1.0)
                throw ValidationError(path.string() + ": attribute outside [0,1] for block " +
                                      X.block_ids.back());
        }
        X.values.push_back(vals);
    }
    return X;
}

void write_ssi_file(const std::filesystem::path& path, const SsiVector& ssi) {
    std::string out(kSsiHeader);
    out += '\n';
    for (std::size_t i = 0; i < ssi.size(); ++i)
        out += ssi.block_ids[i] + "," + fmt_num(ssi.values[i]) + "\n";
    atomic_write(path, out);
}

SsiVector read_ssi_file(const std::filesystem::path& path) {
    SsiVector ssi;
    std::size_t row = 1;
    for (const auto& cells : read_csv(path, kSsiHeader)) {
        ++row;
        ssi.block_ids.push_back(trim(cells[0]));
        double v = parse_double(cells[1], path, row);
        if (v < 0.0 || v > 1.0)
            throw ValidationError(path.string() + ": index value " + cells[1] +
                                  " outside [0,1] for block " + ssi.block_ids.back());
        ssi.values.push_back(v);
    }
    return ssi;
}

void write_feature_file(const std::filesystem::path& path,
                        const std::vector<BlockFeatureRow>& rows) {
    std::string out(kFeatureHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += r.block_id;
        for (double v : feature_values(r.features)) {
            out += ',';
            out += fmt_num(v);
        }
        out += ',';
        out += std::to_string(r.n_windows);
        out += '\n';
    }
    atomic_write(path, out);
}

std::vector<BlockFeatureRow> read_feature_file(const std::filesystem::path& path) {
    std::vector<BlockFeatureRow> rows;
    std::size_t row = 1;
    for (const auto& cells : read_csv(path, kFeatureHeader)) {
        ++row;
        BlockFeatureRow r;
        r.block_id = trim(cells[0]);
        std::array<double, 7> vals{};
        for (int j = 0; j < 7; ++j) vals[j] = parse_double(cells[j + 1], path, row);
        r.features = features_from_values(vals);
        r.n_windows = parse_long(cells[8], path, row);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_cluster_file(const std::filesystem::path& path,
                        const std::vector<std::string>& block_ids,
                        const std::vector<int>& labels) {
    std::string out(kClusterHeader);
    out += '\n';
    for (std::size_t i = 0; i < block_ids.size(); ++i)
        out += block_ids[i] + "," + std::to_string(labels[i]) + "\n";
    atomic_write(path, out);
}

void write_summary_file(const std::filesystem::path& path,
                        const std::vector<LocalitySummary>& summaries) {
    std::string out(kSummaryHeader);
    out += '\n';
    for (const auto& s : summaries) {
        out += s.locality_id;
        out += ',' + std::to_string(s.n_blocks);
        for (double v : {s.mean, s.weighted_mean, s.min, s.q1, s.median, s.q3, s.max}) {
            out += ',';
            out += fmt_num(v);
        }
        out += '\n';
    }
    atomic_write(path, out);
}

void write_peaks_file(const std::filesystem::path& path, const std::vector<KdePeak>& peaks) {
    std::string out(kPeaksHeader);
    out += '\n';
    for (const auto& p : peaks)
        out += fmt_num(p.location) + "," + fmt_num(p.density) + "\n";
    atomic_write(path, out);
}

void write_kde_file(const std::filesystem::path& path, const KdeCurve& curve) {
    std::string out(kKdeHeader);
    out += '\n';
    for (std::size_t i = 0; i < curve.x.size(); ++i)
        out += fmt_num(curve.x[i]) + "," + fmt_num(curve.density[i]) + "\n";
    atomic_write(path, out);
}

void write_label_map(const std::filesystem::path& path,
                     const std::vector<std::pair<uint16_t, std::string>>& labels) {
    std::string out(kLabelHeader);
    out += '\n';
    for (const auto& [label, id] : labels)
        out += std::to_string(label) + "," + id + "\n";
    atomic_write(path, out);
}

std::map<uint16_t, std::string> read_label_map(const std::filesystem::path& path) {
    std::map<uint16_t, std::string> map;
    std::size_t row = 1;
    for (const auto& cells : read_csv(path, kLabelHeader)) {
        ++row;
        long label = parse_long(cells[0], path, row);
        if (label < 1 || label > 65535)
            throw ValidationError(path.string() + ": label out of range: " + cells[0]);
        map[static_cast<uint16_t>(label)] = trim(cells[1]);
    }
    return map;
}

void write_census_file(const std::filesystem::path& path,
                       const std::vector<BlockRecord>& records) {
    std::string out = "BLOCK,LOCALITY,YEAR,HOUSES,NO_WATER,DIRT_SINGLE,NO_SANIT,OCCUPANTS,ROOMS\n";
    for (const auto& r : records) {
        out += r.block_id + ',' + r.locality_id + ',' + std::to_string(r.year) + ',' +
               std::to_string(r.houses_total) + ',' + std::to_string(r.houses_no_water) + ',' +
               std::to_string(r.houses_dirt_floor_or_single_room) + ',' +
               std::to_string(r.houses_no_sanitation) + ',' +
               std::to_string(r.occupants_total) + ',' + std::to_string(r.rooms_total) + '\n';
    }
    atomic_write(path, out);
}

CensusConfig synth_census_config() {
    CensusConfig cfg;
    cfg.delimiter = ',';
    cfg.columns = {{"block_id", "BLOCK"},
                   {"locality_id", "LOCALITY"},
                   {"year", "YEAR"},
                   {"houses_total", "HOUSES"},
                   {"houses_no_water", "NO_WATER"},
                   {"houses_dirt_floor_or_single_room", "DIRT_SINGLE"},
                   {"houses_no_sanitation", "NO_SANIT"},
                   {"occupants_total", "OCCUPANTS"},
                   {"rooms_total", "ROOMS"}};
    return cfg;
}

void write_census_config(const std::filesystem::path& path, const CensusConfig& config) {
    std::string out = "# column map: canonical field = header name in the census table\n";
    out += "delimiter=";
    out += (config.delimiter == '\t') ? "\\t" : std::string(1, config.delimiter);
    out += '\n';
    for (const auto& field : CensusConfig::field_names())
        out += field + "=" + config.columns.at(field) + "\n";
    atomic_write(path, out);
}

}  // namespace ssikit
