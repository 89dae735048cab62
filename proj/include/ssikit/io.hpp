#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ssikit/efa.hpp"
#include "ssikit/ingest.hpp"
#include "ssikit/ssi.hpp"
#include "ssikit/texture.hpp"

namespace ssikit {

// Delimited-text formats shared by the CLI, the generators and the tests.
// All writers are atomic and deterministic (no timestamps).

void write_attribute_file(const std::filesystem::path& path, const AttributeMatrix& X);
AttributeMatrix read_attribute_file(const std::filesystem::path& path);

void write_ssi_file(const std::filesystem::path& path, const SsiVector& ssi);
SsiVector read_ssi_file(const std::filesystem::path& path);

struct BlockFeatureRow {
    std::string block_id;
    GlcmFeatures features;
    long n_windows = 0;
};

void write_feature_file(const std::filesystem::path& path,
                        const std::vector<BlockFeatureRow>& rows);
std::vector<BlockFeatureRow> read_feature_file(const std::filesystem::path& path);

void write_cluster_file(const std::filesystem::path& path,
                        const std::vector<std::string>& block_ids,
                        const std::vector<int>& labels);

void write_summary_file(const std::filesystem::path& path,
                        const std::vector<LocalitySummary>& summaries);

void write_peaks_file(const std::filesystem::path& path, const std::vector<KdePeak>& peaks);
void write_kde_file(const std::filesystem::path& path, const KdeCurve& curve);

void write_label_map(const std::filesystem::path& path,
                     const std::vector<std::pair<uint16_t, std::string>>& labels);
std::map<uint16_t, std::string> read_label_map(const std::filesystem::path& path);

// Census table in the canonical synthetic column layout plus the matching
// column-map config, so generated bundles feed straight into `ingest`.
void write_census_file(const std::filesystem::path& path,
                       const std::vector<BlockRecord>& records);
CensusConfig synth_census_config();
void write_census_config(const std::filesystem::path& path, const CensusConfig& config);

}  // namespace ssikit
