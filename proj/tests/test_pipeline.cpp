#include <doctest.h>

#include <vector>

#include "helpers.hpp"
#include "ssikit/cluster.hpp"
#include "ssikit/efa.hpp"
#include "ssikit/io.hpp"
#include "ssikit/stats.hpp"
#include "ssikit/synth.hpp"
#include "ssikit/texture.hpp"
#include "ssikit/util.hpp"

using namespace ssikit;
using testing::TempDir;

TEST_CASE("census to index pipeline round-trips through the file formats") {
    TempDir dir("pipe");
    auto bundle = generate_census(1000, {0.72, 0.43, 0.84, 0.46}, 7);

    write_census_file(dir.file("census.csv"), bundle.records);
    write_census_config(dir.file("config.kv"), synth_census_config());

    auto cfg = CensusConfig::load(dir.file("config.kv"));
    auto records = parse_census(dir.file("census.csv"), cfg);
    REQUIRE(records.size() == 1000);

    AttributeMatrix X = derive_attributes(records);
    write_attribute_file(dir.file("attrs.csv"), X);
    AttributeMatrix X2 = read_attribute_file(dir.file("attrs.csv"));
    REQUIRE(X2.rows() == X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(std::abs(X2.values[i][j] - X.values[i][j]) <= 1e-6);  // %.6g rounding

    CorrelationSummary s = correlation_summary(X2);
    CHECK(s.factorable);

    FactorSolution sol = principal_axis_factor(s.r_matrix);
    CHECK(sol.converged);

    SsiVector ssi = compute_ssi(X2, sol.weights);
    write_ssi_file(dir.file("ssi.csv"), ssi);
    SsiVector ssi2 = read_ssi_file(dir.file("ssi.csv"));
    REQUIRE(ssi2.size() == ssi.size());

    auto summaries = aggregate_ssi(ssi2, records);
    CHECK(summaries.size() == 100);  // 10 blocks per locality

    auto clusters = kmeans(X2, 4, 3);
    CHECK(clusters.labels.size() == 1000);

    auto peaks = find_modes(ssi2);
    CHECK(peaks.size() >= 1);
    CHECK(peaks.size() <= 3);
}

TEST_CASE("texture variance anti-correlates with the planted index") {
    TempDir dir("pipe");
    const int blocks = 16;
    auto bundle = generate_census(100, {0.72, 0.43, 0.84, 0.46}, 8);
    bundle.records.resize(blocks);
    bundle.scores.resize(blocks);

    AttributeMatrix X = derive_attributes(bundle.records);
    FactorSolution sol = principal_axis_factor(correlation_matrix(X));
    SsiVector ssi = compute_ssi(X, sol.weights);

    SsiVector planted;
    planted.block_ids = ssi.block_ids;
    planted.values = bundle.scores;
    RasterLayout layout{4, 4, 132, 132};
    auto raster = generate_raster(planted, layout, 9);

    TextureOptions opt;  // defaults: window 21, levels 32
    auto texture = block_texture(raster.raster, raster.mask, opt);
    REQUIRE(texture.missing.empty());
    REQUIRE(static_cast<int>(texture.blocks.size()) == blocks);

    std::vector<double> x, y;
    for (const auto& [label, bf] : texture.blocks) {
        x.push_back(ssi.values[label - 1]);
        y.push_back(bf.mean.variance);
    }
    CHECK(pearson(x, y) <= -0.5);
}

TEST_CASE("file writers are byte-stable across reruns") {
    TempDir dir("pipe");
    auto bundle = generate_census(200, {0.6, 0.5, 0.7, 0.4}, 10);
    AttributeMatrix X = derive_attributes(bundle.records);
    FactorSolution sol = principal_axis_factor(correlation_matrix(X));
    SsiVector ssi = compute_ssi(X, sol.weights);

    write_ssi_file(dir.file("a.csv"), ssi);
    write_ssi_file(dir.file("b.csv"), ssi);
    CHECK(read_file(dir.file("a.csv")) == read_file(dir.file("b.csv")));

    auto clusters = kmeans(X, 4, 5);
    write_cluster_file(dir.file("ca.csv"), X.block_ids, clusters.labels);
    write_cluster_file(dir.file("cb.csv"), X.block_ids, clusters.labels);
    CHECK(read_file(dir.file("ca.csv")) == read_file(dir.file("cb.csv")));
}

TEST_CASE("feature file round-trips through read_feature_file") {
    TempDir dir("pipe");
    std::vector<BlockFeatureRow> rows;
    GlcmFeatures f;
    f.uniformity = 0.25;
    f.entropy = 1.5;
    f.contrast = 12.0;
    f.inverse_difference_moment = 0.5;
    f.variance = 33.25;
    f.covariance = -3.5;
    f.correlation = -0.125;
    rows.push_back({"B1", f, 441});
    write_feature_file(dir.file("f.csv"), rows);
    auto back = read_feature_file(dir.file("f.csv"));
    REQUIRE(back.size() == 1);
    CHECK(back[0].block_id == "B1");
    CHECK(back[0].n_windows == 441);
    CHECK(back[0].features.variance == 33.25);
    CHECK(back[0].features.correlation == -0.125);
}

TEST_CASE("label map round-trips") {
    TempDir dir("pipe");
    write_label_map(dir.file("labels.csv"), {{1, "B01"}, {2, "B02"}});
    auto map = read_label_map(dir.file("labels.csv"));
    REQUIRE(map.size() == 2);
    CHECK(map.at(1) == "B01");
    CHECK(map.at(2) == "B02");
}
