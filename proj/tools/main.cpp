// ssikit command line: census ingestion, factor-based severity index,
// distribution diagnostics, raster texture features and the k-means baseline.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ssikit/cluster.hpp"
#include "ssikit/efa.hpp"
#include "ssikit/error.hpp"
#include "ssikit/ingest.hpp"
#include "ssikit/io.hpp"
#include "ssikit/pgm.hpp"
#include "ssikit/stats.hpp"
#include "ssikit/synth.hpp"
#include "ssikit/texture.hpp"
#include "ssikit/util.hpp"

namespace fs = std::filesystem;
using namespace ssikit;

namespace {

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "ssikit: warning: " << w << "\n";
}

std::array<double, 4> parse_loadings(const std::string& text) {
    auto parts = split(text, ',');
    if (parts.size() != 4)
        throw ValidationError("--loadings expects 4 comma-separated values");
    std::array<double, 4> out{};
    for (int j = 0; j < 4; ++j) {
        std::string v = trim(parts[j]);
        std::size_t used = 0;
        try {
            out[j] = std::stod(v, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (v.empty() || used != v.size())
            throw ValidationError("--loadings: '" + parts[j] + "' is not a number");
    }
    return out;
}

struct IngestArgs {
    std::string census, config, output;
};

void run_ingest(const IngestArgs& a) {
    CensusConfig cfg = CensusConfig::load(a.config);
    ParseReport parse_rep;
    auto records = parse_census(a.census, cfg, &parse_rep);
    print_warnings(parse_rep.warnings);

    DeriveReport derive_rep;
    AttributeMatrix X = derive_attributes(records, &derive_rep);
    print_warnings(derive_rep.warnings);

    write_attribute_file(a.output, X);

    std::string meta = "[input]\n";
    meta += "census=" + a.census + "\n";
    meta += "checksum=" + file_checksum(a.census) + "\n";
    meta += "n_records=" + std::to_string(records.size()) + "\n";
    meta += "[derivation]\n";
    meta += "n_rows=" + std::to_string(X.rows()) + "\n";
    meta += "excluded_zero_houses=" + std::to_string(derive_rep.excluded_zero_houses) + "\n";
    meta += "excluded_zero_rooms=" + std::to_string(derive_rep.excluded_zero_rooms) + "\n";
    meta += "columns=sanitation,water,structural,overcrowding\n";
    for (int j = 0; j < 4; ++j) {
        meta += std::string(kAttributeNames[j]) + "_min=" + fmt_num(X.normalization[j].min) + "\n";
        meta += std::string(kAttributeNames[j]) + "_max=" + fmt_num(X.normalization[j].max) + "\n";
    }
    atomic_write(a.output + ".meta", meta);
    std::cout << "wrote " << X.rows() << " attribute rows to " << a.output << "\n";
}

struct EfaArgs {
    std::string attributes, output, report;
    double tol = 1e-6;
    int max_iter = 200;
    std::string weights = "fit";
};

void run_efa(const EfaArgs& a) {
    AttributeMatrix X = read_attribute_file(a.attributes);

    std::string report = "[adequacy]\n";
    report += "n_blocks=" + std::to_string(X.rows()) + "\n";

    Vec4 w = Vec4::Zero();
    std::string solution;

    if (a.weights == "fit") {
        CorrelationSummary s = correlation_summary(X);
        report += "kmo=" + fmt_num(s.kmo) + "\n";
        report += std::string("kmo_verdict=") +
                  (s.factorable ? "factorable" : "not_factorable") + "\n";
        for (int j = 0; j < 4; ++j)
            report += "msa_" + std::string(kAttributeNames[j]) + "=" + fmt_num(s.msa(j)) + "\n";
        if (!s.factorable)
            throw ValidationError("data not factorable (KMO = " + fmt_num(s.kmo) +
                                  " < 0.6); no index computed");

        FactorSolution sol = principal_axis_factor(s.r_matrix, a.tol, a.max_iter);
        if (!sol.converged)
            std::cerr << "ssikit: warning: factor iteration did not converge after "
                      << sol.iterations << " iterations\n";
        w = sol.weights;
        solution += "weights_source=fit\n";
        for (int j = 0; j < 4; ++j)
            solution += "loading_" + std::string(kAttributeNames[j]) + "=" +
                        fmt_num(sol.loadings(j)) + "\n";
        for (int j = 0; j < 4; ++j)
            solution += "communality_" + std::string(kAttributeNames[j]) + "=" +
                        fmt_num(sol.communalities(j)) + "\n";
        solution += "iterations=" + std::to_string(sol.iterations) + "\n";
        solution += std::string("converged=") + (sol.converged ? "true" : "false") + "\n";
        solution += "tolerance=" + fmt_num(sol.tolerance) + "\n";
    } else if (a.weights.rfind("fixed:", 0) == 0) {
        fs::path wpath = a.weights.substr(6);
        auto kv = read_kv(wpath);
        Vec4 raw;
        for (int j = 0; j < 4; ++j) {
            std::string key = "weight_" + std::string(kAttributeNames[j]);
            auto it = kv.find(key);
            if (it == kv.end())
                throw ValidationError("weights file '" + wpath.string() + "' is missing '" +
                                      key + "'");
            try {
                raw(j) = std::stod(it->second);
            } catch (const std::exception&) {
                throw ValidationError("weights file '" + wpath.string() + "': '" +
                                      it->second + "' is not a number");
            }
            if (raw(j) < 0.0)
                throw ValidationError("weights file '" + wpath.string() +
                                      "': negative weight " + key);
        }
        if (raw.sum() <= 0.0)
            throw ValidationError("weights file '" + wpath.string() + "': weights sum to zero");
        w = raw / raw.sum();
        solution += "weights_source=fixed:" + wpath.string() + "\n";

        // Adequacy is informational only when weights are externally pinned.
        try {
            CorrelationSummary s = correlation_summary(X);
            report += "kmo=" + fmt_num(s.kmo) + "\n";
            report += std::string("kmo_verdict=") +
                      (s.factorable ? "factorable" : "not_factorable") + "\n";
        } catch (const ValidationError& e) {
            report += "kmo_verdict=unavailable\n";
            std::cerr << "ssikit: warning: adequacy not computed: " << e.what() << "\n";
        }
    } else {
        throw ValidationError("--weights must be 'fit' or 'fixed:<file>'");
    }

    for (int j = 0; j < 4; ++j)
        solution += "weight_" + std::string(kAttributeNames[j]) + "=" + fmt_num(w(j)) + "\n";

    SsiVector ssi = compute_ssi(X, w);
    write_ssi_file(a.output, ssi);
    atomic_write(a.report, report + "[solution]\n" + solution);
    std::cout << "wrote " << ssi.size() << " index values to " << a.output << "\n";
}

struct ModesArgs {
    std::string ssi, output, kde;
    double bandwidth = 0.0;  // 0 selects the Silverman rule
    int grid = 512;
};

void run_modes(const ModesArgs& a) {
    if (a.bandwidth < 0.0) throw ValidationError("--bandwidth must be positive");
    SsiVector ssi = read_ssi_file(a.ssi);
    double h = a.bandwidth > 0.0 ? a.bandwidth : silverman_bandwidth(ssi.values);
    auto peaks = find_modes(ssi, h, a.grid);
    write_peaks_file(a.output, peaks);
    std::string kde_path = a.kde.empty() ? a.output + ".kde.csv" : a.kde;
    write_kde_file(kde_path, kde_curve(ssi.values, h, a.grid));
    std::cout << "bandwidth=" << fmt_num(h) << " peaks=" << peaks.size() << "\n";
    for (const auto& p : peaks)
        std::cout << "peak location=" << fmt_num(p.location)
                  << " density=" << fmt_num(p.density) << "\n";
}

struct AggregateArgs {
    std::string ssi, census, config, output;
    std::string level = "locality";
};

void run_aggregate(const AggregateArgs& a) {
    if (a.level != "locality")
        throw ValidationError("unsupported aggregation level '" + a.level + "'");
    SsiVector ssi = read_ssi_file(a.ssi);
    CensusConfig cfg = CensusConfig::load(a.config);
    ParseReport rep;
    auto records = parse_census(a.census, cfg, &rep);
    print_warnings(rep.warnings);
    auto summaries = aggregate_ssi(ssi, records);
    write_summary_file(a.output, summaries);
    std::cout << "wrote " << summaries.size() << " locality summaries to " << a.output << "\n";
}

struct GlcmArgs {
    std::string raster, mask, labels, output;
    int window = 21;
    int levels = 32;
    std::string mode = "four-orientations";
    int threads = 1;
    bool exclude_straddling = false;
};

void run_glcm(const GlcmArgs& a) {
    TextureOptions opt;
    opt.window = a.window;
    opt.levels = a.levels;
    opt.threads = a.threads;
    opt.exclude_straddling = a.exclude_straddling;
    if (a.mode == "four-orientations")
        opt.mode = OffsetMode::kFourOrientations;
    else if (a.mode == "shift11")
        opt.mode = OffsetMode::kShift11;
    else
        throw ValidationError("--mode must be 'four-orientations' or 'shift11'");

    Raster raster = read_pgm(a.raster);
    Raster mask_raster = read_pgm(a.mask);
    BlockMask mask{mask_raster.width, mask_raster.height, std::move(mask_raster.pixels)};
    auto label_map = read_label_map(a.labels);

    BlockTextureResult result = block_texture(raster, mask, opt);

    std::vector<uint16_t> unmapped;
    std::vector<BlockFeatureRow> rows;
    for (const auto& [label, bf] : result.blocks) {
        auto it = label_map.find(label);
        if (it == label_map.end()) {
            unmapped.push_back(label);
            continue;
        }
        rows.push_back({it->second, bf.mean, bf.n_windows});
    }
    if (!unmapped.empty()) {
        std::string msg = "mask labels missing from '" + a.labels + "':";
        for (uint16_t l : unmapped) msg += " " + std::to_string(l);
        throw ValidationError(msg);
    }
    for (uint16_t label : result.missing) {
        auto it = label_map.find(label);
        std::cerr << "ssikit: warning: block "
                  << (it != label_map.end() ? it->second : std::to_string(label))
                  << " has no valid window center; reported as missing\n";
    }

    write_feature_file(a.output, rows);
    std::cout << "wrote texture features for " << rows.size() << " blocks to " << a.output
              << "\n";
}

struct ValidateArgs {
    std::string ssi, features, output;
    std::string feature = "variance";
};

void run_validate(const ValidateArgs& a) {
    SsiVector ssi = read_ssi_file(a.ssi);
    auto rows = read_feature_file(a.features);

    std::map<std::string, double> by_block;
    for (std::size_t i = 0; i < ssi.size(); ++i) by_block[ssi.block_ids[i]] = ssi.values[i];

    std::vector<double> x, y;
    std::set<std::string> matched;
    for (const auto& r : rows) {
        auto it = by_block.find(r.block_id);
        if (it == by_block.end()) continue;
        x.push_back(it->second);
        y.push_back(feature_by_name(r.features, a.feature));
        matched.insert(r.block_id);
    }
    if (x.size() < rows.size() || matched.size() < ssi.size())
        std::cerr << "ssikit: warning: " << (ssi.size() - matched.size())
                  << " index blocks and " << (rows.size() - x.size())
                  << " feature blocks had no counterpart\n";

    double r = pearson(x, y);
    std::string report = "[validation]\n";
    report += "feature=" + a.feature + "\n";
    report += "n=" + std::to_string(x.size()) + "\n";
    report += "pearson_r=" + fmt_num(r) + "\n";
    if (!a.output.empty()) atomic_write(a.output, report);
    std::cout << report;
}

struct KmeansArgs {
    std::string attributes, output;
    int k = 4;
    uint64_t seed = 1;
    int max_iter = 100;
};

void run_kmeans(const KmeansArgs& a) {
    AttributeMatrix X = read_attribute_file(a.attributes);
    ClusterResult result = kmeans(X, a.k, a.seed, a.max_iter);
    write_cluster_file(a.output, X.block_ids, result.labels);
    std::cout << "k=" << a.k << " iterations=" << result.iterations
              << " inertia=" << fmt_num(result.inertia) << "\n";
}

struct SynthArgs {
    std::string out;
    std::size_t blocks = 100;
    uint64_t seed = 1;
    bool with_raster = false;
    int grid_rows = 10, grid_cols = 10;
    int width = 512, height = 512;
    std::string loadings = "0.72,0.43,0.84,0.46";
    double noise = 0.05;
};

void run_synth(const SynthArgs& a) {
    std::array<double, 4> loadings = parse_loadings(a.loadings);
    if (a.with_raster && a.grid_rows * a.grid_cols != static_cast<int>(a.blocks))
        throw ValidationError("--with-raster requires blocks == grid-rows * grid-cols");
    SynthOptions opt;
    opt.noise_scale = a.noise;
    CensusBundle bundle = generate_census(a.blocks, loadings, a.seed, opt);

    fs::create_directories(a.out);
    fs::path dir(a.out);
    write_census_file(dir / "census.csv", bundle.records);
    write_census_config(dir / "census_config.kv", synth_census_config());

    std::string scores = "block_id,score\n";
    for (std::size_t i = 0; i < bundle.records.size(); ++i)
        scores += bundle.records[i].block_id + "," + fmt_num(bundle.scores[i]) + "\n";
    atomic_write(dir / "truth_scores.csv", scores);

    std::string truth = "[generator]\n";
    truth += "algorithm=splitmix64\n";
    truth += "seed=" + std::to_string(a.seed) + "\n";
    truth += "blocks=" + std::to_string(a.blocks) + "\n";
    truth += "noise_scale=" + fmt_num(a.noise) + "\n";
    truth += "mixture=" + fmt_num(opt.mix_weight1) + "*N(" + fmt_num(opt.mix_mean1) + "," +
             fmt_num(opt.mix_sd1) + ")+" + fmt_num(1 - opt.mix_weight1) + "*N(" +
             fmt_num(opt.mix_mean2) + "," + fmt_num(opt.mix_sd2) + ")\n";
    for (int j = 0; j < 4; ++j)
        truth += "loading_" + std::string(kAttributeNames[j]) + "=" + fmt_num(loadings[j]) + "\n";

    if (a.with_raster) {
        SsiVector planted;
        for (std::size_t i = 0; i < bundle.records.size(); ++i) {
            planted.block_ids.push_back(bundle.records[i].block_id);
            planted.values.push_back(bundle.scores[i]);
        }
        RasterLayout layout{a.grid_rows, a.grid_cols, a.width, a.height};
        RasterBundle rb = generate_raster(planted, layout, a.seed + 1);
        write_pgm(dir / "raster.pgm", rb.raster, 255);
        Raster mask_raster{rb.mask.width, rb.mask.height, rb.mask.labels};
        write_pgm(dir / "mask.pgm", mask_raster, 65535);

        std::vector<std::pair<uint16_t, std::string>> labels;
        std::string params = "block_id,amplitude\n";
        for (std::size_t i = 0; i < a.blocks; ++i) {
            labels.emplace_back(static_cast<uint16_t>(i + 1), planted.block_ids[i]);
            params += planted.block_ids[i] + "," + std::to_string(rb.amplitudes[i]) + "\n";
        }
        write_label_map(dir / "labels.csv", labels);
        atomic_write(dir / "raster_params.csv", params);
        truth += "raster=" + std::to_string(a.width) + "x" + std::to_string(a.height) + "\n";
        truth += "grid=" + std::to_string(a.grid_rows) + "x" + std::to_string(a.grid_cols) + "\n";
    }
    atomic_write(dir / "truth.kv", truth);
    std::cout << "wrote synthetic bundle (" << a.blocks << " blocks) to " << a.out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"block-level deprivation index and raster texture toolkit"};
    app.require_subcommand(1);

    IngestArgs ingest_args;
    auto* c_ingest =
        app.add_subcommand("ingest", "derive normalized attributes from a census table");
    c_ingest->add_option("--census", ingest_args.census, "delimited census table")->required();
    c_ingest->add_option("--config", ingest_args.config, "column-map config (key=value)")
        ->required();
    c_ingest->add_option("--output,-o", ingest_args.output, "attribute file to write")
        ->required();
    c_ingest->callback([&] { run_ingest(ingest_args); });

    EfaArgs efa_args;
    auto* c_efa = app.add_subcommand("efa", "fit the one-factor model and compute the index");
    c_efa->add_option("--attributes", efa_args.attributes, "attribute file")->required();
    c_efa->add_option("--output,-o", efa_args.output, "index file to write")->required();
    c_efa->add_option("--report", efa_args.report, "solution report to write")->required();
    c_efa->add_option("--tol", efa_args.tol, "communality convergence tolerance");
    c_efa->add_option("--max-iter", efa_args.max_iter, "iteration cap");
    c_efa->add_option("--weights", efa_args.weights, "'fit' or 'fixed:<report file>'");
    c_efa->callback([&] { run_efa(efa_args); });

    ModesArgs modes_args;
    auto* c_modes =
        app.add_subcommand("modes", "kernel density peaks of the index distribution");
    c_modes->add_option("--ssi", modes_args.ssi, "index file")->required();
    c_modes->add_option("--output,-o", modes_args.output, "peak list to write")->required();
    c_modes->add_option("--kde", modes_args.kde,
                        "KDE curve file (default: <output>.kde.csv)");
    c_modes->add_option("--bandwidth", modes_args.bandwidth,
                        "kernel bandwidth (default: Silverman)");
    c_modes->add_option("--grid", modes_args.grid, "evaluation grid size");
    c_modes->callback([&] { run_modes(modes_args); });

    AggregateArgs agg_args;
    auto* c_agg = app.add_subcommand("aggregate", "per-locality index summaries");
    c_agg->add_option("--ssi", agg_args.ssi, "index file")->required();
    c_agg->add_option("--census", agg_args.census, "census table (locality ids and weights)")
        ->required();
    c_agg->add_option("--config", agg_args.config, "column-map config")->required();
    c_agg->add_option("--level", agg_args.level, "aggregation level (locality)");
    c_agg->add_option("--output,-o", agg_args.output, "summary file to write")->required();
    c_agg->callback([&] { run_aggregate(agg_args); });

    GlcmArgs glcm_args;
    auto* c_glcm = app.add_subcommand("glcm", "per-block co-occurrence texture features");
    c_glcm->add_option("--raster", glcm_args.raster, "intensity raster (PGM)")->required();
    c_glcm->add_option("--mask", glcm_args.mask, "block label raster (PGM)")->required();
    c_glcm->add_option("--labels", glcm_args.labels, "label,block_id sidecar")->required();
    c_glcm->add_option("--window", glcm_args.window, "odd window size");
    c_glcm->add_option("--levels", glcm_args.levels, "quantization levels");
    c_glcm->add_option("--mode", glcm_args.mode, "'four-orientations' or 'shift11'");
    c_glcm->add_option("--threads", glcm_args.threads, "worker threads")
        ->envname("SSIKIT_THREADS");
    c_glcm->add_flag("--exclude-straddling", glcm_args.exclude_straddling,
                     "drop windows that cross block boundaries");
    c_glcm->add_option("--output,-o", glcm_args.output, "feature file to write")->required();
    c_glcm->callback([&] { run_glcm(glcm_args); });

    ValidateArgs val_args;
    auto* c_val =
        app.add_subcommand("validate", "correlate the index against a texture feature");
    c_val->add_option("--ssi", val_args.ssi, "index file")->required();
    c_val->add_option("--features", val_args.features, "texture feature file")->required();
    c_val->add_option("--feature", val_args.feature, "feature column to correlate");
    c_val->add_option("--output,-o", val_args.output, "optional report file");
    c_val->callback([&] { run_validate(val_args); });

    KmeansArgs km_args;
    auto* c_km = app.add_subcommand("kmeans", "k-means baseline over the attributes");
    c_km->add_option("--attributes", km_args.attributes, "attribute file")->required();
    c_km->add_option("--k", km_args.k, "cluster count");
    c_km->add_option("--seed", km_args.seed, "generator seed");
    c_km->add_option("--max-iter", km_args.max_iter, "iteration cap");
    c_km->add_option("--output,-o", km_args.output, "cluster file to write")->required();
    c_km->callback([&] { run_kmeans(km_args); });

    SynthArgs synth_args;
    auto* c_synth =
        app.add_subcommand("synth", "deterministic synthetic census / raster bundle");
    c_synth->add_option("--blocks", synth_args.blocks, "number of blocks");
    c_synth->add_option("--seed", synth_args.seed, "generator seed");
    c_synth->add_option("--out", synth_args.out, "output directory")->required();
    c_synth->add_flag("--with-raster", synth_args.with_raster, "also render raster + mask");
    c_synth->add_option("--grid-rows", synth_args.grid_rows, "block grid rows");
    c_synth->add_option("--grid-cols", synth_args.grid_cols, "block grid cols");
    c_synth->add_option("--width", synth_args.width, "raster width");
    c_synth->add_option("--height", synth_args.height, "raster height");
    c_synth->add_option("--loadings", synth_args.loadings, "planted loadings, comma separated");
    c_synth->add_option("--noise", synth_args.noise, "attribute noise scale");
    c_synth->callback([&] { run_synth(synth_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ValidationError& e) {
        std::cerr << "ssikit: error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "ssikit: I/O error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ssikit: unexpected error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
