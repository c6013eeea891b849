// SPDX-License-Identifier: Apache-2.0
//
// beamlab - phased-array beam synthesis and benchmarking toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// beamlab command-line front end

#include "beamlab/codebook.hpp"
#include "beamlab/harness/config.hpp"
#include "beamlab/harness/csv.hpp"
#include "beamlab/harness/dataset.hpp"
#include "beamlab/harness/evaluate.hpp"
#include "beamlab/harness/latency.hpp"
#include "beamlab/harness/pipeline.hpp"
#include "beamlab/harness/report.hpp"
#include "beamlab/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace beamlab;

namespace
{
    struct Globals
    {
        std::optional<std::uint64_t> seed;
        std::string geometry; // rows,cols,spacing
        std::optional<double> grid_step;
        std::string config;
        bool verbose = false;
    };

    RunConfig resolve(const Globals &g)
    {
        RunConfig cfg = g.config.empty() ? RunConfig{} : load_config(g.config);
        if (g.seed)
            cfg.seed = *g.seed;
        if (!g.geometry.empty())
        {
            const auto v = csv::parse_numbers(g.geometry);
            if (v.size() != 3 || v[0] != std::floor(v[0]) || v[1] != std::floor(v[1]))
                throw std::invalid_argument("--geometry expects rows,cols,spacing.");
            cfg.layout.rows = static_cast<int>(v[0]);
            cfg.layout.cols = static_cast<int>(v[1]);
            cfg.layout.spacing_wl = v[2];
        }
        if (g.grid_step)
            cfg.grid_step = *g.grid_step;
        cfg.validate();
        return cfg;
    }

    void check_layout(const PlanarLayout &expected, const PlanarLayout &got, const std::string &what)
    {
        if (!(expected == got))
            throw std::invalid_argument(what + " was built for a different array layout.");
    }

    std::vector<BeamPointingAngle> load_targets(const std::string &test_csv, std::size_t count,
                                                const RunConfig &cfg)
    {
        if (!test_csv.empty())
        {
            const Dataset ds = read_dataset_csv(test_csv);
            const std::size_t n = count ? std::min(count, ds.size()) : ds.size();
            return {ds.bpas().begin(), ds.bpas().begin() + static_cast<long>(n)};
        }
        SectorSpec s = cfg.sector;
        s.count = count ? count : cfg.test_count;
        s.seed = derive_seeds(cfg.seed).evaluation;
        return sample_targets(s);
    }

    void write_reports(const std::vector<EvalReport> &reports, const std::string &summary, const std::string &cdf)
    {
        const std::string text = report::summary_json(reports);
        if (summary.empty() || summary == "-")
            std::cout << text;
        else
            io::write_text(summary, text);
        if (!cdf.empty())
            report::write_cdf_csv(cdf, reports);
    }

    WeightSource make_source(const std::string &approach, const std::string &model, const std::string &codebook,
                             const RunConfig &cfg)
    {
        if (approach == "mgb")
            return WeightSource::mgb();
        if (approach == "nn")
        {
            if (model.empty())
                throw std::invalid_argument("--model is required for the nn approach.");
            auto reg = std::make_shared<const nn::PhaseRegressor>(io::load_regressor(model));
            if (reg->model.output_dim() != cfg.layout.rows * cfg.layout.cols)
                throw std::invalid_argument("Model output width does not match the array.");
            return WeightSource::neural(std::move(reg));
        }
        if (approach == "cb")
        {
            if (codebook.empty())
                throw std::invalid_argument("--codebook is required for the cb approach.");
            auto cb = std::make_shared<const Codebook>(io::load_codebook(codebook));
            check_layout(cfg.layout, cb->layout, "Codebook");
            return WeightSource::codebook(std::move(cb));
        }
        throw std::invalid_argument("Unknown approach '" + approach + "' (mgb, nn, cb).");
    }

    int fail(const std::string &command, const std::string &message, int code)
    {
        nlohmann::json j = {{"error", message}, {"command", command}};
        std::cerr << j.dump() << '\n';
        return code;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"beamlab: phased-array beam synthesis benchmarks"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "Master seed");
    app.add_option("--geometry", g.geometry, "Planar array as rows,cols,spacing (wavelengths)");
    app.add_option("--grid-step", g.grid_step, "Similarity grid step in degrees");
    app.add_option("--config", g.config, "Flat key = value config file")->check(CLI::ExistingFile);
    app.add_flag("-v,--verbose", g.verbose, "Progress on stderr");

    std::string command;
    auto progress = [&](const std::string &msg) {
        if (g.verbose)
            std::cerr << msg << '\n';
    };

    // dataset gen / split
    auto *dataset = app.add_subcommand("dataset", "Sector datasets")->require_subcommand(1);
    std::string ds_out;
    std::optional<std::size_t> ds_count;
    auto *ds_gen = dataset->add_subcommand("gen", "Sample pointing angles with their steering phases");
    ds_gen->add_option("--out", ds_out, "Output CSV")->required();
    ds_gen->add_option("--count", ds_count, "Sample count (default from config)");
    ds_gen->callback([&] {
        const RunConfig cfg = resolve(g);
        SectorSpec s = cfg.sector;
        if (ds_count)
            s.count = *ds_count;
        s.seed = derive_seeds(cfg.seed).dataset;
        write_dataset_csv(ds_out, generate_dataset(s, ArrayGeometry::planar(cfg.layout)));
    });

    std::string split_in, split_dir;
    std::vector<double> ratios;
    auto *ds_split = dataset->add_subcommand("split", "Shuffle and split into train/validation/test");
    ds_split->add_option("--in", split_in, "Dataset CSV")->required()->check(CLI::ExistingFile);
    ds_split->add_option("--out-dir", split_dir, "Directory for train.csv, validation.csv, test.csv")->required();
    ds_split->add_option("--ratios", ratios, "Three ratios")->delimiter(',')->expected(3);
    ds_split->callback([&] {
        RunConfig cfg = resolve(g);
        if (!ratios.empty())
            cfg.split = {ratios[0], ratios[1], ratios[2]};
        const auto parts = split_dataset(read_dataset_csv(split_in), cfg.split, derive_seeds(cfg.seed).split);
        fs::create_directories(split_dir);
        write_dataset_csv(fs::path(split_dir) / "train.csv", parts.train);
        write_dataset_csv(fs::path(split_dir) / "validation.csv", parts.validation);
        write_dataset_csv(fs::path(split_dir) / "test.csv", parts.test);
    });

    // codebook gen / calibrate
    auto *codebook = app.add_subcommand("codebook", "Beam-steering codebooks")->require_subcommand(1);
    int cb_size = 256;
    std::optional<int> cb_bits;
    std::string cb_out, cb_in;
    bool cb_calibrate = false;
    auto *cb_gen = codebook->add_subcommand("gen", "Build a K-beam planar codebook");
    cb_gen->add_option("--size", cb_size, "Codeword count K (square of a power of two)");
    cb_gen->add_option("--bits", cb_bits, "Phase shifter bits (default from config)");
    cb_gen->add_option("--out", cb_out, "Output JSON")->required();
    cb_gen->add_flag("--calibrate", cb_calibrate, "Also find every beam direction");
    cb_gen->callback([&] {
        const RunConfig cfg = resolve(g);
        const ArrayGeometry geom = ArrayGeometry::planar(cfg.layout);
        Codebook cb = build_planar_codebook(geom, cb_size, cb_bits.value_or(cfg.codebook_bits));
        if (cb_calibrate)
            cb = calibrate_codebook(std::move(cb), geom, cfg.peak_step);
        io::save_codebook(cb_out, cb);
    });
    auto *cb_cal = codebook->add_subcommand("calibrate", "Find the main-lobe direction of every codeword");
    cb_cal->add_option("--in", cb_in, "Codebook JSON")->required()->check(CLI::ExistingFile);
    cb_cal->add_option("--out", cb_out, "Output JSON (default: overwrite input)");
    cb_cal->callback([&] {
        const RunConfig cfg = resolve(g);
        Codebook cb = io::load_codebook(cb_in);
        const ArrayGeometry geom = ArrayGeometry::planar(cb.layout);
        cb = calibrate_codebook(std::move(cb), geom, cfg.peak_step);
        io::save_codebook(cb_out.empty() ? cb_in : cb_out, cb);
    });

    // train
    std::string tr_train, tr_val, tr_out;
    std::optional<int> tr_epochs, tr_batch;
    std::optional<double> tr_lr;
    auto *train = app.add_subcommand("train", "Train the phase regressor");
    train->add_option("--train", tr_train, "Training CSV")->required()->check(CLI::ExistingFile);
    train->add_option("--val", tr_val, "Validation CSV")->required()->check(CLI::ExistingFile);
    train->add_option("--out", tr_out, "Model JSON")->required();
    train->add_option("--epochs", tr_epochs);
    train->add_option("--batch", tr_batch);
    train->add_option("--lr", tr_lr);
    train->callback([&] {
        const RunConfig cfg = resolve(g);
        nn::TrainConfig tc = cfg.train;
        tc.epochs = tr_epochs.value_or(tc.epochs);
        tc.batch_size = tr_batch.value_or(tc.batch_size);
        tc.learning_rate = tr_lr.value_or(tc.learning_rate);
        tc.seed = derive_seeds(cfg.seed).train;
        const Dataset t = read_dataset_csv(tr_train), v = read_dataset_csv(tr_val);
        if (t.elements() != static_cast<std::size_t>(cfg.layout.rows * cfg.layout.cols))
            throw std::invalid_argument("Dataset width does not match the array.");
        const auto reg = train_regressor(t, v, model_spec(cfg), tc, cfg.scaler, [&](const nn::EpochStats &e) {
            progress("epoch " + std::to_string(e.epoch) + " train " + std::to_string(e.train_loss) + " val " +
                     std::to_string(e.val_loss));
        });
        io::save_regressor(tr_out, reg);
    });

    // eval
    std::string ev_approach = "mgb", ev_model, ev_codebook, ev_test, ev_samples, ev_summary, ev_cdf;
    std::size_t ev_count = 0;
    std::optional<int> ev_bits;
    auto *eval = app.add_subcommand("eval", "Evaluate one approach on test pointing angles");
    eval->add_option("--approach", ev_approach, "mgb, nn or cb");
    eval->add_option("--model", ev_model, "Model JSON (nn)");
    eval->add_option("--codebook", ev_codebook, "Calibrated codebook JSON (cb)");
    eval->add_option("--test", ev_test, "Test CSV; without it targets are sampled from the sector");
    eval->add_option("--count", ev_count, "Number of targets (0: all / config default)");
    eval->add_option("--bits", ev_bits, "Quantize phases to this many bits first");
    eval->add_option("--samples", ev_samples, "Per-sample CSV");
    eval->add_option("--summary", ev_summary, "Summary JSON (default: stdout)");
    eval->add_option("--cdf", ev_cdf, "CDF CSV");
    eval->callback([&] {
        const RunConfig cfg = resolve(g);
        const WeightSource src = make_source(ev_approach, ev_model, ev_codebook, cfg);
        const auto targets = load_targets(ev_test, ev_count, cfg);
        const Evaluator evaluator(ArrayGeometry::planar(cfg.layout),
                                  {cfg.grid_step, cfg.peak_step, cfg.seed, config_hash(cfg)});
        const std::vector<EvalReport> reports{evaluator.evaluate(src, targets, ev_bits)};
        if (!ev_samples.empty())
            report::write_samples_csv(ev_samples, reports.front());
        write_reports(reports, ev_summary, ev_cdf);
    });

    // sweep-bits
    std::string sw_model, sw_codebook, sw_test, sw_summary, sw_cdf;
    std::size_t sw_count = 0;
    std::vector<int> sw_bits;
    auto *sweep = app.add_subcommand("sweep-bits", "Quantization sweep over NN and/or codebook");
    sweep->add_option("--model", sw_model, "Model JSON");
    sweep->add_option("--codebook", sw_codebook, "Calibrated codebook JSON");
    sweep->add_option("--test", sw_test, "Test CSV");
    sweep->add_option("--count", sw_count, "Number of targets");
    sweep->add_option("--bits", sw_bits, "Bit list (default from config)")->delimiter(',');
    sweep->add_option("--summary", sw_summary, "Summary JSON (default: stdout)");
    sweep->add_option("--cdf", sw_cdf, "CDF CSV");
    sweep->callback([&] {
        const RunConfig cfg = resolve(g);
        std::vector<WeightSource> sources;
        if (!sw_model.empty())
            sources.push_back(make_source("nn", sw_model, "", cfg));
        if (!sw_codebook.empty())
            sources.push_back(make_source("cb", "", sw_codebook, cfg));
        if (sources.empty())
            throw std::invalid_argument("Give --model and/or --codebook.");
        const auto targets = load_targets(sw_test, sw_count, cfg);
        const Evaluator evaluator(ArrayGeometry::planar(cfg.layout),
                                  {cfg.grid_step, cfg.peak_step, cfg.seed, config_hash(cfg)});
        const std::vector<int> bits = sw_bits.empty() ? cfg.sweep_bits : sw_bits;
        write_reports(quantization_sweep(evaluator, sources, bits, targets), sw_summary, sw_cdf);
    });

    // latency
    std::string lat_model, lat_out;
    std::size_t lat_trials = 10000;
    auto *latency = app.add_subcommand("latency", "Single-BPA inference latency");
    latency->add_option("--model", lat_model, "Model JSON")->required()->check(CLI::ExistingFile);
    latency->add_option("--trials", lat_trials, "Timed predictions");
    latency->add_option("--out", lat_out, "JSON output (default: stdout)");
    latency->callback([&] {
        const RunConfig cfg = resolve(g);
        const auto reg = io::load_regressor(lat_model);
        const LatencyStats s = measure_inference_latency(reg, lat_trials, derive_seeds(cfg.seed).latency);
        const nlohmann::json j = {{"trials", s.trials},
                                  {"median_ns", s.median_ns},
                                  {"p95_ns", s.p95_ns},
                                  {"hardware", s.hardware},
                                  {"model", lat_model}};
        if (lat_out.empty() || lat_out == "-")
            std::cout << j.dump(2) << '\n';
        else
            io::write_text(lat_out, j.dump(2) + "\n");
    });

    // export-cdf
    std::vector<std::string> cdf_in;
    std::string cdf_out;
    auto *export_cdf = app.add_subcommand("export-cdf", "CDF CSV from per-sample CSVs");
    export_cdf->add_option("--samples", cdf_in, "Per-sample CSV files; the file stem is the label")
        ->required()
        ->check(CLI::ExistingFile);
    export_cdf->add_option("--out", cdf_out, "CDF CSV (default: stdout)");
    export_cdf->callback([&] {
        std::vector<EvalReport> reports;
        for (const auto &path : cdf_in)
        {
            EvalReport r;
            r.approach = fs::path(path).stem().string();
            r.samples = report::read_samples_csv(path);
            summarize(r);
            reports.push_back(std::move(r));
        }
        if (cdf_out.empty() || cdf_out == "-")
            std::cout << report::cdf_csv(reports);
        else
            report::write_cdf_csv(cdf_out, reports);
    });

    // pattern
    std::vector<double> pt_bpa;
    std::string pt_approach = "mgb", pt_model, pt_codebook, pt_out;
    std::optional<int> pt_bits;
    auto *pattern = app.add_subcommand("pattern", "Radiation pattern of one beam on the similarity grid");
    pattern->add_option("--bpa", pt_bpa, "Pointing angle az,el in degrees")->delimiter(',')->expected(2)->required();
    pattern->add_option("--approach", pt_approach, "mgb, nn or cb");
    pattern->add_option("--model", pt_model, "Model JSON (nn)");
    pattern->add_option("--codebook", pt_codebook, "Calibrated codebook JSON (cb)");
    pattern->add_option("--bits", pt_bits, "Quantize phases first");
    pattern->add_option("--out", pt_out, "CSV output (default: stdout)");
    pattern->callback([&] {
        const RunConfig cfg = resolve(g);
        const ArrayGeometry geom = ArrayGeometry::planar(cfg.layout);
        const BeamPointingAngle bpa(pt_bpa[0], pt_bpa[1]);
        PhaseVector pv = make_source(pt_approach, pt_model, pt_codebook, cfg).weights({&bpa, 1}, geom).front();
        if (pt_bits)
            pv = quantize_phases(pv, *pt_bits);
        const auto grid = std::make_shared<const DirectionGrid>(DirectionGrid::full_sphere(cfg.grid_step));
        const std::string text = io::pattern_csv(radiation_pattern(pv, geom, grid));
        if (pt_out.empty() || pt_out == "-")
            std::cout << text;
        else
            io::write_text(pt_out, text);
    });

    // pipeline
    std::string pl_out;
    auto *pipeline = app.add_subcommand("pipeline", "generate, split, train, evaluate, sweep, export");
    pipeline->add_option("--out-dir", pl_out, "Artifact directory")->required();
    pipeline->callback([&] {
        const RunConfig cfg = resolve(g);
        run_pipeline(cfg, fs::path(pl_out), progress);
    });

    for (auto *sub : {dataset, ds_gen, ds_split, codebook, cb_gen, cb_cal, train, eval, sweep, latency, export_cdf,
                      pattern, pipeline})
        sub->preparse_callback([&command, sub](std::size_t) {
            command = command.empty() ? sub->get_name() : command + " " + sub->get_name();
        });

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::Success &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        return fail(command, e.what(), 2);
    }
    catch (const std::exception &e)
    {
        return fail(command, e.what(), 1);
    }
    return 0;
}
