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

#include <catch2/catch_amalgamated.hpp>
#include "beamlab/harness/config.hpp"
#include "beamlab/harness/csv.hpp"
#include "beamlab/harness/dataset.hpp"
#include "beamlab/harness/evaluate.hpp"
#include "beamlab/harness/latency.hpp"
#include "beamlab/harness/pipeline.hpp"
#include "beamlab/harness/report.hpp"
#include "beamlab/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <set>

using namespace beamlab;
using Catch::Approx;
namespace fs = std::filesystem;

namespace
{
    fs::path scratch_dir(const std::string &name)
    {
        const auto p = fs::temp_directory_path() / ("beamlab-test-" + name);
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }

    std::vector<BeamPointingAngle> targets(std::size_t n, std::uint64_t seed)
    {
        return sample_targets({0.0, 120.0, 30.0, 150.0, n, seed});
    }

    RunConfig tiny_run()
    {
        RunConfig cfg = parse_config("sector.count = 600\n"
                                     "train.epochs = 3\n"
                                     "train.batch_size = 64\n"
                                     "codebook.sizes = 16, 64\n"
                                     "eval.test_count = 30\n"
                                     "eval.grid_step = 4\n"
                                     "sweep.bits = 2, 4\n");
        return cfg;
    }
}

TEST_CASE("Harness - dataset generation")
{
    const auto geom = ArrayGeometry::planar({});
    SectorSpec spec{0.0, 120.0, 30.0, 150.0, 0, 3};
    CHECK(generate_dataset(spec, geom).empty());

    spec.count = 500;
    const auto ds = generate_dataset(spec, geom);
    REQUIRE(ds.size() == 500);
    CHECK(ds.elements() == 64);
    CHECK(ds == generate_dataset(spec, geom));
    for (std::size_t i = 0; i < ds.size(); ++i)
    {
        const auto &b = ds.bpas()[i];
        CHECK(b.az_deg() >= 0.0);
        CHECK(b.az_deg() <= 120.0);
        CHECK(b.el_deg() >= 30.0);
        CHECK(b.el_deg() <= 150.0);
        const auto expected = mgb_weights(b, geom).degrees();
        CHECK(std::equal(expected.begin(), expected.end(), ds.phases(i).begin()));
    }
    spec.seed = 4;
    CHECK_FALSE(ds == generate_dataset(spec, geom));

    // Uniform sector: means at the centre
    const auto many = sample_targets({0.0, 120.0, 30.0, 150.0, 100000, 7});
    double az = 0.0, el = 0.0;
    for (const auto &b : many)
    {
        az += b.az_deg();
        el += b.el_deg();
    }
    CHECK(az / 1e5 == Approx(60.0).margin(0.5));
    CHECK(el / 1e5 == Approx(90.0).margin(0.5));

    CHECK_THROWS_AS(generate_dataset({0.0, 120.0, 160.0, 150.0, 5, 0}, geom), std::invalid_argument);
    CHECK_THROWS_AS(generate_dataset({-10.0, 120.0, 30.0, 150.0, 5, 0}, geom), std::invalid_argument);
    CHECK_THROWS_AS(generate_dataset({0.0, 120.0, 30.0, 190.0, 5, 0}, geom), std::invalid_argument);
}

TEST_CASE("Harness - dataset split and files")
{
    const auto geom = ArrayGeometry::planar({});
    const auto ds = generate_dataset({0.0, 120.0, 30.0, 150.0, 1000, 11}, geom);
    const auto parts = split_dataset(ds, {0.7, 0.15, 0.15}, 5);
    CHECK(parts.train.size() == 700);
    CHECK(parts.validation.size() == 150);
    CHECK(parts.test.size() == 150);

    // Disjoint and exhaustive (sample identity by pointing angle)
    auto key = [](const BeamPointingAngle &b) { return std::make_pair(b.az_deg(), b.el_deg()); };
    std::set<std::pair<double, double>> all, seen;
    for (const auto &b : ds.bpas())
        all.insert(key(b));
    for (const Dataset *d : {&parts.train, &parts.validation, &parts.test})
        for (std::size_t i = 0; i < d->size(); ++i)
        {
            CHECK(seen.insert(key(d->bpas()[i])).second);
            const auto expected = mgb_weights(d->bpas()[i], geom).degrees();
            CHECK(std::equal(expected.begin(), expected.end(), d->phases(i).begin()));
        }
    CHECK(seen == all);

    CHECK(split_dataset(ds, {0.7, 0.15, 0.15}, 5).test == parts.test);
    CHECK_FALSE(split_dataset(ds, {0.7, 0.15, 0.15}, 6).test == parts.test);
    CHECK_THROWS_AS(split_dataset(ds, {0.7, 0.2, 0.2}, 5), std::invalid_argument);
    CHECK_THROWS_AS(split_dataset(ds, {1.1, -0.1, 0.0}, 5), std::invalid_argument);

    const auto dir = scratch_dir("dataset");
    write_dataset_csv(dir / "ds.csv", parts.test);
    CHECK(read_dataset_csv(dir / "ds.csv") == parts.test);

    io::write_text(dir / "bad.csv", "az_deg,el_deg,p0\n1,2\n");
    CHECK_THROWS_AS(read_dataset_csv(dir / "bad.csv"), std::runtime_error);
    io::write_text(dir / "bad2.csv", "az_deg,el_deg,p0\n1,2,x\n");
    CHECK_THROWS_AS(read_dataset_csv(dir / "bad2.csv"), std::runtime_error);
    CHECK_THROWS_AS(read_dataset_csv(dir / "missing.csv"), std::runtime_error);
    fs::remove_all(dir);
}

TEST_CASE("Harness - evaluation")
{
    const auto geom = ArrayGeometry::planar({});
    const Evaluator ev(geom, {4.0, 1.0, 0, ""});
    const auto t = targets(60, 21);

    const auto mgb = ev.evaluate(WeightSource::mgb(), t);
    CHECK(mgb.approach == "MGB");
    REQUIRE(mgb.samples.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        CHECK(mgb.samples[i].target.az_deg() == t[i].az_deg());
        CHECK(mgb.samples[i].cosine_similarity == Approx(1.0).margin(1e-12));
        CHECK(mgb.samples[i].central_angle_deg < 0.1);
    }
    CHECK(mgb.central_angle_q[3] < 0.1);

    // 16 bits is indistinguishable from unquantized
    const auto fine = ev.evaluate(WeightSource::mgb(), t, 16);
    CHECK(fine.approach == "MGB/b16");
    for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(std::abs(fine.samples[i].cosine_similarity - mgb.samples[i].cosine_similarity) < 1e-6);

    const auto coarse = ev.evaluate(WeightSource::mgb(), t, 2);
    CHECK(coarse.cosine_similarity_q[1] <= mgb.cosine_similarity_q[1]);
    CHECK(coarse.central_angle_q[1] >= mgb.central_angle_q[1]);

    // Codebook source: achieved direction equals the calibrated codeword direction
    auto cb = std::make_shared<const Codebook>(make_codebook(geom, 16, 16, 1.0));
    const auto rep = ev.evaluate(WeightSource::codebook(cb), t);
    CHECK(rep.approach == "CB-16");
    for (const auto &s : rep.samples)
        CHECK(central_angle(s.achieved, cb->calibrated_bpas[nearest_codeword(*cb, s.target)]) < 0.15);
    CHECK(rep.central_angle_q[1] > mgb.central_angle_q[1]);

    auto raw = std::make_shared<const Codebook>(build_planar_codebook(geom, 16, 16));
    CHECK_THROWS_AS(ev.evaluate(WeightSource::codebook(raw), t), std::logic_error);
    auto unfit = std::make_shared<const nn::PhaseRegressor>();
    CHECK_THROWS_AS(ev.evaluate(WeightSource::neural(unfit), t), std::logic_error);
    CHECK(WeightSource::neural(unfit).label() == "NN");
    CHECK_THROWS_AS(ev.evaluate(WeightSource::mgb(), t, 0), std::invalid_argument);

    // Sweep ordering: sources outermost
    const std::vector<WeightSource> src{WeightSource::mgb(), WeightSource::codebook(cb)};
    const std::vector<int> bits{2, 3};
    const auto sweep = quantization_sweep(ev, src, bits, std::span(t).first(5));
    REQUIRE(sweep.size() == 4);
    CHECK(sweep[0].approach == "MGB/b2");
    CHECK(sweep[1].approach == "MGB/b3");
    CHECK(sweep[2].approach == "CB-16/b2");
    CHECK(sweep[3].bits == 3);
}

TEST_CASE("Harness - reports")
{
    const auto geom = ArrayGeometry::planar({});
    const auto t = targets(40, 31);
    EvalReport r = evaluate_approach(WeightSource::mgb(), t, geom, {4.0, 1.0, 9, "abc"}, 3);

    const auto dir = scratch_dir("report");
    report::write_samples_csv(dir / "s.csv", r);
    EvalReport back = r;
    back.samples = report::read_samples_csv(dir / "s.csv");
    REQUIRE(back.samples.size() == r.samples.size());
    for (std::size_t i = 0; i < r.samples.size(); ++i)
    {
        CHECK(back.samples[i].central_angle_deg == r.samples[i].central_angle_deg);
        CHECK(back.samples[i].cosine_similarity == r.samples[i].cosine_similarity);
        CHECK(back.samples[i].achieved.az_deg() == r.samples[i].achieved.az_deg());
    }
    summarize(back);
    for (int k = 0; k < 4; ++k)
    {
        CHECK(std::abs(back.central_angle_q[k] - r.central_angle_q[k]) < 1e-9);
        CHECK(std::abs(back.cosine_similarity_q[k] - r.cosine_similarity_q[k]) < 1e-9);
    }

    // Quantiles against a direct oracle
    std::vector<double> ca;
    for (const auto &s : r.samples)
        ca.push_back(s.central_angle_deg);
    std::sort(ca.begin(), ca.end());
    const double h = 0.5 * static_cast<double>(ca.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    CHECK(r.central_angle_q[1] == Approx(ca[lo] + (h - static_cast<double>(lo)) * (ca[lo + 1] - ca[lo])));

    const std::vector<EvalReport> rs{r};
    const auto j = nlohmann::json::parse(report::summary_json(rs));
    CHECK(j["format"] == "beamlab-summary");
    const auto &jr = j["reports"][0];
    CHECK(jr["approach"] == "MGB/b3");
    CHECK(jr["bits"] == 3);
    CHECK(jr["seed"] == 9);
    CHECK(jr["config_hash"] == "abc");
    CHECK(jr["samples"] == 40);
    CHECK_FALSE(jr.contains("latency"));
    CHECK(report::summary_json(rs) == report::summary_json(rs));

    // CDF: non-decreasing, ends at 1
    const std::string cdf = report::cdf_csv(rs);
    std::istringstream in(cdf);
    std::string line;
    std::getline(in, line);
    CHECK(line == "approach,metric,value,fraction");
    std::map<std::string, std::pair<double, double>> last;
    while (std::getline(in, line))
    {
        const auto f = csv::split(line);
        REQUIRE(f.size() == 4);
        const std::string metric(f[1]);
        const double v = csv::parse_number(f[2]), p = csv::parse_number(f[3]);
        if (last.count(metric))
        {
            CHECK(v > last[metric].first);
            CHECK(p > last[metric].second);
        }
        last[metric] = {v, p};
    }
    REQUIRE(last.size() == 2);
    for (const auto &[m, vp] : last)
        CHECK(vp.second == 1.0);

    EvalReport empty;
    const std::vector<EvalReport> none{empty};
    CHECK_THROWS_AS(report::write_samples_csv(dir / "e.csv", empty), std::invalid_argument);
    CHECK_THROWS_AS(report::summary_json(none), std::invalid_argument);
    CHECK_THROWS_AS(report::cdf_csv(none), std::invalid_argument);
    fs::remove_all(dir);
}

TEST_CASE("Harness - configuration")
{
    const RunConfig def;
    CHECK(def.sector.count == 100000);
    CHECK(def.train.epochs == 200);
    CHECK(def.train.batch_size == 1024);
    CHECK(def.train.learning_rate == 0.0005);
    CHECK(full_scale(def).sector.count == 1500000);
    CHECK(full_scale(def).train.epochs == 1200);

    const RunConfig c = parse_config("# comment\nseed = 42\ngeometry.rows = 4 # trailing\ncodebook.sizes = 4,16\n");
    CHECK(c.seed == 42);
    CHECK(c.layout.rows == 4);
    CHECK(c.codebook_sizes == std::vector<int>{4, 16});
    CHECK(parse_config(to_config_text(c)).seed == 42);
    CHECK(to_config_text(parse_config(to_config_text(c))) == to_config_text(c));
    CHECK(config_hash(c) == config_hash(parse_config(to_config_text(c))));
    CHECK(config_hash(c) != config_hash(def));
    CHECK(config_hash(def).size() == 16);

    CHECK_THROWS_AS(parse_config("nope = 1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("seed = 1\nseed = 2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("seed = x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("split = 0.5, 0.5, 0.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("seed"), std::invalid_argument);

    const auto s1 = derive_seeds(1), s1b = derive_seeds(1), s2 = derive_seeds(2);
    CHECK(s1.dataset == s1b.dataset);
    CHECK(s1.train == s1b.train);
    CHECK(s1.dataset != s2.dataset);
    const std::set<std::uint64_t> distinct{s1.dataset, s1.split, s1.train, s1.evaluation, s1.latency};
    CHECK(distinct.size() == 5);
    CHECK(derive_seeds(1ull << 40).dataset != derive_seeds(0).dataset);
}

TEST_CASE("Harness - latency")
{
    const RunConfig cfg = tiny_run();
    nn::PhaseRegressor unfit;
    CHECK_THROWS_AS(measure_inference_latency(unfit, 10), std::logic_error);

    const auto geom = ArrayGeometry::planar(cfg.layout);
    const auto ds = generate_dataset({0.0, 120.0, 30.0, 150.0, 200, 1}, geom);
    const auto parts = split_dataset(ds, {0.7, 0.15, 0.15}, 1);
    nn::TrainConfig tc = cfg.train;
    tc.epochs = 1;
    const auto reg = train_regressor(parts.train, parts.validation, model_spec(cfg), tc);
    CHECK(reg.fitted());
    CHECK_THROWS_AS(measure_inference_latency(reg, 0), std::invalid_argument);
    const auto lat = measure_inference_latency(reg, 50, 3, 5);
    CHECK(lat.trials == 50);
    CHECK(lat.median_ns > 0.0);
    CHECK(lat.p95_ns >= lat.median_ns);
    CHECK_FALSE(lat.hardware.empty());
    CHECK(lat.hardware == hardware_descriptor());
}

TEST_CASE("Harness - pipeline determinism")
{
    const RunConfig cfg = tiny_run();
    const auto dir = scratch_dir("pipeline");
    const auto a = run_pipeline(cfg, dir);
    const auto b = run_pipeline(cfg);
    CHECK(a.summary_json == b.summary_json);
    REQUIRE(a.reports.size() == 2 + 2 + 2 * 2);
    CHECK(a.reports[0].approach == "MGB");
    CHECK(a.reports[1].approach == "NN");
    CHECK(a.reports[2].approach == "CB-16");
    CHECK(a.reports[4].approach == "NN/b2");
    CHECK(a.reports[7].approach == "CB-64/b4");
    for (const auto &r : a.reports)
    {
        CHECK(r.samples.size() == 30);
        CHECK(r.config_hash == config_hash(cfg));
    }
    for (const char *f : {"config.txt", "model.json", "codebook-16.json", "codebook-64.json", "samples-NN-b2.csv",
                          "cdf.csv", "summary.json"})
        CHECK(fs::exists(dir / f));
    CHECK(io::read_text(dir / "summary.json") == a.summary_json);
    CHECK(parse_config(io::read_text(dir / "config.txt")).sector.count == 600);

    // A saved model reproduces its predictions
    const auto model = io::load_regressor(dir / "model.json");
    const auto p1 = nn::predict_phases(model.model, model.scalers, a.test_targets);
    const auto p2 = nn::predict_phases(a.regressor->model, a.regressor->scalers, a.test_targets);
    CHECK(p1 == p2);

    RunConfig other = cfg;
    other.seed = 2;
    CHECK(run_pipeline(other).summary_json != a.summary_json);
    fs::remove_all(dir);
}
