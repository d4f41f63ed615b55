#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "phiotdr/config.hpp"
#include "phiotdr/errors.hpp"
#include "phiotdr/io.hpp"

using namespace phiotdr;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    std::ofstream out(name);
    out << content;
    return name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& p) : path(p) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("config parsing") {
    TempFile f(write_temp("cfg_ok.cfg",
                          "# comment\n"
                          "name = run1\n"
                          "length_m = 1000\n"
                          "n_samples = 100\n"
                          "snr_db = inf\n"
                          "schemes = simo,mimo\n"));
    const ScenarioConfig cfg = parse_config(f.path);
    CHECK(cfg.name == "run1");
    CHECK(cfg.fiber.length_m == 1000.0);
    CHECK(cfg.noise.n_samples == 100);
    CHECK_FALSE(cfg.noise.additive_noise_enabled());
    REQUIRE(cfg.schemes.size() == 2);
    CHECK(cfg.schemes[0] == ProbeScheme::Simo);
}

TEST_CASE("config rejects bad input with the offending line") {
    TempFile f(write_temp("cfg_bad.cfg", "length_m = 1000\nlinewidth_hz = -1\n"));
    CHECK_THROWS_AS(parse_config(f.path), ConfigError);

    TempFile g(write_temp("cfg_unknown.cfg", "length_m = 1000\nwavelenght = 1550\n"));
    try {
        parse_config(g.path);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
        CHECK(std::string(e.what()).find("wavelenght") != std::string::npos);
    }

    TempFile h(write_temp("cfg_type.cfg", "n_samples = many\n"));
    CHECK_THROWS_AS(parse_config(h.path), ConfigError);
    CHECK_THROWS_AS(parse_config("does_not_exist.cfg"), ConfigError);
}

TEST_CASE("manifest round-trips the resolved configuration") {
    ScenarioConfig cfg;
    cfg.name = "loop";
    cfg.sweep = SweepKind::ThetaMis;
    cfg.master_seed = 987654321;
    cfg.noise.snr_db = 17.25;
    finalize_config(cfg);

    TempFile f("manifest_rt.cfg");
    write_manifest(cfg, f.path);
    const ScenarioConfig back = parse_config(f.path);
    CHECK(back.name == cfg.name);
    CHECK(back.sweep == cfg.sweep);
    CHECK(back.master_seed == cfg.master_seed);
    CHECK(back.noise.snr_db == cfg.noise.snr_db);
    REQUIRE(back.sweep_grid.size() == cfg.sweep_grid.size());
    for (std::size_t i = 0; i < cfg.sweep_grid.size(); ++i)
        CHECK(back.sweep_grid[i] == cfg.sweep_grid[i]);
    CHECK(manifest_text(back) == manifest_text(cfg));
}

TEST_CASE("default sweep grids") {
    ScenarioConfig cfg;
    cfg.sweep = SweepKind::ThetaMis;
    finalize_config(cfg);
    REQUIRE(cfg.sweep_grid.size() == 64);
    CHECK(cfg.sweep_grid.front() == doctest::Approx(-M_PI));
    ScenarioConfig cap;
    cap.sweep = SweepKind::ThetaCap;
    finalize_config(cap);
    REQUIRE(cap.sweep_grid.size() == 64);
    CHECK(cap.sweep_grid.back() == doctest::Approx(M_PI / 2.0));
}

TEST_CASE("measured CSV round-trip preserves every bit") {
    ObservationSet obs;
    obs.n_segments = 3;
    obs.n_samples = 4;
    RngStream rng(6);
    for (int k = 0; k < 12; ++k) {
        JonesMatrix h;
        h.xx = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        h.xy = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        h.yx = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        h.yy = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        obs.values.push_back(h);
    }
    TempFile f("measured_rt.csv");
    write_measured_csv(obs, f.path);
    CHECK(slurp(f.path).rfind("segment_index,time_index,h_xx_re,h_xx_im,h_xy_re,h_xy_im,"
                              "h_yx_re,h_yx_im,h_yy_re,h_yy_im\n",
                              0) == 0);
    const MeasuredSeries series = ingest_measured(f.path);
    CHECK(series.n_segments == 3);
    CHECK(series.n_samples == 4);
    for (int k = 0; k < 4; ++k) CHECK(series.present[k]);
    for (int i = 0; i < 3; ++i)
        for (int t = 0; t < 4; ++t) {
            CHECK(series.at(i, t).xx == obs.values[i * 4 + t].xx);
            CHECK(series.at(i, t).yy == obs.values[i * 4 + t].yy);
        }
}

TEST_CASE("ingest rejects malformed inputs") {
    TempFile empty(write_temp("ing_empty.csv", ""));
    CHECK_THROWS_AS(ingest_measured(empty.path), DataError);

    TempFile noheader(write_temp("ing_hdr.csv", "seg,time,h_xx_re,h_xx_im\n0,0,1,0\n"));
    CHECK_THROWS_AS(ingest_measured(noheader.path), DataError);

    TempFile odd(write_temp("ing_odd.csv", "segment_index,time_index,h_xx_re\n0,0,1\n"));
    CHECK_THROWS_AS(ingest_measured(odd.path), DataError);

    TempFile dup(write_temp("ing_dup.csv",
                            "segment_index,time_index,h_xx_re,h_xx_im\n0,0,1,0\n0,0,2,0\n"));
    CHECK_THROWS_AS(ingest_measured(dup.path), DataError);

    TempFile ragged(write_temp("ing_rag.csv",
                               "segment_index,time_index,h_xx_re,h_xx_im\n"
                               "0,0,1,0\n0,1,1,0\n1,0,1,0\n"));
    try {
        ingest_measured(ragged.path);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("ragged") != std::string::npos);
        CHECK(std::string(e.what()).find("1") != std::string::npos);
    }

    TempFile bad(write_temp("ing_bad.csv", "segment_index,time_index,h_xx_re,h_xx_im\n0,0,one,0\n"));
    CHECK_THROWS_AS(ingest_measured(bad.path), DataError);
}

TEST_CASE("scheme compatibility of partial channel exports") {
    TempFile two(write_temp("ing_two.csv",
                            "segment_index,time_index,h_xx_re,h_xx_im,h_yx_re,h_yx_im\n"
                            "0,0,1,0,0,1\n0,1,1,0,0,1\n"));
    const MeasuredSeries series = ingest_measured(two.path);
    CHECK_NOTHROW(estimate_from_measured(series, ProbeScheme::Siso, 160e-6));
    CHECK_NOTHROW(estimate_from_measured(series, ProbeScheme::Simo, 160e-6, 1));
    CHECK_THROWS_AS(estimate_from_measured(series, ProbeScheme::Simo, 160e-6, 2), DataError);
    CHECK_THROWS_AS(estimate_from_measured(series, ProbeScheme::Mimo, 160e-6), DataError);

    const PhaseTrace tr = estimate_from_measured(series, ProbeScheme::Simo, 160e-6, 1);
    CHECK(tr.at(0, 0) == doctest::Approx(M_PI / 4.0));
}

TEST_CASE("table CSV and SVG emission") {
    ResultTable t{"demo", {"z_m", "scheme", "stdv"}, {}};
    t.rows.push_back({"5", "mimo", "0.25"});
    t.rows.push_back({"15", "mimo", "0.35"});
    t.rows.push_back({"5", "siso", "0.4"});
    t.rows.push_back({"15", "siso", "0.9"});
    TempFile csv("demo_table.csv");
    write_table_csv(t, csv.path);
    CHECK(slurp(csv.path) == "z_m,scheme,stdv\n5,mimo,0.25\n15,mimo,0.35\n5,siso,0.4\n15,siso,0.9\n");

    TempFile svg("demo_plot.svg");
    write_svg_plot(svg.path, "demo", "z", "stdv",
                   {{"mimo", {5, 15}, {0.25, 0.35}}, {"siso", {5, 15}, {0.4, 0.9}}});
    const std::string body = slurp(svg.path);
    CHECK(body.rfind("<svg", 0) == 0);
    std::size_t polylines = 0, pos = 0;
    while ((pos = body.find("<polyline", pos)) != std::string::npos) {
        ++polylines;
        ++pos;
    }
    CHECK(polylines == 2);
    CHECK(body.find(">mimo<") != std::string::npos);
    CHECK(body.find(">siso<") != std::string::npos);
}

TEST_CASE("emit_outputs writes manifest, tables and plots") {
    namespace fs = std::filesystem;
    ScenarioConfig cfg;
    cfg.name = "emit_test";
    finalize_config(cfg);
    ScenarioResult res;
    ResultTable t{"distance_profile", {"z_m", "scheme", "stdv", "unreliable"}, {}};
    t.rows.push_back({"5", "mimo", "0.2", "0"});
    t.rows.push_back({"15", "mimo", "0.3", "0"});
    res.tables.push_back(t);

    const std::string dir = "emit_out";
    const auto files = emit_outputs(res, cfg, dir, false);
    CHECK(files.size() == 3);
    for (const auto& f : files) CHECK(fs::exists(f));
    const auto no_plots = emit_outputs(res, cfg, dir, true);
    CHECK(no_plots.size() == 2);
    fs::remove_all(dir);
}

TEST_CASE("preflight rejects unwritable targets") {
    TempFile f(write_temp("not_a_dir.txt", "x"));
    CHECK_THROWS_AS(preflight_output_dir("not_a_dir.txt"), IoError);
    CHECK_NOTHROW(preflight_output_dir("preflight_dir"));
    std::filesystem::remove_all("preflight_dir");
}
