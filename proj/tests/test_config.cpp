#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "modsamp/config.hpp"
#include "modsamp/error.hpp"
#include "modsamp/recovery.hpp"
#include "modsamp/trace.hpp"

using namespace modsamp;

TEST_CASE("full experiment document")
{
    const auto cfg = parse_config(R"({
        "signal": {"kind": "random_sinc_mixture", "bandwidth_hz": 0.5, "duration": 25, "rho": 10},
        "channel": {"lambda": 1.0, "noise": {"model": "uniform", "rho_eta": 0.15}, "oversampling": 15},
        "recovery": {"order": 2, "block_policy": "revised"},
        "sweep": {"axis1": {"name": "rho", "start": 10, "stop": 22, "step": 4},
                  "axis2": {"name": "of", "values": [5, 10]},
                  "trials_per_cell": 3, "base_seed": 7,
                  "success_rule": {"kind": "snr_threshold", "threshold_db": 30}}
    })");
    CHECK(cfg.signal.target_peak == 10.0);
    CHECK(cfg.recovery.beta_g == 10.0);
    CHECK(cfg.recovery.lambda == 1.0);
    CHECK(cfg.channel.oversampling == 15.0);
    CHECK(std::get<UniformNoise>(cfg.channel.noise).rho_eta == 0.15);
    REQUIRE(cfg.sweep.has_value());
    CHECK(cfg.sweep->axis1.values == std::vector<double>{10, 14, 18, 22});
    CHECK(cfg.sweep->axis2->values == std::vector<double>{5, 10});
    CHECK(cfg.sweep->trials_per_cell == 3);
    CHECK(cfg.sweep->base_seed == 7);
    CHECK(cfg.sweep->success_rule.kind == SuccessRule::Kind::SnrThreshold);
    CHECK(cfg.sweep->success_rule.threshold_db == 30.0);
}

TEST_CASE("unknown keys and bad enums are config errors")
{
    CHECK_THROWS_AS(parse_config(R"({"signal": {"kind": "tone", "freq_hz": 1, "duration": 20, "colour": 1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"signal": {"kind": "tone", "freq_hz": 1, "duration": 20}, "extra": {}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"signal": {"kind": "tone", "freq_hz": 1, "duration": 20},
                                     "channel": {"noise": {"model": "pink"}}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"signal": {"kind": "tone", "freq_hz": 1, "duration": 20},
                                     "recovery": {"block_policy": "fast"}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"signal": {"kind": "tone", "freq_hz": "one", "duration": 20}})"), ConfigError);
}

TEST_CASE("tone with an explicit peak and a quantizer")
{
    const auto cfg = parse_config(R"({
        "signal": {"kind": "tone", "freq_hz": 1, "amplitude": 1, "phase": 0.3, "duration": 20, "peak": 108},
        "channel": {"lambda": 1, "bits": 3, "oversampling": 50}
    })");
    CHECK(std::holds_alternative<Tone>(cfg.signal.kind));
    CHECK(cfg.signal.target_peak == 108.0);
    CHECK(cfg.channel.bits == 3);
}

TEST_CASE("trace round trip is bit-identical")
{
    SampledSignal s;
    s.grid = make_jitter_grid(1e-3, 50, 0.05, 3, 0.25);
    std::vector<double> input;
    for (std::size_t k = 0; k < 50; ++k) {
        input.push_back(3.0 * std::sin(0.1 * static_cast<double>(k)) + 1e-17 * static_cast<double>(k));
        s.values.push_back(std::remainder(input.back(), 2.0) * 0.999);
    }
    std::stringstream buf;
    emit_trace(buf, s, &input);
    const auto rows = read_trace_csv(buf);
    REQUIRE(rows.time.size() == 50);
    const auto t = ingest_trace(rows, {1.0, 1000.0});
    CHECK(t.folded.values == s.values);
    REQUIRE(t.reference.has_value());
    CHECK(t.reference->values == input);
    for (std::size_t k = 0; k < 50; ++k)
        CHECK(rows.time[k] == s.grid.instant(k));
    CHECK_FALSE(t.folded.grid.is_uniform());
}

TEST_CASE("folded-only trace still recovers")
{
    std::stringstream buf;
    buf << "time_s,folded_v\n";
    for (int k = 0; k < 400; ++k) {
        const double g = 4.0 * std::sin(2.0 * 3.141592653589793 * k / 200.0);
        buf << k * 0.01 << ',' << g - 2.0 * std::floor((g + 1.0) / 2.0) << '\n';
    }
    const auto t = ingest_trace(read_trace_csv(buf), {1.0, 100.0});
    CHECK_FALSE(t.reference.has_value());
    CHECK(t.folded.grid.is_uniform());
    RecoveryConfig rc;
    rc.beta_g = 4.0;
    const auto r = recover_fixed_order(Sequence(t.folded.values), rc);
    CHECK(r.success);
}

TEST_CASE("malformed traces")
{
    std::stringstream regress("time_s,folded_v\n0.0,0.1\n0.1,0.2\n0.05,0.3\n");
    try {
        read_trace_csv(regress, "x.csv");
        FAIL("expected an error");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("x.csv:4:") != std::string::npos);
    }
    std::stringstream header("t,y\n0,0\n");
    CHECK_THROWS_AS(read_trace_csv(header), DataError);
    std::stringstream junk("time_s,folded_v\n0.0,abc\n");
    CHECK_THROWS_AS(read_trace_csv(junk), DataError);

    std::stringstream range("time_s,folded_v\n0.0,0.1\n0.01,1.2\n");
    CHECK_THROWS_AS(ingest_trace(read_trace_csv(range), {1.0, 100.0}), DataError);
    std::stringstream slack("time_s,folded_v\n0.0,0.1\n0.01,1.02\n");
    CHECK_NOTHROW(ingest_trace(read_trace_csv(slack), {1.0, 100.0}));
}

TEST_CASE("sidecar and recovery config files")
{
    const auto dir = std::filesystem::temp_directory_path() / "modsamp_test_config";
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "meta.json") << R"({"lambda": 0.5, "fs": 2000})";
        std::ofstream(dir / "bad_meta.json") << R"({"lambda": 0.5, "fs": 2000, "gain": 3})";
        std::ofstream(dir / "rec.json") << R"({"order": 3, "beta_g": 6})";
    }
    const auto m = read_sidecar((dir / "meta.json").string());
    CHECK(m.lambda == 0.5);
    CHECK(m.fs == 2000.0);
    CHECK_THROWS_AS(read_sidecar((dir / "bad_meta.json").string()), ConfigError);
    const auto rc = load_recovery_config((dir / "rec.json").string(), 0.5);
    CHECK(rc.order == 3);
    CHECK(rc.beta_g == 6.0);
    CHECK(rc.lambda == 0.5);
    std::filesystem::remove_all(dir);
}
