// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <json.hpp>

#include "config.hpp"
#include "sha256.hpp"

using namespace derw_lab;
using nlohmann::json;

namespace {

const char* kSampleKv = R"(
# sample experiment
model.p = 0.9
model.q = 0.5
model.alpha.kind = constant
model.alpha.value = 0.8
model.beta.kind = explicit
model.beta.head = [0.1, 0.2]
model.beta.tail = 0.7

run.n_max = 1000
run.checkpoints = [10, 100, 1000]
run.n_paths = 50
run.master_seed = 7
run.backend = memory_sampling
run.worker_count = 3

analysis.scale_kind = thm3_strong
analysis.rel_tol = 0.01
output.directory = /tmp/somewhere
output.formats = [csv]
)";

}  // namespace

TEST_CASE("kv config parses into the same schema as JSON") {
    const json j = kv_to_json(kSampleKv);
    const auto config = config_from_json(j);
    CHECK(config.model.p == 0.9);
    CHECK(config.model.q == 0.5);
    CHECK(std::get<derw::ConstantSeq>(config.model.alpha).value == 0.8);
    const auto& beta = std::get<derw::ExplicitSeq>(config.model.beta);
    CHECK(beta.head == std::vector<double>{0.1, 0.2});
    CHECK(beta.tail == 0.7);
    CHECK(config.n_max == 1000);
    CHECK(config.checkpoints.kind == CheckpointSpec::Kind::explicit_list);
    CHECK(config.checkpoints.values == std::vector<std::int64_t>{10, 100, 1000});
    CHECK(config.n_paths == 50);
    CHECK(config.master_seed == 7);
    CHECK(config.backend == derw::SimBackend::memory_sampling);
    CHECK(config.worker_count == 3);
    CHECK(config.scale_kind == derw::ScaleKind::thm3_strong);
    CHECK(config.rel_tol == 0.01);
    CHECK(config.out_dir == "/tmp/somewhere");
    CHECK(config.write_csv);
    CHECK(!config.write_json);

    // Round-trip through the canonical JSON form.
    const auto again = config_from_json(config_to_json(config));
    CHECK(config_to_json(again) == config_to_json(config));
}

TEST_CASE("unknown keys are errors with the offending path") {
    json j = kv_to_json(kSampleKv);
    j["run"]["n_pathz"] = 3;
    try {
        config_from_json(j);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("run.n_pathz") != std::string::npos);
    }
}

TEST_CASE("kv parser: diagnostics carry line numbers") {
    try {
        kv_to_json("model.p = 0.9\nbroken line\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(kv_to_json("a.b = 1\na.b = 2\n"), ConfigError);  // duplicate
}

TEST_CASE("range validation") {
    json j = kv_to_json(kSampleKv);
    j["model"]["p"] = 1.5;
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
    j = kv_to_json(kSampleKv);
    j["run"]["n_paths"] = 0;
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
    j = kv_to_json(kSampleKv);
    j["model"]["alpha"] = {{"kind", "power"}, {"limit", 0.5}, {"amplitude", 1.0}, {"exponent", 0.0}};
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
    j = kv_to_json(kSampleKv);
    j["analysis"]["scale_kind"] = "thm9";
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
}

TEST_CASE("checkpoint generators expand deterministically") {
    CheckpointSpec dyadic{CheckpointSpec::Kind::dyadic, {}, 0};
    const auto d = expand_checkpoints(dyadic, 100, 100);
    CHECK(d == std::vector<std::int64_t>{1, 2, 4, 8, 16, 32, 64});

    CheckpointSpec log_spaced{CheckpointSpec::Kind::log_spaced, {}, 5};
    const auto l = expand_checkpoints(log_spaced, 100000, 100);
    REQUIRE(l.size() == 5);
    CHECK(l.front() == 10);
    CHECK(l.back() == 1000);  // n_max / separation_factor
    for (std::size_t i = 1; i < l.size(); ++i) CHECK(l[i] > l[i - 1]);

    CheckpointSpec bad_duplicates{CheckpointSpec::Kind::explicit_list, {5, 5}, 0};
    CHECK_THROWS_AS(expand_checkpoints(bad_duplicates, 100, 100), ConfigError);
    CheckpointSpec out_of_range{CheckpointSpec::Kind::explicit_list, {101}, 0};
    CHECK_THROWS_AS(expand_checkpoints(out_of_range, 100, 100), ConfigError);
}

TEST_CASE("sequence kinds parse from JSON") {
    json j = kv_to_json(kSampleKv);
    j["model"]["alpha"] = {{"kind", "rotation"},
                           {"theta", 0.4142135623730951},
                           {"lo", 0.6},
                           {"hi", 0.9},
                           {"irrational", true}};
    j["model"]["beta"] = {{"kind", "periodic"}, {"values", {0.2, 0.6}}};
    const auto config = config_from_json(j);
    CHECK(std::get<derw::RotationSeq>(config.model.alpha).irrational);
    CHECK(std::get<derw::PeriodicSeq>(config.model.beta).values.size() == 2);
}

TEST_CASE("sha256 known answers") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    // 56 bytes forces the two-block padding path.
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}
