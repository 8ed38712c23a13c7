#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "fairenc/harness.hpp"
#include "fairenc/parallel.hpp"
#include "fairenc/rng.hpp"
#include "fairenc/theory.hpp"

using namespace fairenc;

TEST_CASE("parallel_for covers every index exactly once") {
    for (std::size_t count : {std::size_t{0}, std::size_t{1}, std::size_t{257}}) {
        std::vector<std::atomic<int>> hits(count);
        parallel_for(count, Exec::parallel, [&](std::size_t i) { hits[i].fetch_add(1); });
        for (std::size_t i = 0; i < count; ++i) CHECK(hits[i].load() == 1);
    }
}

TEST_CASE("seed mixing separates streams and stays deterministic") {
    CHECK(mix_seed(1, 2) == mix_seed(1, 2));
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 64; ++s)
        for (std::uint64_t t = 0; t < 64; ++t) seen.insert(mix_seed(s, t));
    CHECK(seen.size() == 64 * 64);  // no collisions on a small grid
}

TEST_CASE("encoding transform is identical across execution policies") {
    PopulationSpec pop{{{"a", 0.4, 0.7}, {"b", 0.35, 0.3}, {"c", 0.25, 0.5}}, 5000, 13};
    auto data = sample_population(pop);
    EncoderConfig cfg;
    cfg.method = EncoderMethod::target;
    cfg.gaussian_lambda = 0.4;
    cfg.noise_seed = 77;
    auto enc = Encoder::fit(cfg, data, "group");
    auto serial = transform(enc, data, "group", Phase::train, Exec::serial);
    auto parallel = transform(enc, data, "group", Phase::train, Exec::parallel);
    CHECK(serial.values == parallel.values);
    CHECK(serial.names == parallel.names);
}

TEST_CASE("rate draws are identical across execution policies") {
    auto serial = sample_rate_draws(4000, 80, 0.3, 5, Exec::serial);
    auto parallel = sample_rate_draws(4000, 80, 0.3, 5, Exec::parallel);
    CHECK(serial == parallel);
}

TEST_CASE("estimation gap study is identical across execution policies") {
    auto serial = estimation_gap_study(300, 2000, 25, 0.51, 0.0, 9, Exec::serial);
    auto parallel = estimation_gap_study(300, 2000, 25, 0.51, 0.0, 9, Exec::parallel);
    CHECK(serial == parallel);
}

TEST_CASE("sweeps are identical across execution policies") {
    ExperimentConfig c;
    c.population = PopulationSpec{{{"a", 0.5, 0.7}, {"b", 0.3, 0.35}, {"c", 0.2, 0.55}}, 1500, 31};
    c.protected_attributes = {"group"};
    c.references = {"a"};
    c.encoders = {
        {"drop", EncoderMethod::drop, false, false, 0, 0},
        {"one-hot", EncoderMethod::one_hot, false, false, 0, 0},
        {"target", EncoderMethod::target, false, false, 0, 0},
        {"target+gaussian", EncoderMethod::target, true, false, 0, 0},
    };
    c.sweep_lambda = {0.0, 0.2, 0.4, 0.6};
    c.split_seed = 3;
    auto serial = run_sweep(c, Exec::serial);
    auto parallel = run_sweep(c, Exec::parallel);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(same_content(serial[i], parallel[i]));
}
