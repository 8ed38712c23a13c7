// Compares the serial reference implementations against the OpenMP-parallel
// kernels and verifies that both produce identical results.  Kernels covered:
// row-wise encoding with train-phase noise, Monte Carlo rate draws,
// estimation-gap trials and sweep grid points.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fairenc/encoders.hpp"
#include "fairenc/harness.hpp"
#include "fairenc/parallel.hpp"
#include "fairenc/rng.hpp"
#include "fairenc/theory.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using fairenc::Exec;

double time_ms(const std::function<void()>& fn, int repeats) {
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-26s %10.1f ms %10.1f ms %6.2fx  %s\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, identical ? "identical" : "MISMATCH");
}

fairenc::Dataset make_rows(std::size_t n) {
    std::vector<std::string> cat(n);
    std::vector<double> x(n);
    std::vector<std::uint8_t> y(n);
    auto rng = fairenc::make_rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        cat[i] = "c" + std::to_string(i % 64);
        x[i] = unif(rng);
        y[i] = unif(rng) < 0.4 ? 1 : 0;
    }
    return fairenc::DatasetBuilder()
        .categorical("attr", fairenc::ColumnRole::feature, cat)
        .numeric("x", fairenc::ColumnRole::feature, std::move(x))
        .target("label", std::move(y))
        .build();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs parallel kernel benchmark"};
    std::size_t rows = 2000000;
    std::size_t trials = 200000;
    std::size_t gap_trials = 2000;
    int repeats = 3;
    app.add_option("--rows", rows, "rows for the encoding kernel");
    app.add_option("--trials", trials, "trials for the rate-draw kernel");
    app.add_option("--gap-trials", gap_trials, "trials for the estimation-gap kernel");
    app.add_option("--repeats", repeats, "repetitions per measurement (best kept)");
    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not available; parallel path runs serially\n");
#endif
    std::printf("%-26s %13s %13s %8s\n", "kernel", "serial", "parallel", "speedup");

    {
        auto data = make_rows(rows);
        fairenc::EncoderConfig cfg;
        cfg.gaussian_lambda = 0.3;
        cfg.noise_seed = 11;
        auto enc = fairenc::Encoder::fit(cfg, data, "attr");
        fairenc::FeatureMatrix ms, mp;
        double ts = time_ms([&] { ms = transform(enc, data, "attr", fairenc::Phase::train, Exec::serial); },
                            repeats);
        double tp = time_ms([&] { mp = transform(enc, data, "attr", fairenc::Phase::train, Exec::parallel); },
                            repeats);
        report("encode rows (noisy)", ts, tp, ms.values == mp.values);
    }

    {
        std::vector<double> ds, dp;
        double ts = time_ms([&] { ds = fairenc::sample_rate_draws(trials, 500, 0.3, 5, Exec::serial); },
                            repeats);
        double tp = time_ms([&] { dp = fairenc::sample_rate_draws(trials, 500, 0.3, 5, Exec::parallel); },
                            repeats);
        report("rate draws", ts, tp, ds == dp);
    }

    {
        std::vector<double> gs, gp;
        double ts = time_ms(
            [&] { gs = fairenc::estimation_gap_study(gap_trials, 5000, 10, 0.51, 0.0, 5, Exec::serial); },
            repeats);
        double tp = time_ms(
            [&] { gp = fairenc::estimation_gap_study(gap_trials, 5000, 10, 0.51, 0.0, 5, Exec::parallel); },
            repeats);
        report("estimation-gap trials", ts, tp, gs == gp);
    }

    {
        fairenc::ExperimentConfig cfg;
        cfg.population = fairenc::PopulationSpec{
            {{"a", 0.5, 0.7}, {"b", 0.3, 0.4}, {"c", 0.2, 0.55}}, 20000, 3};
        cfg.protected_attributes = {"group"};
        cfg.references = {"a"};
        cfg.encoders = {{"drop", fairenc::EncoderMethod::drop, false, false, 0, 0},
                        {"one-hot", fairenc::EncoderMethod::one_hot, false, false, 0, 0},
                        {"target", fairenc::EncoderMethod::target, false, false, 0, 0},
                        {"target+gaussian", fairenc::EncoderMethod::target, true, false, 0, 0}};
        cfg.sweep_lambda = {0.0, 0.05, 0.1, 0.2, 0.3, 0.5, 1.0, 2.0, 5.0};
        cfg.validate();
        std::vector<fairenc::SweepRecord> rs, rp;
        double ts = time_ms([&] { rs = fairenc::run_sweep(cfg, Exec::serial); }, repeats);
        double tp = time_ms([&] { rp = fairenc::run_sweep(cfg, Exec::parallel); }, repeats);
        bool same = rs.size() == rp.size();
        for (std::size_t i = 0; same && i < rs.size(); ++i) same = same_content(rs[i], rp[i]);
        report("sweep grid points", ts, tp, same);
    }
    return 0;
}
