#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <set>

#include <decolab/rng.hpp>
#include <decolab/sampling.hpp>

using decolab::QubitState;
using decolab::SamplingMode;
using decolab::SplitMix64;

TEST_CASE("splitmix64 matches the published stream for seed 0") {
    SplitMix64 rng(0);
    REQUIRE(rng.next() == 0xE220A8397B1DCDAFULL);
    REQUIRE(rng.next() == 0x6E789E6AA1B965F4ULL);
    REQUIRE(rng.next() == 0x06C45D188009454FULL);
}

TEST_CASE("splitmix64 stream for seed 42 is frozen") {
    SplitMix64 rng(42);
    REQUIRE(rng.next() == 0xBDD732262FEB6E95ULL);
    REQUIRE(rng.next() == 0x28EFE333B266F103ULL);
    REQUIRE(rng.next() == 0x47526757130F9F52ULL);
}

TEST_CASE("uniform01 is the top 53 bits scaled") {
    SplitMix64 rng(42);
    REQUIRE(rng.uniform01() == 0.7415648787718233);
    REQUIRE(rng.uniform01() == 0.1599103928769201);

    SplitMix64 bulk(7);
    for (int i = 0; i < 10000; ++i) {
        const double u = bulk.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("uniform(lo, hi) stays in range and scales the same stream") {
    SplitMix64 a(42);
    SplitMix64 b(42);
    REQUIRE(a.uniform(-1.0, 1.0) == -1.0 + 2.0 * b.uniform01());
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform(2.0, 5.0);
        REQUIRE(u >= 2.0);
        REQUIRE(u < 5.0);
    }
}

TEST_CASE("gaussian consumes exactly two uniforms and is frozen") {
    SplitMix64 rng(42);
    REQUIRE(rng.gaussian(0.0, 1.0) == 0.4147197504315306);
    // The two raw words were consumed; the stream continues at word three.
    REQUIRE(rng.next() == 0x47526757130F9F52ULL);
}

TEST_CASE("gaussian mean and scale transform the unit draw") {
    SplitMix64 a(123);
    SplitMix64 b(123);
    const double unit = a.gaussian(0.0, 1.0);
    REQUIRE(b.gaussian(2.0, 3.0) == 2.0 + 3.0 * unit);
}

TEST_CASE("gaussian sample moments are sane") {
    SplitMix64 rng(2024);
    const int n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gaussian(0.0, 1.0);
        sum += g;
        sumsq += g * g;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    REQUIRE(std::abs(mean) < 0.02);
    REQUIRE(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("adjacent seeds give distinct streams") {
    SplitMix64 a(42);
    SplitMix64 b(43);
    REQUIRE(a.next() != b.next());
}

TEST_CASE("sampled qubit states are normalized in both modes") {
    for (const SamplingMode mode : {SamplingMode::complex_square, SamplingMode::real_unit}) {
        SplitMix64 rng(5);
        for (int i = 0; i < 200; ++i) {
            const QubitState s = decolab::sample_qubit_state(rng, mode);
            REQUIRE(std::abs(std::norm(s.alpha) + std::norm(s.beta) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("real_unit amplitudes are real and non-negative") {
    SplitMix64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const QubitState s = decolab::sample_qubit_state(rng, SamplingMode::real_unit);
        REQUIRE(s.alpha.imag() == 0.0);
        REQUIRE(s.beta.imag() == 0.0);
        REQUIRE(s.alpha.real() >= 0.0);
        REQUIRE(s.alpha.real() < 1.0);
        REQUIRE(s.beta.real() >= 0.0);
    }
}

TEST_CASE("environment sampling draws coupling first, then amplitudes") {
    SplitMix64 manual(99);
    const double omega = manual.gaussian(0.0, std::sqrt(2.0 * 0.2));
    const QubitState state = decolab::sample_qubit_state(manual, SamplingMode::complex_square);

    SplitMix64 rng(99);
    const auto env = decolab::sample_environment(rng, 1, SamplingMode::complex_square, 0.2);
    REQUIRE(env.spins.size() == 1);
    REQUIRE(env.spins[0].omega == omega);
    REQUIRE(env.spins[0].state.alpha == state.alpha);
    REQUIRE(env.spins[0].state.beta == state.beta);
}

TEST_CASE("environment coupling spread follows the width parameter") {
    SplitMix64 rng(31);
    const double lam = 0.5;
    const auto env = decolab::sample_environment(rng, 20000, SamplingMode::real_unit, lam);
    double sumsq = 0.0;
    for (const auto& s : env.spins) sumsq += s.omega * s.omega;
    const double var = sumsq / static_cast<double>(env.spins.size());
    REQUIRE(std::abs(var - 2.0 * lam) < 0.03);
}

TEST_CASE("environment sampling rejects a non-positive width") {
    SplitMix64 rng(1);
    REQUIRE_THROWS_AS(decolab::sample_environment(rng, 3, SamplingMode::real_unit, 0.0),
                      std::domain_error);
    REQUIRE_THROWS_AS(decolab::sample_environment(rng, 3, SamplingMode::real_unit, -1.0),
                      std::domain_error);
}

TEST_CASE("sampling mode names round-trip") {
    REQUIRE(decolab::sampling_from_string("complex_square") == SamplingMode::complex_square);
    REQUIRE(decolab::sampling_from_string("real_unit") == SamplingMode::real_unit);
    REQUIRE(std::string(decolab::to_string(SamplingMode::real_unit)) == "real_unit");
    REQUIRE_THROWS_AS(decolab::sampling_from_string("gaussian"), std::invalid_argument);
}
