#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "icsim/detect/window.hpp"

using namespace icsim::detect;

namespace {

// Final verdict after feeding `bits` (LSB = first sample) into a fresh window.
WindowVerdict feed(std::size_t w, double theta, unsigned bits, std::size_t count)
{
    SlidingWindow window(w, theta);
    WindowVerdict v = WindowVerdict::warming_up;
    for (std::size_t i = 0; i < count; ++i)
        v = window.push((bits >> i) & 1u ? SampleVerdict::anomaly : SampleVerdict::normal);
    return v;
}

} // namespace

TEST_CASE("required counts: ceil(theta * W)")
{
    CHECK(SlidingWindow(15, 0.6).required() == 9);
    CHECK(SlidingWindow(5, 0.6).required() == 3);
    CHECK(SlidingWindow(10, 0.7).required() == 7);
    CHECK(SlidingWindow(20, 0.8).required() == 16);
    CHECK(SlidingWindow(5, 0.8).required() == 4);
    CHECK(SlidingWindow(15, 1.0).required() == 15);
}

TEST_CASE("verdicts only after the queue fills")
{
    SlidingWindow w(15, 0.6);
    for (int i = 0; i < 14; ++i)
        CHECK(w.push(SampleVerdict::anomaly) == WindowVerdict::warming_up);
    CHECK(w.push(SampleVerdict::anomaly) == WindowVerdict::attack);
}

TEST_CASE("9 of 15 fires, 8 does not, exhaustively over placements")
{
    // All C(15,k) placements for k in {8,9}.
    for (unsigned bits = 0; bits < (1u << 15); ++bits) {
        const int k = __builtin_popcount(bits);
        if (k != 8 && k != 9)
            continue;
        const WindowVerdict v = feed(15, 0.6, bits, 15);
        REQUIRE(v == (k >= 9 ? WindowVerdict::attack : WindowVerdict::normal));
    }
}

TEST_CASE("all-normal stream never alarms")
{
    SlidingWindow w(5, 0.6);
    for (int i = 0; i < 10000; ++i)
        CHECK(w.push(SampleVerdict::normal) != WindowVerdict::attack);
}

TEST_CASE("eviction: alarms clear as anomalies age out")
{
    SlidingWindow w(5, 0.6);
    w.push(SampleVerdict::anomaly);
    w.push(SampleVerdict::anomaly);
    w.push(SampleVerdict::anomaly);
    w.push(SampleVerdict::normal);
    CHECK(w.push(SampleVerdict::normal) == WindowVerdict::attack); // 3 of 5
    CHECK(w.push(SampleVerdict::normal) == WindowVerdict::normal); // oldest anomaly evicted
    CHECK(w.anomaly_count() == 2);
}

TEST_CASE("monotonicity: flipping one verdict to anomaly never clears an attack")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<unsigned> pick(0, (1u << 15) - 1);
    for (int round = 0; round < 2000; ++round) {
        const unsigned bits = pick(rng);
        const WindowVerdict base = feed(15, 0.6, bits, 15);
        for (int i = 0; i < 15; ++i) {
            if (bits & (1u << i))
                continue;
            const WindowVerdict flipped = feed(15, 0.6, bits | (1u << i), 15);
            if (base == WindowVerdict::attack)
                REQUIRE(flipped == WindowVerdict::attack);
        }
    }
}

TEST_CASE("window parameter validation")
{
    CHECK_THROWS_AS(SlidingWindow(0, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(SlidingWindow(5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(SlidingWindow(5, 1.5), std::invalid_argument);
}
