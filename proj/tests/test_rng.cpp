#include <doctest.h>

#include <set>

#include "cgpc/rng.hpp"

using cgpc::derive_seed;
using cgpc::Rng;
using cgpc::SeedStream;

TEST_CASE("derive_seed separates streams and indices") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t master : {0ULL, 1ULL, 42ULL}) {
        for (auto stream : {SeedStream::Split, SeedStream::Evolve, SeedStream::Adasyn,
                            SeedStream::Folds}) {
            for (std::uint64_t a = 0; a < 4; ++a)
                for (std::uint64_t b = 0; b < 4; ++b)
                    seen.insert(derive_seed(master, stream, a, b));
        }
    }
    CHECK(seen.size() == 3 * 4 * 4 * 4); // no collisions in this small grid
    CHECK(derive_seed(7, SeedStream::Split, 1, 2) == derive_seed(7, SeedStream::Split, 1, 2));
}

TEST_CASE("uniform_index stays in range and covers values") {
    Rng rng(123);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const auto v = rng.uniform_index(7);
        CHECK(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
}

TEST_CASE("uniform_real in [0,1) with sane mean") {
    Rng rng(9);
    double sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double v = rng.uniform_real();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
        sum += v;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("shuffle is a permutation and seed-stable") {
    std::vector<int> a{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::vector<int> b = a;
    Rng r1(5), r2(5);
    r1.shuffle(a);
    r2.shuffle(b);
    CHECK(a == b);
    std::vector<int> sorted = a;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
}
