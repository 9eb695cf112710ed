#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "nilheat/parallel.hpp"

using namespace nilheat;

TEST_CASE("parallel_for visits every index once") {
    for (int threads : {1, 3, 8}) {
        set_threads(threads);
        CHECK(thread_count() == threads);
        std::vector<int> hits(1000, 0);
        parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
        CHECK(std::accumulate(hits.begin(), hits.end(), 0) == 1000);
        CHECK(*std::min_element(hits.begin(), hits.end()) == 1);
    }
    set_threads(1);
}

TEST_CASE("empty range") {
    int calls = 0;
    parallel_for(0, [&](std::size_t) { ++calls; });
    CHECK(calls == 0);
}
