#include <doctest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "arpsim/parallel.hpp"

using arpsim::parallel_for;

TEST_CASE("every index runs exactly once") {
  for (unsigned workers : {1u, 2u, 5u, 16u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), workers, [&](std::size_t i) { hits[i].fetch_add(1); });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
  parallel_for(0, 4, [](std::size_t) { FAIL("no tasks expected"); });
}

TEST_CASE("lowest failing index wins") {
  for (unsigned workers : {1u, 3u, 8u}) {
    try {
      parallel_for(200, workers, [](std::size_t i) {
        if (i == 37 || i == 150) throw std::runtime_error(std::to_string(i));
      });
      FAIL("expected exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "37");
    }
  }
}

TEST_CASE("default worker count is positive") { CHECK(arpsim::default_worker_count() >= 1); }
