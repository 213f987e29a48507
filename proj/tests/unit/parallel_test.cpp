// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>

#include "neuronscope/parallel.hpp"

using namespace neuronscope;

TEST(Parallel, CoversEveryIndexOnce) {
  for (std::size_t workers : {1u, 2u, 5u}) {
    std::vector<std::atomic<int>> hits(1003);
    parallel_for(hits.size(), 17, workers, [&](std::size_t b, std::size_t e) {
      EXPECT_LE(e - b, 17u);
      for (std::size_t i = b; i < e; ++i) hits[i]++;
    });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(Parallel, EmptyRangeRunsNothing) {
  bool called = false;
  parallel_for(0, 8, 4, [&](std::size_t, std::size_t) { called = true; });
  EXPECT_FALSE(called);
}

TEST(Parallel, ExceptionsPropagate) {
  EXPECT_THROW(parallel_for(100, 10, 3,
                            [](std::size_t b, std::size_t) {
                              if (b == 50) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(Parallel, EnvironmentCapsWorkers) {
  ::setenv("NEURONSCOPE_THREADS", "2", 1);
  EXPECT_EQ(resolve_workers(8), 2u);
  EXPECT_EQ(resolve_workers(1), 1u);
  ::setenv("NEURONSCOPE_THREADS", "junk", 1);
  EXPECT_GE(resolve_workers(0), 1u);
  ::unsetenv("NEURONSCOPE_THREADS");
  EXPECT_EQ(resolve_workers(3), 3u);
}
