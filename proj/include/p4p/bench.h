#ifndef P4P_BENCH_H_
#define P4P_BENCH_H_

#include <cstdint>

#include "p4p/p4p_solver.h"

namespace p4p {

struct BenchConfig {
  int batch_size = 10000;
  int repeats = 5;
  std::uint64_t seed = 1;
  Precision precision = Precision::kDouble;
};

struct BenchResult {
  int batch_size = 0;
  int repeats = 0;
  int solved = 0;                  // configurations the reduction solved
  double reduction_us = 0.0;       // median over repeats, microseconds per configuration
  double reduction_horn_us = 0.0;  // reduction followed by alignment
  double ratio() const { return reduction_us > 0.0 ? reduction_horn_us / reduction_us : 0.0; }
};

// Times the batched four-point reduction alone and the reduction followed
// by absolute orientation of every solved configuration, on noiseless
// general scenarios, after one untimed warm-up pass. Throws
// Error(kInvalidArgument) for non-positive sizes.
BenchResult RunBench(const BenchConfig& config);

}  // namespace p4p

#endif  // P4P_BENCH_H_
