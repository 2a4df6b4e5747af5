#include <benchmark/benchmark.h>

// Local main instead of benchmark::benchmark_main: the distro's static
// benchmark_main archive ships LTO bytecode from an older compiler and
// cannot be linked here.
BENCHMARK_MAIN();
