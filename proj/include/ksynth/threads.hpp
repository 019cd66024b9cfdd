#pragma once

namespace ksynth {

// Worker-pool bound for the parallel sections (conv layers, FFT batches,
// dataset generation). 0 means "hardware default". All parallel code paths
// produce bitwise identical results for any thread count.
void set_max_threads(int n);
int max_threads();

}  // namespace ksynth
