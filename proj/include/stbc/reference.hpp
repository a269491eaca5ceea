#pragma once

#include "stbc/analysis.hpp"
#include "stbc/sim.hpp"

// Deliberately plain serial implementations of the parallel kernels. They
// skip the symmetry pruning and the cofactor fast path (determinants go
// through LU), so agreement with the stbc:: versions checks the kernels,
// not just the thread schedule. Kept for tests and the benchmark target.
namespace stbc::ref {

MinDetReport min_det_search(const LinearDispersionCode& code, int spread);

NvdReport verify_nvd(int bound, double phi, int gap_bound = 20);

std::vector<CerPoint> run_cer(const LinearDispersionCode& code, const SimConfig& cfg);

} // namespace stbc::ref
