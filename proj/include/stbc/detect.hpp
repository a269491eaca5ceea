#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "stbc/channel.hpp"
#include "stbc/code.hpp"

namespace stbc {

// Nearest odd-integer PAM level to correlation / channel_norm_sq, clipped
// to the m-QAM real alphabet. O(1) regardless of m.
double pam_slice(double correlation, double channel_norm_sq, int m);

struct DecodeResult {
    std::vector<double> s_hat;   // 2K PAM levels
    double metric = std::numeric_limits<double>::infinity();     // ||r - Hcal*s_hat||
    double runner_up = std::numeric_limits<double>::infinity();  // second-best metric seen
    uint64_t metric_evals = 0;
};

// Reusable buffers so per-trial decoding does not allocate.
struct DecodeScratch {
    std::vector<cplx> cols;     // column-major copy of hcal
    std::vector<cplx> z;        // candidate residual
    std::vector<cplx> partial;  // exhaustive DFS residual stack
    std::vector<double> cur;
    std::vector<double> best;
};

// Searches the last two real symbols over the M = sqrt_m^2 candidate pairs
// in ascending lexicographic order; all other symbols come from the slicer.
// Requires the leading 2K-2 columns of hcal to be mutually real-orthogonal
// and every column to carry the full channel energy (throws otherwise).
// metric_evals is exactly M.
DecodeResult conditional_ml_decode(const EquivalentChannel& ec, const CVec& r,
                                   const Constellation& c);
DecodeResult conditional_ml_decode(const EquivalentChannel& ec, const CVec& r,
                                   const Constellation& c, DecodeScratch& ws);

// Full search over all M^K symbol vectors in ascending lexicographic order,
// ties kept at the first minimizer. Guard: M^K <= 2^24. metric_evals = M^K.
DecodeResult exhaustive_ml_decode(const EquivalentChannel& ec, const CVec& r,
                                  const Constellation& c);
DecodeResult exhaustive_ml_decode(const EquivalentChannel& ec, const CVec& r,
                                  const Constellation& c, DecodeScratch& ws);

} // namespace stbc
