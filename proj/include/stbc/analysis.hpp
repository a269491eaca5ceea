#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "stbc/code.hpp"

namespace stbc {

// Symbol difference on the unnormalized QAM lattice; entries are even
// integers (differences of odd PAM levels).
using DifferenceVector = std::array<int, 8>;

// Integer skeleton of |det X(dx)| for the 4x4 code:
//   |det| = |sigma1^2 + b e^{j2phi} + sigma2^2 e^{j4phi}|
// with sigma1 = sum dx_i^2 (i=1..6), sigma2 = dx7^2 + dx8^2 and b built
// from the six cross products a_1..a_6 (each a multiple of 4, with
// sum a_i^2 = sigma1*sigma2). discriminant = b^2 - 4(sigma1*sigma2)^2.
struct ClosedFormParts {
    long long sigma1 = 0;
    long long sigma2 = 0;
    std::array<long long, 6> a{};
    long long b = 0;
    long long discriminant = 0;
};

ClosedFormParts closed_form_parts(const DifferenceVector& dx);

// |det(assemble_codeword(code, dx))| via a direct 4x4 determinant.
double det_difference(const LinearDispersionCode& code, const DifferenceVector& dx);

// The closed form above; valid for the 4x4 code at any phi.
double det_closed_form(const DifferenceVector& dx, double phi);

// Sign symmetries that leave |det| unchanged, used to prune enumeration:
//   global_sign  — dx -> -dx, valid for every linear code;
//   block_signs  — independent sign flips of (dx1..dx6) and (dx7,dx8),
//                  valid for the 4x4 code (all a_i flip sign, b survives).
enum class LatticeSymmetry { none, global_sign, block_signs };

struct MinDetReport {
    double min_abs_det = std::numeric_limits<double>::infinity();
    DifferenceVector argmin{};
    int lattice_spread = 0;
    long long count_examined = 0;
};

// Exhaustive minimum of |det X(dx)| over nonzero even vectors with entries
// in [-spread, spread]. spread must be 2, 4 or 6 (larger lattices go
// through min_det_sample). Deterministic for any thread count: equal
// minima resolve to the lexicographically smallest examined vector.
MinDetReport min_det_search(const LinearDispersionCode& code, int spread,
                            LatticeSymmetry symmetry = LatticeSymmetry::global_sign,
                            int threads = 0);

// Randomized counterpart for lattices too large to enumerate; draws
// `samples` vectors uniformly from the nonzero lattice.
MinDetReport min_det_sample(const LinearDispersionCode& code, int spread, long long samples,
                            uint64_t seed, int threads = 0);

struct PaprReport {
    double papr_db = 0.0;
    int constellation_m = 0;
    double peak_energy = 0.0;
    double avg_energy = 0.0;
};

// Peak-to-average power per antenna. Requires every (time, antenna) slot of
// the code to carry exactly one complex symbol through two unit-modulus,
// phase-orthogonal weights; all slots then share one PAPR value.
PaprReport papr(const LinearDispersionCode& code, const Constellation& c);

struct NvdCaseRecord {
    DifferenceVector dx{};
    ClosedFormParts parts;
    double det_closed = 0.0;
    double det_direct = 0.0;
};

struct NvdReport {
    int bound = 0;
    double phi = 0.0;
    int gap_bound = 0;
    long long lattice_cases = 0;
    long long sigma_equal_cases = 0;
    long long tight_difference_cases = 0;  // (sigma2-sigma1)^2 == 16
    double min_det = std::numeric_limits<double>::infinity();
    long long gap_tuples = 0;
    long long gap_min = 0;
    bool residues_ok = false;
    long long violations_total = 0;
    std::vector<NvdCaseRecord> violations;  // first few counterexamples
    bool pass = false;
};

// Certifies the determinant floor on the whole nonzero lattice with entries
// in [-bound, bound] (bound <= 6, even):
//   (a) discriminant <= 0 and exact integer identities on the a_i;
//   (b) sigma1 != sigma2: |det| >= (sigma2-sigma1)^2 >= 16 for every phi;
//   (c) sigma1 == sigma2 == sigma > 0: |2 sigma^2 + 5b| >= 80 in exact
//       integers, i.e. |det| >= 16 at cos(2 phi) = 1/5;
//   (d) the quadratic gap |3x1^2 - 5(x2^2+x3^2+x4^2)| >= 2 on all nonzero
//       integer tuples in [-gap_bound, gap_bound]^4, with 3x1^2 mod 5
//       always in {0, 2, 3}.
// Also cross-checks det_closed_form against det_difference per case.
NvdReport verify_nvd(int bound, double phi, int gap_bound = 20, int threads = 0);

// Streams one CSV row per lattice vector (bound <= 4 to keep files sane).
void write_nvd_records_csv(std::ostream& os, int bound, double phi);

struct PhiSweepPoint {
    double phi = 0.0;
    double min_det = 0.0;
    double second_det = 0.0;  // smallest determinant above the minimum
};

struct PhiSweepResult {
    std::vector<PhiSweepPoint> curve;
    int spread = 0;
    int refine_spread = 0;
    int best_index = 0;
    double best_phi = 0.0;
    double best_min_det = 0.0;
    long long plateau_points = 0;  // grid points tied at the curve maximum
    long long refined_points = 0;  // still tied after the refine stage
};

// Worst-case |det| of the 4x4 code as a function of phi on a uniform
// grid over [0, pi/2]. The maximum sits on a plateau, so ties resolve by:
// largest minimum on the next lattice spread (spread+2), then largest gap
// to the second determinant level there, then smallest phi.
PhiSweepResult phi_sweep(int grid_points, int spread, int threads = 0);

void write_min_det_csv(std::ostream& os, const MinDetReport& r);
void write_phi_sweep_csv(std::ostream& os, const PhiSweepResult& r);
void write_nvd_summary_csv(std::ostream& os, const NvdReport& r);

} // namespace stbc
