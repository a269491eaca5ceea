#pragma once

#include "stbc/cmatrix.hpp"
#include "stbc/code.hpp"
#include "stbc/rng.hpp"

namespace stbc {

// Quasi-static flat-fading channel, entries i.i.d. CN(0, 1).
struct ChannelRealization {
    CMatrix h;                 // nt x nr
    double fro_norm_sq = 0.0;  // ||H||_F^2 = ||vec(H)||^2
};

// Draws entries in column-major (vec) order from rng.
ChannelRealization sample_rayleigh(int nt, int nr, Rng& rng);
void sample_rayleigh(int nt, int nr, Rng& rng, ChannelRealization& out);

// Real-linear model of one block: r = vec(X H + W) = Hcal x + w.
// Column q of Hcal is vec(beta_q H), so for unitary weights every column
// carries the full channel energy ||H||_F^2.
struct EquivalentChannel {
    CMatrix hcal;              // (t*nr) x 2k
    double h_fro_norm_sq = 0.0;
};

EquivalentChannel equivalent_channel(const LinearDispersionCode& code, const CMatrix& h);
void equivalent_channel(const LinearDispersionCode& code, const CMatrix& h,
                        EquivalentChannel& out);

// vec(assemble_codeword(code, x) * h); length t*nr.
CVec transmit(const LinearDispersionCode& code, const std::vector<double>& x, const CMatrix& h);

// Adds CN(0, n0) per entry; n0 == 0 adds nothing and consumes no draws.
void add_awgn(CVec& r, double n0, Rng& rng);

} // namespace stbc
