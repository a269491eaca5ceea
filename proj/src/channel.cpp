#include "stbc/channel.hpp"

#include <stdexcept>

namespace stbc {

void sample_rayleigh(int nt, int nr, Rng& rng, ChannelRealization& out) {
    if (out.h.rows() != nt || out.h.cols() != nr) out.h = CMatrix(nt, nr);
    double acc = 0.0;
    for (int c = 0; c < nr; ++c) {
        for (int r = 0; r < nt; ++r) {
            const cplx v = rng.cgaussian(1.0);
            out.h(r, c) = v;
            acc += std::norm(v);
        }
    }
    out.fro_norm_sq = acc;
}

ChannelRealization sample_rayleigh(int nt, int nr, Rng& rng) {
    ChannelRealization cr;
    sample_rayleigh(nt, nr, rng, cr);
    return cr;
}

void equivalent_channel(const LinearDispersionCode& code, const CMatrix& h,
                        EquivalentChannel& out) {
    if (h.rows() != code.nt)
        throw std::invalid_argument("equivalent_channel: h must have nt rows");
    const int t = code.t;
    const int nr = h.cols();
    const int nq = 2 * code.k;
    if (out.hcal.rows() != t * nr || out.hcal.cols() != nq) out.hcal = CMatrix(t * nr, nq);
    for (int q = 0; q < nq; ++q) {
        const CMatrix& b = code.betas[size_t(q)];
        // column q holds vec(beta_q * h), column-major over rx antennas
        for (int c = 0; c < nr; ++c) {
            for (int r = 0; r < t; ++r) {
                cplx s = 0.0;
                for (int m = 0; m < code.nt; ++m) s += b(r, m) * h(m, c);
                out.hcal(c * t + r, q) = s;
            }
        }
    }
    out.h_fro_norm_sq = h.fro_norm_sq();
}

EquivalentChannel equivalent_channel(const LinearDispersionCode& code, const CMatrix& h) {
    EquivalentChannel ec;
    equivalent_channel(code, h, ec);
    return ec;
}

CVec transmit(const LinearDispersionCode& code, const std::vector<double>& x, const CMatrix& h) {
    const CMatrix xw = assemble_codeword(code, x);
    return (xw * h).vec();
}

void add_awgn(CVec& r, double n0, Rng& rng) {
    if (n0 == 0.0) return;
    for (auto& v : r) v += rng.cgaussian(n0);
}

} // namespace stbc
