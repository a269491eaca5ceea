#include "stbc/detect.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stbc {

namespace {

// max_level = sqrt_m - 1, the largest PAM magnitude.
double slice_level(double corr, double inv_scale, double max_level) {
    const double y = corr * inv_scale;
    const double k = 2.0 * std::round(0.5 * (y - 1.0)) + 1.0;
    const double mag = std::min(std::abs(k), max_level);
    return corr < 0.0 ? -mag : mag;
}

void copy_columns(const CMatrix& hcal, std::vector<cplx>& cols) {
    const int n = hcal.rows();
    const int nq = hcal.cols();
    cols.resize(size_t(n) * size_t(nq));
    for (int q = 0; q < nq; ++q)
        for (int i = 0; i < n; ++i) cols[size_t(q) * n + i] = hcal(i, q);
}

void check_dimensions(const EquivalentChannel& ec, const CVec& r) {
    if (int(r.size()) != ec.hcal.rows())
        throw std::invalid_argument("decode: r has length " + std::to_string(r.size()) +
                                    ", expected " + std::to_string(ec.hcal.rows()));
    if (ec.hcal.cols() < 4 || ec.hcal.cols() % 2 != 0)
        throw std::invalid_argument("decode: hcal must have an even column count >= 4");
}

} // namespace

double pam_slice(double correlation, double channel_norm_sq, int m) {
    if (!(channel_norm_sq > 0.0))
        throw std::invalid_argument("pam_slice: channel_norm_sq must be positive");
    const Constellation c = qam_constellation(m);
    return slice_level(correlation, 1.0 / channel_norm_sq, double(c.sqrt_m - 1));
}

DecodeResult conditional_ml_decode(const EquivalentChannel& ec, const CVec& r,
                                   const Constellation& c, DecodeScratch& ws) {
    check_dimensions(ec, r);
    const int n = ec.hcal.rows();
    const int nq = ec.hcal.cols();
    const int n_orth = nq - 2;

    copy_columns(ec.hcal, ws.cols);
    const cplx* cols = ws.cols.data();

    // Columns must carry the full channel energy (slicer scale) and the
    // leading block must be real-orthogonal, otherwise per-symbol slicing
    // is not the ML decision and the result would be silently wrong.
    const double hfro = ec.h_fro_norm_sq;
    const double tol = 1e-8 * hfro;
    for (int q = 0; q < nq; ++q) {
        double nrm = 0.0;
        for (int i = 0; i < n; ++i) nrm += std::norm(cols[size_t(q) * n + i]);
        if (std::abs(nrm - hfro) > tol)
            throw std::invalid_argument("conditional_ml_decode: column " + std::to_string(q + 1) +
                                        " does not have the full channel norm");
    }
    for (int qa = 0; qa < n_orth; ++qa)
        for (int qb = qa + 1; qb < n_orth; ++qb) {
            double re = 0.0;
            for (int i = 0; i < n; ++i)
                re += (std::conj(cols[size_t(qa) * n + i]) * cols[size_t(qb) * n + i]).real();
            if (std::abs(re) > tol)
                throw std::invalid_argument("conditional_ml_decode: columns " +
                                            std::to_string(qa + 1) + " and " +
                                            std::to_string(qb + 1) + " are not real-orthogonal");
        }

    const double inv_scale = 1.0 / hfro;
    const double max_level = double(c.sqrt_m - 1);
    const cplx* c7 = cols + size_t(n_orth) * n;
    const cplx* c8 = cols + size_t(n_orth + 1) * n;

    ws.z.resize(size_t(n));
    ws.cur.assign(size_t(nq), 0.0);
    ws.best.assign(size_t(nq), 0.0);

    DecodeResult res;
    res.metric_evals = 0;

    for (double x7 : c.pam) {
        for (double x8 : c.pam) {
            cplx* z = ws.z.data();
            for (int i = 0; i < n; ++i) z[i] = r[size_t(i)] - x7 * c7[i] - x8 * c8[i];

            for (int q = 0; q < n_orth; ++q) {
                const cplx* cq = cols + size_t(q) * n;
                double re = 0.0;
                for (int i = 0; i < n; ++i) re += (std::conj(cq[i]) * z[i]).real();
                ws.cur[size_t(q)] = slice_level(re, inv_scale, max_level);
            }
            ws.cur[size_t(n_orth)] = x7;
            ws.cur[size_t(n_orth + 1)] = x8;

            double d2 = 0.0;
            for (int i = 0; i < n; ++i) {
                cplx acc = z[i];
                for (int q = 0; q < n_orth; ++q) acc -= ws.cur[size_t(q)] * cols[size_t(q) * n + i];
                d2 += std::norm(acc);
            }
            const double d = std::sqrt(d2);
            ++res.metric_evals;
            if (d < res.metric) {
                res.runner_up = res.metric;
                res.metric = d;
                ws.best = ws.cur;
            } else if (d < res.runner_up) {
                res.runner_up = d;
            }
        }
    }
    res.s_hat = ws.best;
    return res;
}

DecodeResult conditional_ml_decode(const EquivalentChannel& ec, const CVec& r,
                                   const Constellation& c) {
    DecodeScratch ws;
    return conditional_ml_decode(ec, r, c, ws);
}

DecodeResult exhaustive_ml_decode(const EquivalentChannel& ec, const CVec& r,
                                  const Constellation& c, DecodeScratch& ws) {
    check_dimensions(ec, r);
    const int n = ec.hcal.rows();
    const int nq = ec.hcal.cols();
    const int k = nq / 2;

    uint64_t total = 1;
    for (int i = 0; i < k; ++i) total *= uint64_t(c.m);
    if (total > (uint64_t(1) << 24))
        throw std::invalid_argument("exhaustive_ml_decode: M^K = " + std::to_string(total) +
                                    " exceeds the 2^24 enumeration guard");

    copy_columns(ec.hcal, ws.cols);
    const cplx* cols = ws.cols.data();
    ws.partial.resize(size_t(nq + 1) * size_t(n));
    for (int i = 0; i < n; ++i) ws.partial[size_t(i)] = r[size_t(i)];
    ws.cur.assign(size_t(nq), 0.0);
    ws.best.assign(size_t(nq), 0.0);

    DecodeResult res;
    res.metric_evals = 0;

    // Depth-first over x_1..x_{2K}, PAM levels ascending, so leaves are
    // visited in lexicographic order and the first minimum wins ties.
    auto rec = [&](auto&& self, int level) -> void {
        const cplx* zin = ws.partial.data() + size_t(level) * n;
        cplx* zout = ws.partial.data() + size_t(level + 1) * n;
        const cplx* cl = cols + size_t(level) * n;
        for (double x : c.pam) {
            ws.cur[size_t(level)] = x;
            for (int i = 0; i < n; ++i) zout[i] = zin[i] - x * cl[i];
            if (level + 1 == nq) {
                double d2 = 0.0;
                for (int i = 0; i < n; ++i) d2 += std::norm(zout[i]);
                const double d = std::sqrt(d2);
                ++res.metric_evals;
                if (d < res.metric) {
                    res.runner_up = res.metric;
                    res.metric = d;
                    ws.best = ws.cur;
                } else if (d < res.runner_up) {
                    res.runner_up = d;
                }
            } else {
                self(self, level + 1);
            }
        }
    };
    rec(rec, 0);

    res.s_hat = ws.best;
    return res;
}

DecodeResult exhaustive_ml_decode(const EquivalentChannel& ec, const CVec& r,
                                  const Constellation& c) {
    DecodeScratch ws;
    return exhaustive_ml_decode(ec, r, c, ws);
}

} // namespace stbc
