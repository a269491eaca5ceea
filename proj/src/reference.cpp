#include "stbc/reference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "stbc/channel.hpp"
#include "stbc/detect.hpp"

namespace stbc::ref {

namespace {

long long ipow(long long base, int exp) {
    long long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

DifferenceVector decode_index(long long idx, int levels, int spread) {
    DifferenceVector v{};
    for (int j = 7; j >= 0; --j) {
        v[size_t(j)] = 2 * int(idx % levels) - spread;
        idx /= levels;
    }
    return v;
}

double det_via_lu(const LinearDispersionCode& code, const DifferenceVector& dx) {
    std::vector<double> x(dx.begin(), dx.end());
    return std::abs(det(assemble_codeword(code, x)));
}

} // namespace

MinDetReport min_det_search(const LinearDispersionCode& code, int spread) {
    const int levels = spread + 1;
    const long long total = ipow(levels, 8);
    MinDetReport rep;
    rep.lattice_spread = spread;
    for (long long idx = 0; idx < total; ++idx) {
        const DifferenceVector dx = decode_index(idx, levels, spread);
        bool zero = true;
        for (int v : dx)
            if (v != 0) {
                zero = false;
                break;
            }
        if (zero) continue;
        const double d = det_via_lu(code, dx);
        ++rep.count_examined;
        if (d < rep.min_abs_det) {
            rep.min_abs_det = d;
            rep.argmin = dx;
        }
    }
    return rep;
}

NvdReport verify_nvd(int bound, double phi, int gap_bound) {
    NvdReport rep;
    rep.bound = bound;
    rep.phi = phi;
    rep.gap_bound = gap_bound;

    const LinearDispersionCode code = make_proposed_code(phi);
    const int levels = bound + 1;
    const long long total = ipow(levels, 8);

    for (long long idx = 0; idx < total; ++idx) {
        const DifferenceVector dx = decode_index(idx, levels, bound);
        bool zero = true;
        for (int v : dx)
            if (v != 0) {
                zero = false;
                break;
            }
        if (zero) continue;

        const ClosedFormParts p = closed_form_parts(dx);
        const double dc = det_closed_form(dx, phi);
        const double dd = det_via_lu(code, dx);
        ++rep.lattice_cases;

        bool ok = true;
        long long sum_sq = 0;
        for (long long ai : p.a) sum_sq += ai * ai;
        if (sum_sq != p.sigma1 * p.sigma2) ok = false;
        for (long long ai : p.a)
            if (((ai % 4) + 4) % 4 != 0) ok = false;
        if (p.discriminant > 0) ok = false;
        if (std::abs(dc - dd) > 1e-8 * std::max(1.0, dd)) ok = false;
        if (p.sigma2 != 0) {
            const double s2sq = double(p.sigma2 * p.sigma2);
            const cplx root =
                (-double(p.b) + std::sqrt(cplx(double(p.discriminant), 0.0))) / (2.0 * s2sq);
            const double want = double(p.sigma1) / double(p.sigma2);
            if (std::abs(std::abs(root) - want) > 1e-10 * std::max(1.0, want)) ok = false;
        }
        if (p.sigma1 != p.sigma2) {
            const long long gap2 = (p.sigma2 - p.sigma1) * (p.sigma2 - p.sigma1);
            if (gap2 == 16) ++rep.tight_difference_cases;
            if (gap2 < 16) ok = false;
            if (dc < double(gap2) - 1e-6 * std::max(1.0, double(gap2))) ok = false;
            if (dc < 16.0 - 1e-6) ok = false;
        } else {
            ++rep.sigma_equal_cases;
            if (std::llabs(2 * p.sigma1 * p.sigma1 + 5 * p.b) < 80) ok = false;
            if (dc < 16.0 - 1e-6) ok = false;
        }
        rep.min_det = std::min(rep.min_det, dc);
        if (!ok) {
            ++rep.violations_total;
            if (rep.violations.size() < 16) rep.violations.push_back({dx, p, dc, dd});
        }
    }

    const int g = gap_bound;
    long long gap_min = std::numeric_limits<long long>::max();
    long long bad_residue = 0, gap_violations = 0;
    for (int x1 = -g; x1 <= g; ++x1)
        for (int x2 = -g; x2 <= g; ++x2)
            for (int x3 = -g; x3 <= g; ++x3)
                for (int x4 = -g; x4 <= g; ++x4) {
                    if (x1 == 0 && x2 == 0 && x3 == 0 && x4 == 0) continue;
                    ++rep.gap_tuples;
                    const long long q1 = 3LL * x1 * x1;
                    const long long gap =
                        std::llabs(q1 - 5LL * (1LL * x2 * x2 + 1LL * x3 * x3 + 1LL * x4 * x4));
                    gap_min = std::min(gap_min, gap);
                    if (gap < 2) ++gap_violations;
                    const long long r5 = q1 % 5;
                    if (r5 != 0 && r5 != 2 && r5 != 3) ++bad_residue;
                }
    rep.gap_min = gap_min;
    rep.residues_ok = bad_residue == 0;
    rep.pass = rep.violations_total == 0 && gap_violations == 0 && rep.residues_ok &&
               rep.gap_min >= 2 && rep.min_det >= 16.0 - 1e-6;
    return rep;
}

std::vector<CerPoint> run_cer(const LinearDispersionCode& code, const SimConfig& cfg) {
    validate(cfg);
    const Constellation c = qam_constellation(cfg.m);
    constexpr long long chunk = 4096;

    std::vector<CerPoint> out;
    ChannelRealization h;
    EquivalentChannel ec;
    CVec r;
    DecodeScratch ws;
    for (size_t p = 0; p < cfg.snr_db_list.size(); ++p) {
        const double n0 = snr_to_n0(cfg.snr_db_list[p], c, code.nt);
        long long done = 0, errors = 0;
        uint64_t evals = 0;
        while (done < cfg.max_trials) {
            const long long end = std::min(cfg.max_trials, done + chunk);
            for (long long t = done; t < end; ++t) {
                Rng gh = Rng::from_stream(cfg.master_seed, p, uint64_t(t), 0);
                Rng gs = Rng::from_stream(cfg.master_seed, p, uint64_t(t), 1);
                Rng gn = Rng::from_stream(cfg.master_seed, p, uint64_t(t), 2);
                sample_rayleigh(code.nt, cfg.nr, gh, h);
                equivalent_channel(code, h.h, ec);
                const std::vector<double> x = draw_symbol_vector(c, 2 * code.k, gs);
                // accumulation order must match the parallel driver exactly
                r.assign(size_t(ec.hcal.rows()), cplx(0.0));
                for (int q = 0; q < ec.hcal.cols(); ++q) {
                    const double xq = x[size_t(q)];
                    for (int i = 0; i < ec.hcal.rows(); ++i) r[size_t(i)] += xq * ec.hcal(i, q);
                }
                add_awgn(r, n0, gn);
                const DecodeResult dr = cfg.decoder == DecoderKind::conditional
                                            ? conditional_ml_decode(ec, r, c, ws)
                                            : exhaustive_ml_decode(ec, r, c, ws);
                evals += dr.metric_evals;
                if (dr.s_hat != x) ++errors;
            }
            done = end;
            if (errors >= cfg.target_errors) break;
        }
        out.push_back({cfg.snr_db_list[p], done, errors, double(errors) / double(done), evals});
    }
    return out;
}

} // namespace stbc::ref
