#include "stbc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "stbc/rng.hpp"

namespace stbc {

namespace {

int resolve_threads(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

long long ipow(long long base, int exp) {
    long long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// |det| of a row-major 4x4 via expansion in 2x2 minors of the top and
// bottom row pairs; exact enough for the integer-entry lattices used here.
double abs_det4(const cplx* m) {
    auto top = [&](int a, int b) { return m[a] * m[4 + b] - m[b] * m[4 + a]; };
    auto bot = [&](int a, int b) { return m[8 + a] * m[12 + b] - m[8 + b] * m[12 + a]; };
    const cplx d = top(0, 1) * bot(2, 3) - top(0, 2) * bot(1, 3) + top(0, 3) * bot(1, 2) +
                   top(1, 2) * bot(0, 3) - top(1, 3) * bot(0, 2) + top(2, 3) * bot(0, 1);
    return std::abs(d);
}

bool is_flat4(const LinearDispersionCode& code) {
    return code.t == 4 && code.nt == 4 && code.k == 4;
}

// Per-entry sparse view of the weight matrices: assembling a 4x4 codeword
// touches only the nonzero weights (two per slot for the 4x4 code).
struct SparseSlots {
    struct Term {
        int q;
        cplx w;
    };
    std::array<std::vector<Term>, 16> terms;

    explicit SparseSlots(const LinearDispersionCode& code) {
        for (int q = 0; q < 8; ++q)
            for (int i = 0; i < 16; ++i) {
                const cplx w = code.betas[size_t(q)](i / 4, i % 4);
                if (std::abs(w) > 0.0) terms[size_t(i)].push_back({q, w});
            }
    }

    template <class Vec>
    void assemble(const Vec& dx, cplx* out) const {
        for (int i = 0; i < 16; ++i) {
            cplx s = 0.0;
            for (const Term& t : terms[size_t(i)]) s += double(dx[size_t(t.q)]) * t.w;
            out[i] = s;
        }
    }
};

// One |det| evaluator for both the flat 4x4 fast path and generic square
// codes; thread-local instances keep the hot loops allocation-free.
struct DetEval {
    const LinearDispersionCode& code;
    bool flat;
    const SparseSlots* slots;
    CMatrix work;

    DetEval(const LinearDispersionCode& c, const SparseSlots* s)
        : code(c), flat(is_flat4(c) && s != nullptr), slots(s), work(c.t, c.nt) {}

    double operator()(const DifferenceVector& dx) {
        if (flat) {
            cplx m[16];
            slots->assemble(dx, m);
            return abs_det4(m);
        }
        for (cplx& z : work.data()) z = 0.0;
        for (int q = 0; q < 8; ++q)
            if (dx[size_t(q)] != 0) work.axpy(double(dx[size_t(q)]), code.betas[size_t(q)]);
        return std::abs(det(work));
    }
};

void require_lattice_code(const LinearDispersionCode& code, const char* who) {
    if (code.t != code.nt)
        throw std::invalid_argument(std::string(who) + ": code matrix must be square");
    if (code.k != 4)
        throw std::invalid_argument(std::string(who) +
                                    ": the difference lattice is 8-dimensional, need K = 4");
}

bool block_canonical(const int* v, int lo, int hi) {
    for (int j = lo; j < hi; ++j) {
        if (v[j] > 0) return true;
        if (v[j] < 0) return false;
    }
    return true;  // all-zero block counts as canonical
}

bool canonical(const int* v, LatticeSymmetry sym) {
    switch (sym) {
    case LatticeSymmetry::none: return true;
    case LatticeSymmetry::global_sign: return block_canonical(v, 0, 8);
    case LatticeSymmetry::block_signs:
        return block_canonical(v, 0, 6) && block_canonical(v, 6, 8);
    }
    return true;
}

struct MinCell {
    double val = std::numeric_limits<double>::infinity();
    long long idx = -1;
    long long count = 0;

    void consider(double v, long long i) {
        ++count;
        if (v < val || (v == val && i < idx)) {
            val = v;
            idx = i;
        }
    }
    void merge(const MinCell& o) {
        count += o.count;
        if (o.idx < 0) return;
        if (o.val < val || (o.val == val && o.idx < idx)) {
            val = o.val;
            idx = o.idx;
        }
    }
};

DifferenceVector decode_lattice_index(long long idx, int levels, int spread) {
    DifferenceVector v{};
    for (int j = 7; j >= 0; --j) {
        v[size_t(j)] = 2 * int(idx % levels) - spread;
        idx /= levels;
    }
    return v;
}

} // namespace

ClosedFormParts closed_form_parts(const DifferenceVector& dx) {
    const long long d1 = dx[0], d2 = dx[1], d3 = dx[2], d4 = dx[3];
    const long long d5 = dx[4], d6 = dx[5], d7 = dx[6], d8 = dx[7];
    ClosedFormParts p;
    p.sigma1 = d1 * d1 + d2 * d2 + d3 * d3 + d4 * d4 + d5 * d5 + d6 * d6;
    p.sigma2 = d7 * d7 + d8 * d8;
    p.a = {d7 * d2 - d8 * d6, d7 * d6 + d8 * d2, d7 * d4 - d8 * d3,
           d7 * d3 + d8 * d4, d8 * d1 - d7 * d5, d7 * d1 + d8 * d5};
    long long sum_sq = 0;
    for (long long ai : p.a) sum_sq += ai * ai;
    p.b = 2 * (sum_sq - 2 * (p.a[0] * p.a[0] + p.a[1] * p.a[1] + p.a[2] * p.a[2]));
    p.discriminant = p.b * p.b - 4 * (p.sigma1 * p.sigma2) * (p.sigma1 * p.sigma2);
    return p;
}

double det_difference(const LinearDispersionCode& code, const DifferenceVector& dx) {
    require_lattice_code(code, "det_difference");
    if (is_flat4(code)) {
        const SparseSlots slots(code);
        DetEval ev(code, &slots);
        return ev(dx);
    }
    DetEval ev(code, nullptr);
    return ev(dx);
}

double det_closed_form(const DifferenceVector& dx, double phi) {
    const ClosedFormParts p = closed_form_parts(dx);
    const cplx u2 = std::polar(1.0, 2.0 * phi);
    const cplx u4 = u2 * u2;
    return std::abs(double(p.sigma1 * p.sigma1) + double(p.b) * u2 +
                    double(p.sigma2 * p.sigma2) * u4);
}

MinDetReport min_det_search(const LinearDispersionCode& code, int spread,
                            LatticeSymmetry symmetry, int threads) {
    if (spread != 2 && spread != 4 && spread != 6)
        throw std::invalid_argument(
            "min_det_search: spread must be 2, 4 or 6; larger lattices need the randomized "
            "sampler min_det_sample (CLI: --samples with --seed)");
    require_lattice_code(code, "min_det_search");

    const int levels = spread + 1;
    const long long outer_total = ipow(levels, 2);
    const SparseSlots slots(code);

    MinCell global;
#pragma omp parallel num_threads(resolve_threads(threads))
    {
        MinCell local;
        DetEval ev(code, &slots);
#pragma omp for schedule(static)
        for (long long outer = 0; outer < outer_total; ++outer) {
            int v[8];
            v[0] = 2 * int(outer / levels) - spread;
            v[1] = 2 * int(outer % levels) - spread;
            for (int d2 = 0; d2 < levels; ++d2) {
                v[2] = 2 * d2 - spread;
                for (int d3 = 0; d3 < levels; ++d3) {
                    v[3] = 2 * d3 - spread;
                    for (int d4 = 0; d4 < levels; ++d4) {
                        v[4] = 2 * d4 - spread;
                        for (int d5 = 0; d5 < levels; ++d5) {
                            v[5] = 2 * d5 - spread;
                            for (int d6 = 0; d6 < levels; ++d6) {
                                v[6] = 2 * d6 - spread;
                                for (int d7 = 0; d7 < levels; ++d7) {
                                    v[7] = 2 * d7 - spread;
                                    bool zero = true;
                                    for (int j = 0; j < 8; ++j)
                                        if (v[j] != 0) {
                                            zero = false;
                                            break;
                                        }
                                    if (zero || !canonical(v, symmetry)) continue;
                                    DifferenceVector dx;
                                    for (int j = 0; j < 8; ++j) dx[size_t(j)] = v[j];
                                    long long idx = outer;
                                    for (int j = 2; j < 8; ++j)
                                        idx = idx * levels + (v[j] + spread) / 2;
                                    local.consider(ev(dx), idx);
                                }
                            }
                        }
                    }
                }
            }
        }
#pragma omp critical
        global.merge(local);
    }

    MinDetReport rep;
    rep.min_abs_det = global.val;
    rep.argmin = decode_lattice_index(global.idx, levels, spread);
    rep.lattice_spread = spread;
    rep.count_examined = global.count;
    return rep;
}

MinDetReport min_det_sample(const LinearDispersionCode& code, int spread, long long samples,
                            uint64_t seed, int threads) {
    if (spread < 2 || spread % 2 != 0)
        throw std::invalid_argument("min_det_sample: spread must be a positive even integer");
    if (samples < 1) throw std::invalid_argument("min_det_sample: need at least one sample");
    require_lattice_code(code, "min_det_sample");

    const uint64_t levels = uint64_t(spread) + 1;
    const SparseSlots slots(code);

    MinCell global;
    DifferenceVector global_dx{};
#pragma omp parallel num_threads(resolve_threads(threads))
    {
        MinCell local;
        DifferenceVector local_dx{};
        DetEval ev(code, &slots);
#pragma omp for schedule(static)
        for (long long s = 0; s < samples; ++s) {
            Rng g = Rng::from_stream(seed, uint64_t(s));
            DifferenceVector dx;
            bool zero = true;
            for (int j = 0; j < 8; ++j) {
                dx[size_t(j)] = 2 * int(g.uniform_below(levels)) - spread;
                if (dx[size_t(j)] != 0) zero = false;
            }
            if (zero) continue;
            const double d = ev(dx);
            const long long before = local.idx;
            local.consider(d, s);
            if (local.idx != before) local_dx = dx;
        }
#pragma omp critical
        {
            const long long before = global.idx;
            global.merge(local);
            if (global.idx != before && global.idx == local.idx) global_dx = local_dx;
        }
    }

    MinDetReport rep;
    rep.min_abs_det = global.val;
    rep.argmin = global_dx;
    rep.lattice_spread = spread;
    rep.count_examined = global.count;
    return rep;
}

PaprReport papr(const LinearDispersionCode& code, const Constellation& c) {
    double peak = -1.0;
    double avg = -1.0;
    for (int r = 0; r < code.t; ++r) {
        for (int col = 0; col < code.nt; ++col) {
            struct Term {
                int q;
                cplx w;
            };
            std::vector<Term> terms;
            for (int q = 0; q < 2 * code.k; ++q) {
                const cplx w = code.betas[size_t(q)](r, col);
                if (std::abs(w) > 1e-14) terms.push_back({q, w});
            }
            const std::string slot =
                "slot (" + std::to_string(r + 1) + "," + std::to_string(col + 1) + ")";
            if (terms.size() != 2)
                throw std::invalid_argument("papr: " + slot +
                                            " does not carry exactly one complex symbol");
            if (terms[0].q / 2 != terms[1].q / 2)
                throw std::invalid_argument("papr: " + slot +
                                            " mixes different complex symbols");
            if (std::abs(std::abs(terms[0].w) - 1.0) > 1e-9 ||
                std::abs(std::abs(terms[1].w) - 1.0) > 1e-9)
                throw std::invalid_argument("papr: " + slot + " weights are not unit modulus");
            if (std::abs((terms[0].w * std::conj(terms[1].w)).real()) > 1e-9)
                throw std::invalid_argument("papr: " + slot + " weights are not phase-orthogonal");

            double speak = 0.0;
            double ssum = 0.0;
            for (double xa : c.pam)
                for (double xb : c.pam) {
                    const double e = std::norm(xa * terms[0].w + xb * terms[1].w);
                    speak = std::max(speak, e);
                    ssum += e;
                }
            const double savg = ssum / double(c.m);
            if (peak < 0.0) {
                peak = speak;
                avg = savg;
            } else if (std::abs(speak - peak) > 1e-9 * peak || std::abs(savg - avg) > 1e-9 * avg) {
                throw std::invalid_argument("papr: " + slot +
                                            " breaks the per-antenna power symmetry");
            }
        }
    }
    PaprReport rep;
    rep.papr_db = 10.0 * std::log10(peak / avg);
    rep.constellation_m = c.m;
    rep.peak_energy = peak;
    rep.avg_energy = avg;
    return rep;
}

namespace {

struct CaseCheck {
    bool ok = true;
    bool sigma_equal = false;
    bool tight_difference = false;
    double det_closed = 0.0;
    double det_direct = 0.0;
};

CaseCheck check_case(const ClosedFormParts& p, const DifferenceVector& dx, DetEval& ev,
                     cplx u2, cplx u4) {
    CaseCheck r;
    long long sum_sq = 0;
    for (long long ai : p.a) sum_sq += ai * ai;

    r.det_closed = std::abs(double(p.sigma1 * p.sigma1) + double(p.b) * u2 +
                            double(p.sigma2 * p.sigma2) * u4);
    r.det_direct = ev(dx);

    // exact integer identities
    if (sum_sq != p.sigma1 * p.sigma2) r.ok = false;
    for (long long ai : p.a)
        if (((ai % 4) + 4) % 4 != 0) r.ok = false;
    if (p.discriminant > 0) r.ok = false;

    // closed form must reproduce the direct determinant
    if (std::abs(r.det_closed - r.det_direct) > 1e-8 * std::max(1.0, r.det_direct)) r.ok = false;

    // both roots of sigma2^2 y^2 + b y + sigma1^2 have modulus sigma1/sigma2
    if (p.sigma2 != 0) {
        const double s2sq = double(p.sigma2 * p.sigma2);
        const cplx root =
            (-double(p.b) + std::sqrt(cplx(double(p.discriminant), 0.0))) / (2.0 * s2sq);
        const double want = double(p.sigma1) / double(p.sigma2);
        if (std::abs(std::abs(root) - want) > 1e-10 * std::max(1.0, want)) r.ok = false;
    }

    if (p.sigma1 != p.sigma2) {
        const long long gap2 = (p.sigma2 - p.sigma1) * (p.sigma2 - p.sigma1);
        r.tight_difference = gap2 == 16;
        if (gap2 < 16) r.ok = false;
        if (r.det_closed < double(gap2) - 1e-6 * std::max(1.0, double(gap2))) r.ok = false;
        if (r.det_closed < 16.0 - 1e-6) r.ok = false;
    } else {
        r.sigma_equal = true;
        // integer form of the determinant floor at cos(2 phi) = 1/5
        if (std::llabs(2 * p.sigma1 * p.sigma1 + 5 * p.b) < 80) r.ok = false;
        if (r.det_closed < 16.0 - 1e-6) r.ok = false;
    }
    return r;
}

} // namespace

NvdReport verify_nvd(int bound, double phi, int gap_bound, int threads) {
    if (bound != 2 && bound != 4 && bound != 6)
        throw std::invalid_argument("verify_nvd: bound must be 2, 4 or 6");
    if (gap_bound < 1) throw std::invalid_argument("verify_nvd: gap_bound must be positive");

    NvdReport rep;
    rep.bound = bound;
    rep.phi = phi;
    rep.gap_bound = gap_bound;

    const LinearDispersionCode code = make_proposed_code(phi);
    const SparseSlots slots(code);
    const cplx u2 = std::polar(1.0, 2.0 * phi);
    const cplx u4 = u2 * u2;

    const int levels = bound + 1;
    const long long total = ipow(levels, 8);

    long long cases = 0, sigma_eq = 0, tight = 0, viol_total = 0;
    double min_det = std::numeric_limits<double>::infinity();
    std::vector<NvdCaseRecord> violations;

#pragma omp parallel num_threads(resolve_threads(threads))
    {
        long long l_cases = 0, l_sigma_eq = 0, l_tight = 0, l_viol = 0;
        double l_min = std::numeric_limits<double>::infinity();
        std::vector<NvdCaseRecord> l_violations;
        DetEval ev(code, &slots);
#pragma omp for schedule(static)
        for (long long idx = 0; idx < total; ++idx) {
            const DifferenceVector dx = decode_lattice_index(idx, levels, bound);
            bool zero = true;
            for (int v : dx)
                if (v != 0) {
                    zero = false;
                    break;
                }
            if (zero) continue;
            const ClosedFormParts p = closed_form_parts(dx);
            const CaseCheck c = check_case(p, dx, ev, u2, u4);
            ++l_cases;
            if (c.sigma_equal) ++l_sigma_eq;
            if (c.tight_difference) ++l_tight;
            l_min = std::min(l_min, c.det_closed);
            if (!c.ok) {
                ++l_viol;
                if (l_violations.size() < 16)
                    l_violations.push_back({dx, p, c.det_closed, c.det_direct});
            }
        }
#pragma omp critical
        {
            cases += l_cases;
            sigma_eq += l_sigma_eq;
            tight += l_tight;
            viol_total += l_viol;
            min_det = std::min(min_det, l_min);
            violations.insert(violations.end(), l_violations.begin(), l_violations.end());
        }
    }

    std::sort(violations.begin(), violations.end(),
              [](const NvdCaseRecord& a, const NvdCaseRecord& b) { return a.dx < b.dx; });
    if (violations.size() > 16) violations.resize(16);

    rep.lattice_cases = cases;
    rep.sigma_equal_cases = sigma_eq;
    rep.tight_difference_cases = tight;
    rep.min_det = min_det;
    rep.violations_total = viol_total;
    rep.violations = std::move(violations);

    // quadratic gap and residue scan
    const int g = gap_bound;
    long long gap_min = std::numeric_limits<long long>::max();
    long long bad_residue = 0, gap_violations = 0, tuples = 0;
#pragma omp parallel num_threads(resolve_threads(threads))
    {
        long long t_min = std::numeric_limits<long long>::max();
        long long t_bad = 0, t_viol = 0, t_tuples = 0;
#pragma omp for collapse(2) schedule(static)
        for (int x1 = -g; x1 <= g; ++x1) {
            for (int x2 = -g; x2 <= g; ++x2) {
                for (int x3 = -g; x3 <= g; ++x3) {
                    for (int x4 = -g; x4 <= g; ++x4) {
                        if (x1 == 0 && x2 == 0 && x3 == 0 && x4 == 0) continue;
                        ++t_tuples;
                        const long long q1 = 3LL * x1 * x1;
                        const long long gap =
                            std::llabs(q1 - 5LL * (1LL * x2 * x2 + 1LL * x3 * x3 + 1LL * x4 * x4));
                        t_min = std::min(t_min, gap);
                        if (gap < 2) ++t_viol;
                        const long long r5 = q1 % 5;
                        if (r5 != 0 && r5 != 2 && r5 != 3) ++t_bad;
                    }
                }
            }
        }
#pragma omp critical
        {
            gap_min = std::min(gap_min, t_min);
            bad_residue += t_bad;
            gap_violations += t_viol;
            tuples += t_tuples;
        }
    }

    rep.gap_tuples = tuples;
    rep.gap_min = gap_min;
    rep.residues_ok = bad_residue == 0;
    rep.pass = rep.violations_total == 0 && gap_violations == 0 && rep.residues_ok &&
               rep.gap_min >= 2 && rep.min_det >= 16.0 - 1e-6;
    return rep;
}

void write_nvd_records_csv(std::ostream& os, int bound, double phi) {
    if (bound != 2 && bound != 4)
        throw std::invalid_argument("write_nvd_records_csv: record dumps support bound 2 or 4");
    const LinearDispersionCode code = make_proposed_code(phi);
    const SparseSlots slots(code);
    DetEval ev(code, &slots);
    const cplx u2 = std::polar(1.0, 2.0 * phi);
    const cplx u4 = u2 * u2;

    os << "dx1,dx2,dx3,dx4,dx5,dx6,dx7,dx8,sigma1,sigma2,a1,a2,a3,a4,a5,a6,b,discriminant,"
          "det_closed,det_direct\n";
    const int levels = bound + 1;
    const long long total = ipow(levels, 8);
    for (long long idx = 0; idx < total; ++idx) {
        const DifferenceVector dx = decode_lattice_index(idx, levels, bound);
        bool zero = true;
        for (int v : dx)
            if (v != 0) {
                zero = false;
                break;
            }
        if (zero) continue;
        const ClosedFormParts p = closed_form_parts(dx);
        const double dc = std::abs(double(p.sigma1 * p.sigma1) + double(p.b) * u2 +
                                   double(p.sigma2 * p.sigma2) * u4);
        const double dd = ev(dx);
        for (int v : dx) os << v << ',';
        os << p.sigma1 << ',' << p.sigma2 << ',';
        for (long long ai : p.a) os << ai << ',';
        os << p.b << ',' << p.discriminant << ',' << format_double(dc) << ','
           << format_double(dd) << '\n';
    }
}

namespace {

// (sigma1, sigma2, b) determines |det| for the 4x4 code, so sweeping phi
// only needs the distinct triples of the lattice, not the vectors.
std::vector<std::array<long long, 3>> lattice_triples(int spread) {
    const int levels = spread + 1;
    const long long total = ipow(levels, 8);
    std::vector<std::array<long long, 3>> triples;
    for (long long idx = 0; idx < total; ++idx) {
        const DifferenceVector dx = decode_lattice_index(idx, levels, spread);
        int v[8];
        bool zero = true;
        for (int j = 0; j < 8; ++j) {
            v[j] = dx[size_t(j)];
            if (v[j] != 0) zero = false;
        }
        if (zero || !canonical(v, LatticeSymmetry::block_signs)) continue;
        const ClosedFormParts p = closed_form_parts(dx);
        triples.push_back({p.sigma1, p.sigma2, p.b});
    }
    std::sort(triples.begin(), triples.end());
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
    return triples;
}

double eval_triple(const std::array<long long, 3>& t, cplx u2, cplx u4) {
    return std::abs(double(t[0] * t[0]) + double(t[2]) * u2 + double(t[1] * t[1]) * u4);
}

// smallest value and the smallest value strictly above it
std::pair<double, double> min2_triples(const std::vector<std::array<long long, 3>>& triples,
                                       double phi) {
    const cplx u2 = std::polar(1.0, 2.0 * phi);
    const cplx u4 = u2 * u2;
    double m1 = std::numeric_limits<double>::infinity();
    for (const auto& t : triples) m1 = std::min(m1, eval_triple(t, u2, u4));
    const double cutoff = m1 * (1.0 + 1e-9);
    double m2 = std::numeric_limits<double>::infinity();
    for (const auto& t : triples) {
        const double v = eval_triple(t, u2, u4);
        if (v > cutoff) m2 = std::min(m2, v);
    }
    return {m1, m2};
}

} // namespace

PhiSweepResult phi_sweep(int grid_points, int spread, int threads) {
    if (grid_points < 8) throw std::invalid_argument("phi_sweep: need at least 8 grid points");
    if (spread != 2 && spread != 4)
        throw std::invalid_argument("phi_sweep: spread must be 2 or 4");

    PhiSweepResult res;
    res.spread = spread;
    res.refine_spread = spread + 2;
    res.curve.resize(size_t(grid_points));

    const auto triples = lattice_triples(spread);
    const double step = (std::numbers::pi / 2.0) / double(grid_points - 1);

#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
    for (int i = 0; i < grid_points; ++i) {
        const double phi = double(i) * step;
        const auto [m1, m2] = min2_triples(triples, phi);
        res.curve[size_t(i)] = {phi, m1, m2};
    }

    double best = -1.0;
    for (const PhiSweepPoint& p : res.curve) best = std::max(best, p.min_det);
    std::vector<int> tied;
    for (int i = 0; i < grid_points; ++i)
        if (res.curve[size_t(i)].min_det >= best * (1.0 - 1e-9)) tied.push_back(i);
    res.plateau_points = static_cast<long long>(tied.size());

    if (tied.size() > 1) {
        // the worst-case determinant must also survive the next lattice
        const auto refine = lattice_triples(spread + 2);
        std::vector<std::pair<double, double>> rm(tied.size());
#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
        for (size_t j = 0; j < tied.size(); ++j)
            rm[j] = min2_triples(refine, res.curve[size_t(tied[j])].phi);

        double rbest = -1.0;
        for (const auto& [m1, m2] : rm) rbest = std::max(rbest, m1);
        std::vector<int> tied2;
        std::vector<double> margins;
        for (size_t j = 0; j < tied.size(); ++j)
            if (rm[j].first >= rbest * (1.0 - 1e-9)) {
                tied2.push_back(tied[j]);
                margins.push_back(rm[j].second);
            }
        res.refined_points = static_cast<long long>(tied2.size());

        // then take the phi with the widest gap to the second determinant
        // level; near-equal gaps (mirror images) resolve to the smaller phi
        double mbest = -1.0;
        for (double m : margins) mbest = std::max(mbest, m);
        int pick = -1;
        for (size_t j = 0; j < tied2.size(); ++j)
            if (margins[j] >= mbest * (1.0 - 1e-2)) {
                pick = tied2[j];
                break;
            }
        res.best_index = pick;
    } else {
        res.best_index = tied.empty() ? 0 : tied.front();
        res.refined_points = res.plateau_points;
    }

    res.best_phi = res.curve[size_t(res.best_index)].phi;
    res.best_min_det = res.curve[size_t(res.best_index)].min_det;
    return res;
}

void write_min_det_csv(std::ostream& os, const MinDetReport& r) {
    os << "min_abs_det,dx1,dx2,dx3,dx4,dx5,dx6,dx7,dx8,lattice_spread,count_examined\n";
    os << format_double(r.min_abs_det);
    for (int v : r.argmin) os << ',' << v;
    os << ',' << r.lattice_spread << ',' << r.count_examined << '\n';
}

void write_phi_sweep_csv(std::ostream& os, const PhiSweepResult& r) {
    os << "phi,min_det,second_det\n";
    for (const PhiSweepPoint& p : r.curve)
        os << format_double(p.phi) << ',' << format_double(p.min_det) << ','
           << format_double(p.second_det) << '\n';
}

void write_nvd_summary_csv(std::ostream& os, const NvdReport& r) {
    os << "bound,phi,gap_bound,lattice_cases,sigma_equal_cases,tight_difference_cases,min_det,"
          "gap_tuples,gap_min,residues_ok,violations_total,pass\n";
    os << r.bound << ',' << format_double(r.phi) << ',' << r.gap_bound << ',' << r.lattice_cases
       << ',' << r.sigma_equal_cases << ',' << r.tight_difference_cases << ','
       << format_double(r.min_det) << ',' << r.gap_tuples << ',' << r.gap_min << ','
       << (r.residues_ok ? 1 : 0) << ',' << r.violations_total << ',' << (r.pass ? 1 : 0)
       << '\n';
}

} // namespace stbc
