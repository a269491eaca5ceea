#include "stbc/code.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace stbc {

Constellation qam_constellation(int m) {
    int root = 0;
    switch (m) {
    case 4: root = 2; break;
    case 16: root = 4; break;
    case 64: root = 8; break;
    case 256: root = 16; break;
    default:
        throw std::invalid_argument("qam_constellation: m must be 4, 16, 64 or 256, got " +
                                    std::to_string(m));
    }
    Constellation c;
    c.m = m;
    c.sqrt_m = root;
    c.pam.reserve(root);
    for (int l = -(root - 1); l <= root - 1; l += 2) c.pam.push_back(double(l));
    c.avg_energy = 2.0 * (root - 1.0) * (root + 1.0) / 3.0;
    return c;
}

double proposed_phi() { return 0.5 * std::acos(0.2); }

LinearDispersionCode make_proposed_code(double phi) {
    const cplx j{0.0, 1.0};
    const cplx u = std::polar(1.0, phi);

    LinearDispersionCode code;
    code.t = 4;
    code.nt = 4;
    code.k = 4;
    code.phi = phi;
    code.betas.assign(8, CMatrix(4, 4));
    auto& b = code.betas;

    b[0] = CMatrix::identity(4);

    b[1](0, 0) = j;
    b[1](1, 1) = -j;
    b[1](2, 2) = -j;
    b[1](3, 3) = j;

    b[2](0, 1) = 1.0;
    b[2](1, 0) = -1.0;
    b[2](2, 3) = 1.0;
    b[2](3, 2) = -1.0;

    b[3](0, 1) = j;
    b[3](1, 0) = j;
    b[3](2, 3) = j;
    b[3](3, 2) = j;

    b[4](0, 2) = 1.0;
    b[4](1, 3) = -1.0;
    b[4](2, 0) = -1.0;
    b[4](3, 1) = 1.0;

    b[5](0, 2) = j;
    b[5](1, 3) = -j;
    b[5](2, 0) = j;
    b[5](3, 1) = -j;

    b[6](0, 3) = -u;
    b[6](1, 2) = -u;
    b[6](2, 1) = u;
    b[6](3, 0) = u;

    b[7](0, 3) = -j * u;
    b[7](1, 2) = j * u;
    b[7](2, 1) = j * u;
    b[7](3, 0) = -j * u;

    return code;
}

LinearDispersionCode make_proposed_code() { return make_proposed_code(proposed_phi()); }

CMatrix assemble_codeword(const LinearDispersionCode& code, const std::vector<double>& x) {
    if (int(x.size()) != 2 * code.k)
        throw std::invalid_argument("assemble_codeword: expected " + std::to_string(2 * code.k) +
                                    " real symbols, got " + std::to_string(x.size()));
    CMatrix m(code.t, code.nt);
    for (int q = 0; q < 2 * code.k; ++q) m.axpy(x[size_t(q)], code.betas[size_t(q)]);
    return m;
}

double hurwitz_radon_residual(const LinearDispersionCode& code, int i, int j) {
    const int n = 2 * code.k;
    if (i < 1 || i > n || j < 1 || j > n)
        throw std::invalid_argument("hurwitz_radon_residual: index out of range");
    const CMatrix& bi = code.betas[size_t(i - 1)];
    const CMatrix& bj = code.betas[size_t(j - 1)];
    CMatrix s = bi.adjoint() * bj + bj.adjoint() * bi;
    if (i == j) s.axpy(-2.0, CMatrix::identity(s.rows()));
    return s.max_abs();
}

std::vector<std::pair<int, int>> hurwitz_radon_violations(const LinearDispersionCode& code,
                                                          double tol) {
    std::vector<std::pair<int, int>> bad;
    const int n = 2 * code.k;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j)
            if (hurwitz_radon_residual(code, i, j) > tol) bad.emplace_back(i, j);
    return bad;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_code(std::ostream& os, const LinearDispersionCode& code) {
    os << code.t << ' ' << code.nt << ' ' << code.k << ' ' << format_double(code.phi) << '\n';
    for (int q = 0; q < 2 * code.k; ++q) {
        const CMatrix& b = code.betas[size_t(q)];
        for (int r = 0; r < b.rows(); ++r) {
            for (int c = 0; c < b.cols(); ++c) {
                if (c) os << ' ';
                os << '(' << format_double(b(r, c).real()) << ',' << format_double(b(r, c).imag())
                   << ')';
            }
            os << '\n';
        }
        os << '\n';
    }
}

LinearDispersionCode read_code(std::istream& is) {
    LinearDispersionCode code;
    if (!(is >> code.t >> code.nt >> code.k >> code.phi))
        throw std::invalid_argument("read_code: bad header, expected 'T NT K PHI'");
    if (code.t < 1 || code.nt < 1 || code.k < 1 || code.t > 64 || code.nt > 64 || code.k > 64)
        throw std::invalid_argument("read_code: unreasonable dimensions in header");
    code.betas.assign(size_t(2 * code.k), CMatrix(code.t, code.nt));
    for (int q = 0; q < 2 * code.k; ++q)
        for (int r = 0; r < code.t; ++r)
            for (int c = 0; c < code.nt; ++c)
                if (!(is >> code.betas[size_t(q)](r, c)))
                    throw std::invalid_argument("read_code: truncated matrix " +
                                                std::to_string(q + 1));
    return code;
}

void write_code_file(const std::string& path, const LinearDispersionCode& code) {
    std::ofstream f(path);
    if (!f) throw std::invalid_argument("write_code_file: cannot open " + path);
    write_code(f, code);
}

LinearDispersionCode read_code_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("read_code_file: cannot open " + path);
    return read_code(f);
}

} // namespace stbc
