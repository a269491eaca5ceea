#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "stbc/cmatrix.hpp"

namespace stbc {

// Square QAM treated as two independent odd-integer PAM dimensions.
// Levels are unnormalized: {-(sqrt(m)-1), ..., -1, +1, ..., +(sqrt(m)-1)}.
struct Constellation {
    int m = 0;               // QAM order
    int sqrt_m = 0;          // PAM levels per real dimension
    std::vector<double> pam; // ascending levels
    double avg_energy = 0.0; // mean complex-symbol energy 2*(m'-1)*(m'+1)/3
};

// m must be one of {4, 16, 64, 256}.
Constellation qam_constellation(int m);

// Linear dispersion block code: X(x) = sum_q x_q * beta_q with real x_q.
// betas holds 2k matrices of shape t x nt.
struct LinearDispersionCode {
    int t = 0;
    int nt = 0;
    int k = 0;
    double phi = 0.0; // rotation angle used by the last weight-matrix pair
    std::vector<CMatrix> betas;
};

// Rotation angle that maximizes the worst-case determinant of the 4x4 code:
// phi = acos(1/5) / 2.
double proposed_phi();

// The rate-1 4x4 code (t = nt = 4, k = 4). x1..x6 ride a rate-3/4
// orthogonal design; x7, x8 enter through the factor e^{j*phi}.
LinearDispersionCode make_proposed_code(double phi);
LinearDispersionCode make_proposed_code();

// X = sum_q x[q] * beta_q; x.size() must equal 2k.
CMatrix assemble_codeword(const LinearDispersionCode& code,
                          const std::vector<double>& x);

// Max-abs entry of beta_i^H beta_j + beta_j^H beta_i - 2*delta_ij*I.
// Indices are 1-based to match the usual numbering of the weights.
double hurwitz_radon_residual(const LinearDispersionCode& code, int i, int j);

// All 1-based pairs (i, j), i <= j, whose residual exceeds tol.
std::vector<std::pair<int, int>>
hurwitz_radon_violations(const LinearDispersionCode& code, double tol = 1e-12);

// Text round-trip. Header line "T NT K PHI", then 2k matrices, one row per
// line, entries as "(re,im)", blank line between matrices.
void write_code(std::ostream& os, const LinearDispersionCode& code);
LinearDispersionCode read_code(std::istream& is);
void write_code_file(const std::string& path, const LinearDispersionCode& code);
LinearDispersionCode read_code_file(const std::string& path);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

} // namespace stbc
