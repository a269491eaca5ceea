#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stbc/code.hpp"
#include "stbc/rng.hpp"

namespace stbc {

enum class DecoderKind { conditional, exhaustive };

struct SimConfig {
    int m = 4;
    int nr = 1;
    std::vector<double> snr_db_list;
    long long max_trials = 1000000;
    long long target_errors = 200;
    uint64_t master_seed = 1;
    DecoderKind decoder = DecoderKind::conditional;
    int threads = 0;  // 0 = all available
};

// Throws std::invalid_argument on out-of-range fields; snr_db_list must be
// nonempty and strictly increasing.
void validate(const SimConfig& cfg);

// Per-channel-use SNR with nt symbols sent per use at average energy Es:
// N0 = nt * Es / 10^(snr_db/10). +inf maps to exactly 0 (noiseless).
double snr_to_n0(double snr_db, const Constellation& c, int nt);

struct CerPoint {
    double snr_db = 0.0;
    long long trials = 0;
    long long errors = 0;
    double cer = 0.0;
    uint64_t metric_evals_total = 0;
};

// Monte Carlo codeword error rate over quasi-static Rayleigh fading, one
// independent channel per codeword. Trials advance in chunks of 4096; a
// point stops at the first chunk boundary with at least target_errors
// errors, else at max_trials. Every trial derives its channel, symbol and
// noise streams from (master_seed, point, trial), so the output is
// byte-identical for any thread count.
std::vector<CerPoint> run_cer(const LinearDispersionCode& code, const SimConfig& cfg);
std::vector<CerPoint> run_cer(const SimConfig& cfg);

void write_cer_csv(std::ostream& os, const std::vector<CerPoint>& points);

// Text config: one `key = value` per line, '#' starts a comment. Keys are
// the SimConfig field names; snr_db_list is comma-separated (inf allowed);
// decoder is conditional|exhaustive. Unknown keys throw.
SimConfig parse_sim_config(std::istream& is);
SimConfig parse_sim_config_file(const std::string& path);

// n i.i.d. uniform PAM levels.
std::vector<double> draw_symbol_vector(const Constellation& c, int n, Rng& rng);

struct AgreementReport {
    long long trials = 0;
    long long ties = 0;            // exhaustive top two metrics within 1e-9
    long long disagreements = 0;   // among non-tie trials
    double agreement_rate = 0.0;   // over non-tie trials
    bool evals_ok = false;         // conditional spent M, exhaustive M^K, every trial
};

// Runs both decoders on identical noisy receptions with the exhaustive
// search as ground truth. Tie trials are excluded from the agreement rate.
// n0 cycles through n0_list; streams derive from (seed, trial).
AgreementReport decode_agreement(const LinearDispersionCode& code, int m, int nr,
                                 long long trials, const std::vector<double>& n0_list,
                                 uint64_t seed, int threads = 0);

} // namespace stbc
