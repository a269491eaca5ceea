#include "stbc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <omp.h>

#include "stbc/channel.hpp"
#include "stbc/detect.hpp"

namespace stbc {

namespace {

constexpr long long kChunk = 4096;

int resolve_threads(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

void draw_symbols(const Constellation& c, int n, Rng& rng, std::vector<double>& out) {
    out.resize(size_t(n));
    for (int i = 0; i < n; ++i) out[size_t(i)] = c.pam[rng.next_index(c.pam.size())];
}

struct TrialScratch {
    ChannelRealization h;
    EquivalentChannel ec;
    std::vector<double> x;
    CVec r;
    DecodeScratch ws;
};

// r = Hcal x; identical to vec(X H) for this linear model and cheaper since
// the decoder needs Hcal anyway.
void received_mean(const CMatrix& hcal, const std::vector<double>& x, CVec& r) {
    const int n = hcal.rows();
    const int k = hcal.cols();
    r.assign(size_t(n), cplx(0.0));
    for (int q = 0; q < k; ++q) {
        const double xq = x[size_t(q)];
        for (int i = 0; i < n; ++i) r[size_t(i)] += xq * hcal(i, q);
    }
}

// One fading block: returns true on codeword error, accumulates decoder work.
bool run_trial(const LinearDispersionCode& code, const Constellation& c, int nr, double n0,
               Rng gh, Rng gs, Rng gn, DecoderKind kind, TrialScratch& ts, uint64_t& evals) {
    sample_rayleigh(code.nt, nr, gh, ts.h);
    equivalent_channel(code, ts.h.h, ts.ec);
    draw_symbols(c, 2 * code.k, gs, ts.x);
    received_mean(ts.ec.hcal, ts.x, ts.r);
    add_awgn(ts.r, n0, gn);
    const DecodeResult dr = kind == DecoderKind::conditional
                                ? conditional_ml_decode(ts.ec, ts.r, c, ts.ws)
                                : exhaustive_ml_decode(ts.ec, ts.r, c, ts.ws);
    evals += dr.metric_evals;
    return dr.s_hat != ts.x;
}

} // namespace

void validate(const SimConfig& cfg) {
    qam_constellation(cfg.m);  // throws on unsupported m
    if (cfg.nr < 1) throw std::invalid_argument("sim config: nr must be at least 1");
    if (cfg.snr_db_list.empty())
        throw std::invalid_argument("sim config: snr_db_list must not be empty");
    for (size_t i = 1; i < cfg.snr_db_list.size(); ++i)
        if (!(cfg.snr_db_list[i - 1] < cfg.snr_db_list[i]))
            throw std::invalid_argument("sim config: snr_db_list must be strictly increasing");
    if (cfg.target_errors < 1)
        throw std::invalid_argument("sim config: target_errors must be at least 1");
    if (cfg.max_trials < cfg.target_errors)
        throw std::invalid_argument("sim config: max_trials must be at least target_errors");
}

double snr_to_n0(double snr_db, const Constellation& c, int nt) {
    if (std::isinf(snr_db) && snr_db > 0.0) return 0.0;
    return double(nt) * c.avg_energy / std::pow(10.0, snr_db / 10.0);
}

std::vector<CerPoint> run_cer(const LinearDispersionCode& code, const SimConfig& cfg) {
    validate(cfg);
    const Constellation c = qam_constellation(cfg.m);
    const int nthreads = resolve_threads(cfg.threads);

    std::vector<CerPoint> out;
    out.reserve(cfg.snr_db_list.size());
    for (size_t p = 0; p < cfg.snr_db_list.size(); ++p) {
        const double n0 = snr_to_n0(cfg.snr_db_list[p], c, code.nt);
        long long done = 0;
        long long errors = 0;
        uint64_t evals = 0;
        while (done < cfg.max_trials) {
            const long long end = std::min(cfg.max_trials, done + kChunk);
            long long chunk_err = 0;
            uint64_t chunk_ev = 0;
#pragma omp parallel num_threads(nthreads)
            {
                TrialScratch ts;
                long long t_err = 0;
                uint64_t t_ev = 0;
#pragma omp for schedule(static)
                for (long long t = done; t < end; ++t) {
                    if (run_trial(code, c, cfg.nr, n0,
                                  Rng::from_stream(cfg.master_seed, p, uint64_t(t), 0),
                                  Rng::from_stream(cfg.master_seed, p, uint64_t(t), 1),
                                  Rng::from_stream(cfg.master_seed, p, uint64_t(t), 2),
                                  cfg.decoder, ts, t_ev))
                        ++t_err;
                }
#pragma omp critical
                {
                    chunk_err += t_err;
                    chunk_ev += t_ev;
                }
            }
            errors += chunk_err;
            evals += chunk_ev;
            done = end;
            if (errors >= cfg.target_errors) break;
        }
        out.push_back({cfg.snr_db_list[p], done, errors, double(errors) / double(done), evals});
    }
    return out;
}

std::vector<CerPoint> run_cer(const SimConfig& cfg) {
    return run_cer(make_proposed_code(), cfg);
}

void write_cer_csv(std::ostream& os, const std::vector<CerPoint>& points) {
    os << "snr_db,trials,errors,cer,metric_evals_total\n";
    for (const CerPoint& p : points)
        os << format_double(p.snr_db) << ',' << p.trials << ',' << p.errors << ','
           << format_double(p.cer) << ',' << p.metric_evals_total << '\n';
}

namespace {

std::string trimmed(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

SimConfig parse_sim_config(std::istream& is) {
    SimConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trimmed(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("sim config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trimmed(line.substr(0, eq));
        const std::string val = trimmed(line.substr(eq + 1));
        try {
            if (key == "m") {
                cfg.m = std::stoi(val);
            } else if (key == "nr") {
                cfg.nr = std::stoi(val);
            } else if (key == "max_trials") {
                cfg.max_trials = std::stoll(val);
            } else if (key == "target_errors") {
                cfg.target_errors = std::stoll(val);
            } else if (key == "master_seed") {
                cfg.master_seed = std::stoull(val);
            } else if (key == "threads") {
                cfg.threads = std::stoi(val);
            } else if (key == "decoder") {
                if (val == "conditional")
                    cfg.decoder = DecoderKind::conditional;
                else if (val == "exhaustive")
                    cfg.decoder = DecoderKind::exhaustive;
                else
                    throw std::invalid_argument("decoder must be conditional or exhaustive");
            } else if (key == "snr_db_list") {
                cfg.snr_db_list.clear();
                size_t pos = 0;
                while (pos <= val.size()) {
                    auto comma = val.find(',', pos);
                    if (comma == std::string::npos) comma = val.size();
                    const std::string tok = trimmed(val.substr(pos, comma - pos));
                    if (tok.empty()) throw std::invalid_argument("empty snr entry");
                    cfg.snr_db_list.push_back(std::stod(tok));
                    pos = comma + 1;
                }
            } else {
                throw std::invalid_argument("sim config line " + std::to_string(lineno) +
                                            ": unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument("sim config line " + std::to_string(lineno) +
                                        ": bad value for '" + key + "'");
        }
    }
    return cfg;
}

SimConfig parse_sim_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open sim config: " + path);
    return parse_sim_config(is);
}

std::vector<double> draw_symbol_vector(const Constellation& c, int n, Rng& rng) {
    std::vector<double> x;
    draw_symbols(c, n, rng, x);
    return x;
}

AgreementReport decode_agreement(const LinearDispersionCode& code, int m, int nr,
                                 long long trials, const std::vector<double>& n0_list,
                                 uint64_t seed, int threads) {
    if (trials < 1) throw std::invalid_argument("decode_agreement: need at least one trial");
    if (n0_list.empty()) throw std::invalid_argument("decode_agreement: n0_list is empty");
    const Constellation c = qam_constellation(m);
    uint64_t want_exh = 1;
    for (int i = 0; i < code.k; ++i) want_exh *= uint64_t(c.m);
    const uint64_t want_cond = uint64_t(c.m);

    long long ties = 0, disagreements = 0, eval_breaks = 0;
#pragma omp parallel num_threads(resolve_threads(threads))
    {
        TrialScratch ts;
        long long l_ties = 0, l_dis = 0, l_breaks = 0;
#pragma omp for schedule(static)
        for (long long t = 0; t < trials; ++t) {
            const double n0 = n0_list[size_t(t) % n0_list.size()];
            Rng gh = Rng::from_stream(seed, uint64_t(t), 0);
            Rng gs = Rng::from_stream(seed, uint64_t(t), 1);
            Rng gn = Rng::from_stream(seed, uint64_t(t), 2);
            sample_rayleigh(code.nt, nr, gh, ts.h);
            equivalent_channel(code, ts.h.h, ts.ec);
            draw_symbols(c, 2 * code.k, gs, ts.x);
            received_mean(ts.ec.hcal, ts.x, ts.r);
            add_awgn(ts.r, n0, gn);
            const DecodeResult dc = conditional_ml_decode(ts.ec, ts.r, c, ts.ws);
            const DecodeResult de = exhaustive_ml_decode(ts.ec, ts.r, c, ts.ws);
            if (dc.metric_evals != want_cond || de.metric_evals != want_exh) ++l_breaks;
            if (de.runner_up - de.metric <= 1e-9)
                ++l_ties;
            else if (dc.s_hat != de.s_hat)
                ++l_dis;
        }
#pragma omp critical
        {
            ties += l_ties;
            disagreements += l_dis;
            eval_breaks += l_breaks;
        }
    }

    AgreementReport rep;
    rep.trials = trials;
    rep.ties = ties;
    rep.disagreements = disagreements;
    const long long decisive = trials - ties;
    rep.agreement_rate = decisive > 0 ? double(decisive - disagreements) / double(decisive) : 1.0;
    rep.evals_ok = eval_breaks == 0;
    return rep;
}

} // namespace stbc
