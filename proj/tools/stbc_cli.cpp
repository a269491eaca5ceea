// Command line front end for the 4x4 rate-1 space-time block code library.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stbc/analysis.hpp"
#include "stbc/code.hpp"
#include "stbc/sim.hpp"

namespace {

std::vector<double> split_doubles(const std::string& s) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        auto comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        const std::string tok = s.substr(pos, comma - pos);
        if (tok.empty()) throw std::invalid_argument("empty entry in list: " + s);
        out.push_back(std::stod(tok));
        pos = comma + 1;
    }
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::invalid_argument("cannot open output file: " + path);
    return os;
}

void print_dx(std::ostream& os, const stbc::DifferenceVector& dx) {
    os << '(';
    for (size_t i = 0; i < dx.size(); ++i) os << (i ? "," : "") << dx[i];
    os << ')';
}

int cmd_simulate(const std::string& config_path, const std::string& out_path, int threads) {
    stbc::SimConfig cfg = stbc::parse_sim_config_file(config_path);
    if (threads > 0) cfg.threads = threads;
    const std::vector<stbc::CerPoint> points = stbc::run_cer(cfg);
    if (out_path.empty()) {
        stbc::write_cer_csv(std::cout, points);
    } else {
        auto os = open_out(out_path);
        stbc::write_cer_csv(os, points);
        for (const stbc::CerPoint& p : points)
            std::cout << "snr " << stbc::format_double(p.snr_db) << " dB: cer "
                      << stbc::format_double(p.cer) << " (" << p.errors << '/' << p.trials
                      << " trials)\n";
    }
    return 0;
}

int cmd_mindet(int spread, double phi, const std::string& code_path, long long samples,
               uint64_t seed, int threads, const std::string& out_path) {
    const stbc::LinearDispersionCode code =
        code_path.empty() ? stbc::make_proposed_code(phi) : stbc::read_code_file(code_path);
    // per-block sign symmetry is a structural property of the built-in code;
    // external codes only get the always-valid global sign flip
    const stbc::LatticeSymmetry sym = code_path.empty() ? stbc::LatticeSymmetry::block_signs
                                                        : stbc::LatticeSymmetry::global_sign;
    const stbc::MinDetReport rep =
        samples > 0 ? stbc::min_det_sample(code, spread, samples, seed, threads)
                    : stbc::min_det_search(code, spread, sym, threads);
    std::cout << "min |det| = " << stbc::format_double(rep.min_abs_det) << " over the spread-"
              << rep.lattice_spread << " lattice (" << rep.count_examined
              << " vectors examined)\n";
    std::cout << "argmin dx = ";
    print_dx(std::cout, rep.argmin);
    std::cout << '\n';
    if (!out_path.empty()) {
        auto os = open_out(out_path);
        stbc::write_min_det_csv(os, rep);
    }
    return 0;
}

int cmd_papr(int m, const std::string& code_path, double phi) {
    const stbc::LinearDispersionCode code =
        code_path.empty() ? stbc::make_proposed_code(phi) : stbc::read_code_file(code_path);
    const stbc::PaprReport rep = stbc::papr(code, stbc::qam_constellation(m));
    std::cout << "papr for " << m << "-QAM: " << stbc::format_double(rep.papr_db)
              << " dB (peak " << stbc::format_double(rep.peak_energy) << ", avg "
              << stbc::format_double(rep.avg_energy) << ")\n";
    return 0;
}

int cmd_verify_nvd(int bound, double phi, int gap_bound, const std::string& records_path,
                   int threads) {
    const stbc::NvdReport rep = stbc::verify_nvd(bound, phi, gap_bound, threads);
    std::cout << "lattice cases: " << rep.lattice_cases << " (sigma1 == sigma2 in "
              << rep.sigma_equal_cases << ", tight difference in " << rep.tight_difference_cases
              << ")\n";
    std::cout << "min |det| over lattice: " << stbc::format_double(rep.min_det) << '\n';
    std::cout << "quadratic gap over " << rep.gap_tuples << " tuples: min "
              << rep.gap_min << ", residues " << (rep.residues_ok ? "ok" : "BROKEN") << '\n';
    if (rep.violations_total > 0) {
        std::cout << rep.violations_total << " violations, first "
                  << rep.violations.size() << ":\n";
        for (const stbc::NvdCaseRecord& v : rep.violations) {
            std::cout << "  dx = ";
            print_dx(std::cout, v.dx);
            std::cout << " det_closed " << stbc::format_double(v.det_closed) << " det_direct "
                      << stbc::format_double(v.det_direct) << '\n';
        }
    }
    if (!records_path.empty()) {
        auto os = open_out(records_path);
        stbc::write_nvd_records_csv(os, bound, phi);
    }
    std::cout << (rep.pass ? "PASS" : "FAIL") << ": determinant floor 16 "
              << (rep.pass ? "certified" : "NOT certified") << " on this lattice\n";
    return rep.pass ? 0 : 1;
}

int cmd_decode_check(long long trials, int m, int nr, uint64_t seed, const std::string& n0_csv) {
    const std::vector<double> n0_list = split_doubles(n0_csv);
    const stbc::AgreementReport rep =
        stbc::decode_agreement(stbc::make_proposed_code(), m, nr, trials, n0_list, seed);
    std::cout << "trials " << rep.trials << ", ties " << rep.ties << ", disagreements "
              << rep.disagreements << ", agreement "
              << stbc::format_double(100.0 * rep.agreement_rate) << "% of non-tie trials, "
              << "search sizes " << (rep.evals_ok ? "exact" : "WRONG") << '\n';
    const bool ok = rep.disagreements == 0 && rep.evals_ok;
    std::cout << (ok ? "PASS" : "FAIL")
              << ": conditional search matches exhaustive maximum likelihood\n";
    return ok ? 0 : 1;
}

int cmd_sweep_phi(int grid, int spread, const std::string& out_path, int threads) {
    const stbc::PhiSweepResult res = stbc::phi_sweep(grid, spread, threads);
    std::cout << "grid " << grid << " over [0, pi/2], spread " << res.spread << '\n';
    std::cout << "curve maximum " << stbc::format_double(res.best_min_det) << " on a "
              << res.plateau_points << "-point plateau, " << res.refined_points
              << " left after spread-" << res.refine_spread << " refinement\n";
    std::cout << "best phi = " << stbc::format_double(res.best_phi) << " (index "
              << res.best_index << ")\n";
    if (!out_path.empty()) {
        auto os = open_out(out_path);
        stbc::write_phi_sweep_csv(os, res);
    }
    return 0;
}

int cmd_export_code(const std::string& out_path, double phi) {
    stbc::write_code_file(out_path, stbc::make_proposed_code(phi));
    std::cout << "wrote code (phi = " << stbc::format_double(phi) << ") to " << out_path << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rate-1 full-diversity 4x4 space-time block code toolkit"};
    app.require_subcommand(1);

    const double phi_star = stbc::proposed_phi();

    auto* sim = app.add_subcommand("simulate", "Monte Carlo codeword error rate");
    std::string sim_config, sim_out;
    int sim_threads = 0;
    sim->add_option("--config", sim_config, "sim config file")->required();
    sim->add_option("--out", sim_out, "CSV output path (default: stdout)");
    sim->add_option("--threads", sim_threads, "worker threads (0 = all)");

    auto* mindet = app.add_subcommand("mindet", "minimum |det| over the difference lattice");
    int md_spread = 2, md_threads = 0;
    double md_phi = phi_star;
    std::string md_code, md_out;
    long long md_samples = 0;
    uint64_t md_seed = 1;
    mindet->add_option("--spread", md_spread, "lattice spread (2, 4 or 6)");
    mindet->add_option("--phi", md_phi, "rotation angle");
    mindet->add_option("--code", md_code, "code file (default: built-in)");
    mindet->add_option("--samples", md_samples, "random sampling instead of enumeration");
    mindet->add_option("--seed", md_seed, "sampling seed");
    mindet->add_option("--threads", md_threads, "worker threads (0 = all)");
    mindet->add_option("--out", md_out, "CSV output path");

    auto* pap = app.add_subcommand("papr", "peak-to-average power ratio per antenna");
    int pp_m = 4;
    double pp_phi = phi_star;
    std::string pp_code;
    pap->add_option("--m", pp_m, "QAM size")->required();
    pap->add_option("--code", pp_code, "code file (default: built-in)");
    pap->add_option("--phi", pp_phi, "rotation angle");

    auto* nvd = app.add_subcommand("verify-nvd", "certify the determinant floor");
    int nv_bound = 2, nv_gap = 20, nv_threads = 0;
    double nv_phi = phi_star;
    std::string nv_records;
    nvd->add_option("--bound", nv_bound, "lattice bound (2, 4 or 6)");
    nvd->add_option("--phi", nv_phi, "rotation angle");
    nvd->add_option("--gap-bound", nv_gap, "range of the quadratic gap scan");
    nvd->add_option("--records", nv_records, "per-case CSV dump (bound <= 4)");
    nvd->add_option("--threads", nv_threads, "worker threads (0 = all)");

    auto* dc = app.add_subcommand("decode-check", "conditional vs exhaustive decoder");
    long long dc_trials = 0;
    int dc_m = 4, dc_nr = 1;
    uint64_t dc_seed = 1;
    std::string dc_n0 = "0.5,2,8";
    dc->add_option("--trials", dc_trials, "number of noisy trials")->required();
    dc->add_option("--m", dc_m, "QAM size");
    dc->add_option("--nr", dc_nr, "receive antennas");
    dc->add_option("--seed", dc_seed, "stream seed");
    dc->add_option("--n0", dc_n0, "comma separated noise variances");

    auto* sw = app.add_subcommand("sweep-phi", "worst-case |det| as a function of phi");
    int sw_grid = 0, sw_spread = 2, sw_threads = 0;
    std::string sw_out;
    sw->add_option("--grid", sw_grid, "grid points over [0, pi/2]")->required();
    sw->add_option("--spread", sw_spread, "lattice spread (2 or 4)");
    sw->add_option("--out", sw_out, "CSV output path");
    sw->add_option("--threads", sw_threads, "worker threads (0 = all)");

    auto* ex = app.add_subcommand("export-code", "write the weight matrices to a file");
    std::string ex_out;
    double ex_phi = phi_star;
    ex->add_option("--out", ex_out, "output path")->required();
    ex->add_option("--phi", ex_phi, "rotation angle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_config, sim_out, sim_threads);
        if (mindet->parsed())
            return cmd_mindet(md_spread, md_phi, md_code, md_samples, md_seed, md_threads, md_out);
        if (pap->parsed()) return cmd_papr(pp_m, pp_code, pp_phi);
        if (nvd->parsed()) return cmd_verify_nvd(nv_bound, nv_phi, nv_gap, nv_records, nv_threads);
        if (dc->parsed()) return cmd_decode_check(dc_trials, dc_m, dc_nr, dc_seed, dc_n0);
        if (sw->parsed()) return cmd_sweep_phi(sw_grid, sw_spread, sw_out, sw_threads);
        if (ex->parsed()) return cmd_export_code(ex_out, ex_phi);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
