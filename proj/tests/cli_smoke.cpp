// End-to-end checks of the command line tool: exit codes and key output
// fragments. argv[1] is the path to the stbc4x4 binary.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

int g_failures = 0;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& cmd) {
    RunResult r;
    FILE* p = popen((cmd + " 2>&1").c_str(), "r");
    if (!p) return r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

void expect(const std::string& label, const RunResult& r, int want_exit,
            const std::string& want_fragment = "") {
    bool ok = r.exit_code == want_exit;
    if (ok && !want_fragment.empty()) ok = r.out.find(want_fragment) != std::string::npos;
    std::printf("[%s] %s (exit %d, want %d)\n", ok ? "PASS" : "FAIL", label.c_str(),
                r.exit_code, want_exit);
    if (!ok) {
        std::printf("---- output ----\n%s----------------\n", r.out.c_str());
        ++g_failures;
    }
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path-to-stbc4x4-cli>\n", argv[0]);
        return 2;
    }
    const std::string cli = argv[1];

    expect("no subcommand is a usage error", run(cli), 2);
    expect("help", run(cli + " --help"), 0, "space-time");
    expect("unknown subcommand", run(cli + " frobnicate"), 2);
    expect("unknown flag", run(cli + " mindet --bogus"), 2);

    expect("papr 4-QAM", run(cli + " papr --m 4"), 0, "0 dB");
    expect("papr 16-QAM", run(cli + " papr --m 16"), 0, "2.55");
    expect("papr rejects odd constellations", run(cli + " papr --m 5"), 2);

    expect("mindet spread 2", run(cli + " mindet"), 0, "min |det| = 16");
    expect("mindet rejects odd spreads", run(cli + " mindet --spread 3"), 2);
    expect("mindet sampling", run(cli + " mindet --samples 20000 --seed 1"), 0,
           "min |det| = 16");

    expect("verify-nvd certifies the proposed angle",
           run(cli + " verify-nvd --gap-bound 6"), 0, "PASS");
    expect("verify-nvd flags a broken angle",
           run(cli + " verify-nvd --phi 0.3 --gap-bound 6"), 1, "FAIL");

    expect("decode-check", run(cli + " decode-check --trials 300"), 0, "PASS");

    expect("sweep-phi", run(cli + " sweep-phi --grid 33"), 0, "best phi");
    expect("sweep-phi needs --grid", run(cli + " sweep-phi"), 2);

    const std::string code_file = "cli_smoke_code.txt";
    expect("export-code", run(cli + " export-code --out " + code_file), 0, "wrote code");
    expect("mindet on an exported code file",
           run(cli + " mindet --code " + code_file), 0, "min |det| = 16");
    expect("papr on an exported code file",
           run(cli + " papr --code " + code_file + " --m 16"), 0, "2.55");
    std::remove(code_file.c_str());

    const std::string cfg_file = "cli_smoke_sim.cfg";
    {
        std::ofstream cfg(cfg_file);
        cfg << "m = 4\nnr = 1\nsnr_db_list = 10\nmax_trials = 4096\n"
               "target_errors = 50\nmaster_seed = 3\n";
    }
    expect("simulate writes csv to stdout", run(cli + " simulate --config " + cfg_file), 0,
           "snr_db,trials,errors,cer,metric_evals_total");
    const std::string csv_file = "cli_smoke_cer.csv";
    expect("simulate writes csv to a file",
           run(cli + " simulate --config " + cfg_file + " --out " + csv_file), 0, "snr 10 dB");
    {
        std::ifstream is(csv_file);
        std::string header;
        std::getline(is, header);
        const bool ok = header == "snr_db,trials,errors,cer,metric_evals_total";
        std::printf("[%s] csv file header\n", ok ? "PASS" : "FAIL");
        if (!ok) ++g_failures;
    }
    std::remove(csv_file.c_str());
    std::remove(cfg_file.c_str());

    expect("simulate rejects a missing config",
           run(cli + " simulate --config does_not_exist.cfg"), 2);
    {
        std::ofstream cfg(cfg_file);
        cfg << "snr_db_list = 10\nbogus_key = 1\n";
    }
    expect("simulate rejects unknown config keys",
           run(cli + " simulate --config " + cfg_file), 2);
    std::remove(cfg_file.c_str());

    if (g_failures == 0) {
        std::printf("cli smoke clean\n");
        return 0;
    }
    std::printf("%d cli checks failed\n", g_failures);
    return 1;
}
