#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qosc/commands.hpp"

namespace {

struct Flags {
    std::string mode = "unimodular";
    std::optional<double> epsilon;
    std::string grid;
    std::string l = "auto";
    std::string k = "0";
    std::string checks;
    std::optional<double> tol;
    std::string format = "json";
    std::string out;
    int n_max = qosc::kDefaultSymbolicN;
    double delta_tamper = 0.0;
    std::string involution_file;
};

void add_common(CLI::App* sub, Flags& f)
{
    sub->add_option("--mode", f.mode, "unimodular (|q| = 1) or realline (real q)")
        ->check(CLI::IsMember({"unimodular", "realline"}));
    sub->add_option("--epsilon", f.epsilon, "deformation parameter");
    sub->add_option("--l", f.l, "branch integer or 'auto'");
    sub->add_option("--k", f.k, "highest weight k, or a range lo..hi (sweep)");
    sub->add_option("--tol", f.tol, "residual tolerance (default QOSC_TOL or 1e-10)");
    sub->add_option("--format", f.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--out", f.out, "write output to this file instead of stdout");
}

qosc::RunConfig to_config(const Flags& f)
{
    qosc::RunConfig cfg;
    cfg.mode = qosc::parse_mode(f.mode);
    cfg.epsilon = f.epsilon;
    if (!f.grid.empty()) cfg.grid = qosc::parse_grid(f.grid);
    cfg.l = qosc::parse_l(f.l);
    std::tie(cfg.k_lo, cfg.k_hi) = qosc::parse_k_range(f.k);
    if (!f.checks.empty()) cfg.checks = qosc::parse_checks(f.checks);
    cfg.tol = f.tol ? *f.tol : qosc::default_tolerance();
    if (!(cfg.tol > 0.0)) throw qosc::Error("--tol must be positive");
    cfg.format = qosc::parse_format(f.format);
    cfg.n_max = f.n_max;
    cfg.delta_tamper = f.delta_tamper;
    if (!f.involution_file.empty()) {
        std::ifstream in(f.involution_file);
        if (!in) throw qosc::Error("cannot open involution file " + f.involution_file);
        cfg.involution = qosc::involution_from_json(qosc::json::parse(in));
    }
    return cfg;
}

int emit(const qosc::CommandResult& r, const std::string& path)
{
    std::cerr << r.err;
    if (path.empty()) {
        std::cout << r.out;
    } else {
        std::ofstream file(path, std::ios::binary);
        if (!file) {
            std::cerr << "error: cannot write " << path << "\n";
            return 2;
        }
        file << r.out;
    }
    return r.exit_code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Finite-dimensional representations of the q-oscillator Hopf algebra and their checks"};
    app.require_subcommand(1);
    Flags f;

    auto* rep = app.add_subcommand("rep", "build a representation and print its matrices");
    add_common(rep, f);

    auto* verify = app.add_subcommand("verify", "run the selected checks at one parameter point");
    add_common(verify, f);
    verify->add_option("--checks", f.checks, "comma-separated check families");
    verify->add_option("--n-max", f.n_max, "largest n for the symbolic identities");
    verify->add_option("--involution", f.involution_file, "JSON file with an extra involution to check");

    auto* sweep = app.add_subcommand("sweep", "run checks over a parameter grid");
    add_common(sweep, f);
    sweep->add_option("--epsilon-grid", f.grid, "lo:hi:step");
    sweep->add_option("--checks", f.checks, "comma-separated check families");
    sweep->add_option("--n-max", f.n_max, "largest n for the symbolic identities");

    auto* symbolic = app.add_subcommand("symbolic", "verify the ladder identities by normal ordering");
    add_common(symbolic, f);
    symbolic->add_option("--n-max", f.n_max, "largest n (at most 16)");
    symbolic->add_option("--debug-tamper-delta", f.delta_tamper, "perturb the rewrite rule (negative control)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    qosc::RunConfig cfg;
    try {
        cfg = to_config(f);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    qosc::CommandResult result;
    if (rep->parsed()) result = qosc::cmd_build(cfg);
    else if (verify->parsed()) result = qosc::cmd_verify(cfg);
    else if (sweep->parsed()) result = qosc::cmd_sweep(cfg);
    else result = qosc::cmd_symbolic(cfg);
    return emit(result, f.out);
}
