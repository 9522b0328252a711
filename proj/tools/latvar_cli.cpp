// Command-line front end. Subcommands map one-to-one onto the operations in
// workflows.hpp; options may come from the command line or a key=value
// config file, with the command line taking precedence.
//
// Exit codes: 0 success; 2 usage or input error; 3 the solver stopped on the
// iteration cap or an inner linear solve failed to converge; 4 a documented
// invariant failed.
#include "latvar/workflows.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace {

struct ListArgs {
    std::string ells, T, angles, config;
};

// Comma-separated reals; empty tokens are skipped so "" denotes an empty
// list. Malformed numbers raise invalid_argument (usage error).
std::vector<latvar::Real> parse_real_list(const std::string& s) {
    std::vector<latvar::Real> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t c = s.find(',', pos);
        const std::string tok =
            s.substr(pos, c == std::string::npos ? std::string::npos : c - pos);
        if (!tok.empty() && tok.find_first_not_of(" \t") != std::string::npos) {
            std::size_t used = 0;
            const double val = std::stod(tok, &used);
            while (used < tok.size() && (tok[used] == ' ' || tok[used] == '\t')) ++used;
            if (used != tok.size())
                throw std::invalid_argument("cannot parse '" + tok + "' as a number");
            out.push_back(val);
        }
        if (c == std::string::npos) break;
        pos = c + 1;
    }
    return out;
}

// Flat key=value options file. Keys mirror the long option names without the
// leading dashes; blank lines and #-comments are skipped. Values already given
// on the command line win; unknown keys are usage errors.
void apply_config_file(CLI::App* sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    const auto trim = [](const std::string& s) {
        const std::size_t b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    };
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config " + path + ": line " + std::to_string(lineno) +
                                        " is not key=value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string val = trim(stripped.substr(eq + 1));
        CLI::Option* op = sub->get_option_no_throw("--" + key);
        if (op == nullptr)
            throw std::invalid_argument("config " + path + ": unknown key '" + key + "'");
        if (op->count() > 0) continue;  // command line wins
        op->add_result(val);
        op->run_callback();
    }
}

void add_common_options(CLI::App* sub, latvar::RunConfig& cfg, ListArgs& lists) {
    sub->add_option("--config", lists.config, "key=value options file (command line wins)");
    sub->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    sub->add_option("--ell", lists.ells, "mesh ratio delta/epsilon, single value or comma list");
    sub->add_option("--delta", cfg.delta, "grid spacing override (default: derived)");
    sub->add_option("--eta", cfg.eta, "residual bulk conductivity (default: mode-dependent)");
    sub->add_option("--fw", cfg.fidelity_weight, "fidelity weight (default: mode-dependent)");
    sub->add_option("--tol", cfg.tol, "relative energy-decrease stopping tolerance")
        ->capture_default_str();
    sub->add_option("--max-iters", cfg.max_iters, "outer iteration cap")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "seed for randomized suites")->capture_default_str();
    sub->add_option("--T", lists.T, "cube side lengths, comma list");
    sub->add_option("--angles", lists.angles, "normal angles in degrees, comma list");
}

// Applies the parsed list strings; absent flags keep the per-command default.
void apply_lists(const CLI::App* sub, const ListArgs& lists, latvar::RunConfig& cfg,
                 std::vector<latvar::Real> default_ells) {
    cfg.ells = sub->count("--ell") ? parse_real_list(lists.ells) : std::move(default_ells);
    if (sub->count("--T")) cfg.T_list = parse_real_list(lists.T);
    if (sub->count("--angles")) cfg.angles = parse_real_list(lists.angles);
}

}  // namespace

int main(int argc, char** argv) {
    latvar::RunConfig cfg;
    ListArgs lists;
    CLI::App app{"lattice variational toolkit for free-discontinuity energies"};
    app.require_subcommand(1);

    int rc = latvar::exit_usage;

    CLI::App* seg = app.add_subcommand("segment", "minimize the image functional on a PGM datum");
    seg->add_option("input", cfg.input, "input PGM image (P2 or P5)")->required();
    add_common_options(seg, cfg, lists);
    seg->callback([&] {
        if (!lists.config.empty()) apply_config_file(seg, lists.config);
        apply_lists(seg, lists, cfg, {0.25});
        if (cfg.ells.empty()) throw std::invalid_argument("segment: --ell must not be empty");
        rc = latvar::run_segment(cfg);
    });

    CLI::App* cell = app.add_subcommand("cell", "tabulate the anisotropic surface density phi^T");
    add_common_options(cell, cfg, lists);
    cell->callback([&] {
        if (!lists.config.empty()) apply_config_file(cell, lists.config);
        apply_lists(cell, lists, cfg, {1.0});
        rc = latvar::run_cell_table(cfg);
    });

    CLI::App* prof = app.add_subcommand("profile1d", "closed-form vs numeric 1d profile constants");
    add_common_options(prof, cfg, lists);
    prof->callback([&] {
        if (!lists.config.empty()) apply_config_file(prof, lists.config);
        apply_lists(prof, lists, cfg, {0.25, 0.5, 1.0, 2.0, 4.0});
        rc = latvar::run_profile1d(cfg);
    });

    CLI::App* sweep = app.add_subcommand("sweep", "mesh-ratio regimes on a 1d step datum");
    add_common_options(sweep, cfg, lists);
    sweep->add_option("--sites", cfg.sweep_sites, "number of 1d sites")->capture_default_str();
    sweep->add_option("--height", cfg.sweep_height, "step height of the datum")
        ->capture_default_str();
    sweep->callback([&] {
        if (!lists.config.empty()) apply_config_file(sweep, lists.config);
        apply_lists(sweep, lists, cfg, {0.0625, 64.0});
        rc = latvar::run_sweep(cfg);
    });

    CLI::App* check = app.add_subcommand("check", "run every property suite and report a matrix");
    add_common_options(check, cfg, lists);
    check->callback([&] {
        if (!lists.config.empty()) apply_config_file(check, lists.config);
        apply_lists(check, lists, cfg, {1.0});
        rc = latvar::run_check(cfg);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return latvar::exit_usage;
    } catch (const latvar::PgmError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return latvar::exit_usage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return latvar::exit_usage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        const bool nonconv = std::string(e.what()).find("converge") != std::string::npos;
        return nonconv ? latvar::exit_no_convergence : latvar::exit_invariant;
    }
    return rc;
}
