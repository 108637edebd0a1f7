#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "ivs/covsketch.hpp"
#include "ivs/phaselab.hpp"

namespace ivs::phaselab {

namespace {

std::vector<int> parse_grid(const std::string& text) {
    std::vector<int> out;
    if (text.find(':') != std::string::npos) {
        int lo = 0, hi = 0, step = 1;
        char c1 = 0, c2 = 0;
        std::istringstream ss(text);
        ss >> lo >> c1 >> hi >> c2 >> step;
        if (!ss || c1 != ':' || c2 != ':' || step <= 0)
            throw std::invalid_argument("grid: expected lo:hi:step with positive step");
        for (int v = lo; v <= hi; v += step) out.push_back(v);
    } else {
        std::istringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    }
    if (out.empty()) throw std::invalid_argument("grid: empty grid");
    return out;
}

std::vector<int> parse_list(const std::string& text) {
    std::vector<int> out;
    std::istringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

struct GroupArgs {
    std::string mode;
    int n = 0;
    int n1 = 0, n2 = 0;
    std::string moving_text;

    // `moving` is 1-based on the command line
    std::vector<int> moving_zero_based() const {
        auto mv = parse_list(moving_text);
        for (auto& v : mv) --v;
        return mv;
    }

    linrep::GroupAction build() const {
        if (mode == "shift") return linrep::make_shift_group(n);
        if (mode == "reflection") return linrep::make_reflection_group(n);
        if (mode == "rotation") return linrep::make_rotation_group(n1, n2);
        if (mode == "block_perm") return linrep::make_block_permutation_group(n, moving_zero_based());
        if (mode == "product2d") return linrep::make_product_shift2d_group(n1, n2);
        if (mode == "trivial") return linrep::make_trivial_group(n);
        if (mode == "permutation") return linrep::make_full_permutation_group(n);
        throw std::invalid_argument("unknown group mode '" + mode + "'");
    }
};

void add_group_flags(CLI::App* cmd, GroupArgs& args, bool require_mode) {
    auto* mode = cmd->add_option("--mode", args.mode,
                                 "group: shift|reflection|rotation|block_perm|product2d|trivial|permutation");
    if (require_mode) mode->required();
    cmd->add_option("--n", args.n, "ambient dimension")->required();
    cmd->add_option("--n1", args.n1, "rotation/product2d: first factor");
    cmd->add_option("--n2", args.n2, "rotation/product2d: second factor");
    cmd->add_option("--moving", args.moving_text, "block_perm: comma list of moved coordinates (1-based)");
}

} // namespace

int cli(int argc, const char* const* argv) {
    CLI::App app{"phaselab: identifiability bounds and phase-transition experiments"};
    app.require_subcommand(1);

    // ---- run ----
    auto* run = app.add_subcommand("run", "run a Monte Carlo phase-transition grid");
    std::string run_mode = "independent", m_grid_text, g_grid_text, moving_text, out_path;
    ExperimentSpec spec;
    run->add_option("--mode", run_mode, "independent|shift|reflection|rotation|block_perm");
    run->add_option("--n", spec.n, "ambient dimension");
    run->add_option("--k", spec.k, "model dimension");
    run->add_option("--m-grid", m_grid_text, "measurements per operator, lo:hi:step or comma list")
        ->required();
    run->add_option("--g-grid", g_grid_text, "independent mode: comma list of operator counts");
    run->add_option("--n1", spec.n1, "rotation: radial size");
    run->add_option("--n2", spec.n2, "rotation: angular size");
    run->add_option("--moving", moving_text, "block_perm: moved coordinates (1-based)");
    run->add_option("--trials", spec.trials, "Monte Carlo trials per cell");
    run->add_option("--samples-mult", spec.samples_mult, "N = mult * k");
    run->add_option("--seed", spec.base_seed, "base seed");
    run->add_option("--out", out_path, "output CSV path")->required();
    run->add_option("--tau", spec.solver.tau, "shrinkage threshold (0: default 5*sqrt(n*N))");
    run->add_option("--step-size", spec.solver.step, "dual step (0: default 1.2*n*N/sum m)");
    run->add_option("--max-iters", spec.solver.max_iters, "solver iteration cap");
    run->add_option("--tol", spec.solver.tol, "relative residual stopping threshold");
    run->add_option("--workers", spec.workers, "worker threads (0: hardware)");

    // ---- bounds ----
    auto* bnd = app.add_subcommand("bounds", "print the identifiability bound report");
    GroupArgs bnd_group;
    int bnd_m = 0, bnd_k = 0;
    std::uint64_t bnd_num_ops = 0;
    bnd->add_option("--m", bnd_m, "measurements per operator")->required();
    bnd->add_option("--k", bnd_k, "model dimension")->required();
    bnd->add_option("--num-ops", bnd_num_ops, "independent operator count");
    add_group_flags(bnd, bnd_group, false);

    // ---- decompose ----
    auto* dec = app.add_subcommand("decompose", "print the irreducible block table (j s_j c_j)");
    GroupArgs dec_group;
    add_group_flags(dec, dec_group, true);

    // ---- covdof ----
    auto* dof = app.add_subcommand("covdof", "print invariant-covariance degrees of freedom");
    GroupArgs dof_group;
    add_group_flags(dof, dof_group, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*run) {
            if (run_mode == "independent") spec.mode = Mode::independent;
            else if (run_mode == "shift") spec.mode = Mode::shift;
            else if (run_mode == "reflection") spec.mode = Mode::reflection;
            else if (run_mode == "rotation") spec.mode = Mode::rotation;
            else if (run_mode == "block_perm") spec.mode = Mode::block_perm;
            else {
                std::cerr << "unknown mode '" << run_mode << "'\n";
                return 2;
            }
            spec.m_grid = parse_grid(m_grid_text);
            if (!g_grid_text.empty()) spec.g_grid = parse_list(g_grid_text);
            if (!moving_text.empty()) {
                spec.moving = parse_list(moving_text);
                for (auto& v : spec.moving) --v;
            }
            spec.out_path = out_path;
            const auto cells = run_grid(spec);
            emit_csv(cells, out_path);
            std::cout << "wrote " << cells.size() << " cells to " << out_path << '\n';
            return 0;
        }
        if (*bnd) {
            if (!bnd_group.mode.empty()) {
                const auto action = bnd_group.build();
                const auto decomp = linrep::decompose(action);
                // factorial group orders are capped; the multi-operator bounds
                // are vacuous at that size and the group bounds ignore |G|
                const auto rep = bounds::evaluate_bounds(bnd_m, bnd_group.n, bnd_k, decomp,
                                                         action.order_or(1000000));
                std::cout << rep.to_kv_text();
            } else {
                if (bnd_num_ops == 0) {
                    std::cerr << "bounds: need --num-ops or --mode\n";
                    return 2;
                }
                const auto rep = bounds::evaluate_bounds(bnd_m, bnd_group.n, bnd_k, bnd_num_ops);
                std::cout << rep.to_kv_text();
            }
            return 0;
        }
        if (*dec) {
            const auto decomp = linrep::decompose(dec_group.build());
            for (int j = 0; j < decomp.J; ++j)
                std::cout << (j + 1) << ' ' << decomp.blocks[j].s << ' ' << decomp.blocks[j].c
                          << '\n';
            return 0;
        }
        if (*dof) {
            const auto decomp = linrep::decompose(dof_group.build());
            const auto d = covsketch::invariant_dof(decomp);
            std::cout << "dof_complex=" << d.complex_count << '\n';
            std::cout << "dof_real=" << d.real_count << '\n';
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace ivs::phaselab
