#include "ivs/phaselab.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "ivs/rng.hpp"

namespace ivs::phaselab {

using operators::OperatorFamily;

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::independent: return "independent";
        case Mode::shift: return "shift";
        case Mode::reflection: return "reflection";
        case Mode::rotation: return "rotation";
        case Mode::block_perm: return "block_perm";
    }
    return "?";
}

void ExperimentSpec::validate() const {
    if (m_grid.empty()) throw std::invalid_argument("ExperimentSpec: empty m grid");
    if (mode == Mode::independent && g_grid.empty())
        throw std::invalid_argument("ExperimentSpec: empty operator-count grid");
    if (trials < 1) throw std::invalid_argument("ExperimentSpec: trials must be positive");
    if (num_samples() < k) throw std::invalid_argument("ExperimentSpec: need at least k samples");
    if (mode == Mode::rotation && n1 * n2 != n)
        throw std::invalid_argument("ExperimentSpec: rotation grid requires n = n1*n2");
}

std::uint64_t trial_seed(std::uint64_t base_seed, int m, int group_index, int trial) {
    std::uint64_t s = combine_seed(base_seed, 0x5eedULL);
    s = combine_seed(s, static_cast<std::uint64_t>(m));
    s = combine_seed(s, static_cast<std::uint64_t>(group_index));
    s = combine_seed(s, static_cast<std::uint64_t>(trial));
    return s;
}

namespace {

struct TrialOutcome {
    bool success = false;
    double rel_err = 1.0;
};

struct CellPlan {
    int m = 0;
    int group_index = 0; // index into g_grid for independent mode, else 0
    std::uint64_t num_ops = 0;
};

linrep::GroupAction build_action(const ExperimentSpec& spec) {
    switch (spec.mode) {
        case Mode::shift: return linrep::make_shift_group(spec.n);
        case Mode::reflection: return linrep::make_reflection_group(spec.n);
        case Mode::rotation: return linrep::make_rotation_group(spec.n1, spec.n2);
        case Mode::block_perm: return linrep::make_block_permutation_group(spec.n, spec.moving);
        default: throw std::logic_error("build_action: independent mode has no group");
    }
}

TrialOutcome run_trial(const ExperimentSpec& spec, const CellPlan& cell,
                       const linrep::GroupAction* action, int trial) {
    const std::uint64_t seed = trial_seed(spec.base_seed, cell.m, cell.group_index, trial);
    const std::uint64_t family_seed = combine_seed(seed, 1);
    const std::uint64_t model_seed = combine_seed(seed, 2);
    const std::uint64_t sample_seed = combine_seed(seed, 3);

    OperatorFamily family;
    if (spec.mode == Mode::independent) {
        family = operators::independent_family(static_cast<int>(cell.num_ops), cell.m, spec.n,
                                               family_seed);
    } else {
        const auto base = operators::gaussian_operator(cell.m, spec.n, family_seed);
        family = operators::g_related_family(base, *action);
    }
    const auto model = models::random_subspace(spec.n, spec.k, model_seed);
    const auto samples = models::sample_with_family(model, family, spec.num_samples(), sample_seed);

    TrialOutcome out;
    try {
        const auto result = svt::complete(family, samples, spec.solver);
        const auto [ok, rel] = svt::recovery_success(result.X_hat, samples.X);
        out.success = ok;
        out.rel_err = rel;
    } catch (const svt::DivergenceDetected&) {
        out.success = false;
        out.rel_err = 1.0;
    }
    return out;
}

} // namespace

std::vector<GridCell> run_grid(const ExperimentSpec& spec) {
    spec.validate();

    std::optional<linrep::GroupAction> action;
    std::optional<linrep::IrrepDecomposition> decomp;
    if (spec.mode != Mode::independent) {
        action = build_action(spec);
        decomp = linrep::decompose(*action);
    }

    std::vector<CellPlan> cells;
    std::vector<int> ms = spec.m_grid;
    std::sort(ms.begin(), ms.end());
    if (spec.mode == Mode::independent) {
        std::vector<int> gs = spec.g_grid;
        std::sort(gs.begin(), gs.end());
        for (int m : ms)
            for (std::size_t gi = 0; gi < gs.size(); ++gi)
                cells.push_back({m, static_cast<int>(gi), static_cast<std::uint64_t>(gs[gi])});
    } else {
        for (int m : ms) cells.push_back({m, 0, action->order()});
    }

    std::vector<std::vector<TrialOutcome>> outcomes(cells.size(),
                                                    std::vector<TrialOutcome>(spec.trials));
    const int total_tasks = static_cast<int>(cells.size()) * spec.trials;
    int workers = spec.workers > 0 ? spec.workers
                                   : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, total_tasks));

    std::atomic<int> next{0};
    auto worker_fn = [&]() {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= total_tasks) return;
            const int ci = t / spec.trials;
            const int trial = t % spec.trials;
            outcomes[ci][trial] =
                run_trial(spec, cells[ci], action ? &*action : nullptr, trial);
        }
    };
    if (workers == 1) {
        worker_fn();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker_fn);
        for (auto& th : pool) th.join();
    }

    std::vector<GridCell> grid;
    grid.reserve(cells.size());
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        GridCell c;
        c.mode = spec.mode;
        c.n = spec.n;
        c.k = spec.k;
        c.m = cells[ci].m;
        c.num_ops = cells[ci].num_ops;
        c.group = mode_name(spec.mode);
        c.trials = spec.trials;
        c.seed = spec.base_seed;
        double err_sum = 0.0;
        for (const auto& o : outcomes[ci]) {
            if (o.success) ++c.successes;
            err_sum += o.rel_err;
        }
        c.success_rate = static_cast<double>(c.successes) / spec.trials;
        c.mean_rel_err = err_sum / spec.trials;

        if (spec.mode == Mode::independent) {
            const auto rep = bounds::evaluate_bounds(c.m, spec.n, spec.k, c.num_ops);
            c.bound_necessary = rep.necessary_multi.to_double();
            c.bound_sufficient = rep.sufficient_multi.to_double();
        } else {
            const auto rep = bounds::evaluate_bounds(c.m, spec.n, spec.k, *decomp, c.num_ops);
            c.bound_necessary = rep.necessary_group->to_double();
            if (rep.sufficient_cyclic) c.bound_sufficient = static_cast<double>(*rep.sufficient_cyclic);
            c.bound_conjectured = rep.conjectured_general->to_double();
        }
        grid.push_back(std::move(c));
    }

    // row order: m ascending, then group size ascending (cells were built in
    // m-major order with g ascending, so this is a stable finish)
    std::stable_sort(grid.begin(), grid.end(), [](const GridCell& a, const GridCell& b) {
        if (a.m != b.m) return a.m < b.m;
        return a.num_ops < b.num_ops;
    });
    return grid;
}

namespace {

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

std::string cells_to_csv(const std::vector<GridCell>& cells) {
    if (cells.empty()) throw std::invalid_argument("cells_to_csv: no cells");
    std::ostringstream os;
    os << "mode,n,k,m,num_ops,group,trials,successes,success_rate,mean_rel_err,"
          "bound_necessary,bound_sufficient,bound_conjectured,seed\n";
    for (const auto& c : cells) {
        os << mode_name(c.mode) << ',' << c.n << ',' << c.k << ',' << c.m << ',' << c.num_ops
           << ',' << c.group << ',' << c.trials << ',' << c.successes << ','
           << fmt6(c.success_rate) << ',' << fmt6(c.mean_rel_err) << ','
           << (c.bound_necessary ? fmt6(*c.bound_necessary) : "") << ','
           << (c.bound_sufficient ? fmt6(*c.bound_sufficient) : "") << ','
           << (c.bound_conjectured ? fmt6(*c.bound_conjectured) : "") << ',' << c.seed << '\n';
    }
    return os.str();
}

void emit_csv(const std::vector<GridCell>& cells, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("emit_csv: cannot open " + path);
    f << cells_to_csv(cells);
    if (!f) throw std::runtime_error("emit_csv: write failed for " + path);
}

} // namespace ivs::phaselab
