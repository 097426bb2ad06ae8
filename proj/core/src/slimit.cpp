#include "frop/slimit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace frop {

LocalOperator::LocalOperator(Grid grid) : grid_(std::move(grid)) {
    const double h = grid_.h();
    inv_h2_ = 1.0 / (h * h);
    const std::size_t n = grid_.interior_count();
    diag_.resize(n);
    neighbors_.resize(n);
    const int count = grid_.dim() == 1 ? 2 : 4;
    for (std::size_t i = 0; i < n; ++i) {
        const auto [ix, iy] = grid_.lattice_of(i);
        const std::array<std::array<int, 2>, 4> nbs = {
            {{ix - 1, iy}, {ix + 1, iy}, {ix, iy - 1}, {ix, iy + 1}}};
        int missing = 0;
        for (int k = 0; k < 4; ++k) {
            if (k < count) {
                neighbors_[i][k] = grid_.interior_index(nbs[k][0], nbs[k][1]);
                if (neighbors_[i][k] < 0) ++missing;
            } else {
                neighbors_[i][k] = -1;
            }
        }
        // Mirror ghost across the boundary face: u_ghost = -u_i, so each
        // missing neighbor adds one to the diagonal weight.
        diag_[i] = 2.0 * grid_.dim() + missing;
    }
}

void LocalOperator::apply(std::span<const double> w, std::span<double> out) const {
    const std::size_t n = grid_.interior_count();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = diag_[i] * w[i];
        for (int k = 0; k < 4; ++k) {
            const std::ptrdiff_t j = neighbors_[i][k];
            if (j >= 0) acc -= w[static_cast<std::size_t>(j)];
        }
        out[i] = acc * inv_h2_;
    }
}

namespace {

// Thomas solve for the 1D stencil; the matrix is tridiagonal in node order.
class TridiagonalDirect final : public DirectSolver {
public:
    TridiagonalDirect(std::vector<double> diag, double off, double scale)
        : diag_(std::move(diag)), off_(off), scale_(scale) {}

    void solve(std::span<const double> rhs, std::span<double> x) const override {
        const std::size_t n = diag_.size();
        std::vector<double> c(n), d(n);
        c[0] = off_ / diag_[0];
        d[0] = rhs[0] / scale_ / diag_[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double m = diag_[i] - off_ * c[i - 1];
            c[i] = off_ / m;
            d[i] = (rhs[i] / scale_ - off_ * d[i - 1]) / m;
        }
        x[n - 1] = d[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    }

private:
    std::vector<double> diag_;
    double off_;
    double scale_;
};

}  // namespace

std::unique_ptr<DirectSolver> LocalOperator::make_direct() const {
    if (grid_.dim() != 1) return nullptr;
    return std::make_unique<TridiagonalDirect>(diag_, -1.0, inv_h2_);
}

LocalOperator assemble_local(const Grid& grid) { return LocalOperator(grid); }

RearrangementSolution solve_local_rearrangement(const Grid& grid, double beta,
                                                const FrankWolfeOptions& options) {
    LocalOperator op(grid);
    return solve_frank_wolfe(op, RearrangementClass{beta}, options);
}

namespace {

double gaussian_probe(Point p, double center_x, double center_y, double width, int dim) {
    const double dx = (p.x - center_x) / width;
    const double dy = dim == 2 ? (p.y - center_y) / width : 0.0;
    return std::exp(-0.5 * (dx * dx + dy * dy));
}

}  // namespace

SweepTable s_sweep(const Domain& domain, int n_per_axis, double beta,
                   const std::vector<double>& s_list, const SweepOptions& options) {
    if (s_list.empty()) throw std::invalid_argument("s_sweep: empty order list");
    for (std::size_t k = 0; k < s_list.size(); ++k) {
        if (!(s_list[k] > 0.0) || s_list[k] > options.s_cap) {
            throw std::invalid_argument("s_sweep: orders must lie in (0, " +
                                        std::to_string(options.s_cap) +
                                        "]; the cap protects the kernel quadrature near s = 1");
        }
        if (k > 0 && !(s_list[k] > s_list[k - 1])) {
            throw std::invalid_argument("s_sweep: order list must be strictly ascending");
        }
    }

    const Grid grid = build_grid(domain, n_per_axis);
    const double hn = grid.cell_volume();
    const double eps = options.intermediate_eps;

    SweepTable table;
    table.probe_width = (domain.hi(0) - domain.lo(0)) / 8.0;
    const double probe_cy =
        domain.dim() == 2 ? 0.5 * (domain.lo(1) + domain.hi(1)) : 0.0;
    for (int k = 1; k <= options.probes; ++k) {
        table.probe_centers.push_back(domain.lo(0) + (domain.hi(0) - domain.lo(0)) * k /
                                                         (options.probes + 1));
    }

    const RearrangementSolution local = solve_local_rearrangement(grid, beta, options.fw);
    table.local_alpha = local.alpha;
    table.local_objective = local.objective;
    {
        std::size_t mid = 0;
        for (double v : local.f_hat.values) {
            if (v > eps && v < 1.0 - eps) ++mid;
        }
        table.local_frac_measure = static_cast<double>(mid) * hn;
    }

    table.rows.resize(s_list.size());
    auto run_row = [&](std::size_t r) {
        SweepRow& row = table.rows[r];
        row.s = s_list[r];
        try {
            const KernelParams params{domain.dim(), s_list[r], true};
            const NonlocalOperator op = assemble(grid, params);
            const RearrangementSolution sol =
                solve_frank_wolfe(op, RearrangementClass{beta}, options.fw);
            row.alpha = sol.alpha;
            row.objective = sol.objective;
            double dist2 = 0.0;
            for (std::size_t i = 0; i < grid.interior_count(); ++i) {
                const double d = sol.u_hat.values[i] - local.u_hat.values[i];
                dist2 += d * d;
            }
            row.state_dist = std::sqrt(hn * dist2);
            std::size_t mid = 0;
            for (double v : sol.f_hat.values) {
                if (v > eps && v < 1.0 - eps) ++mid;
            }
            row.frac_measure = static_cast<double>(mid) * hn;
            row.density_tests.resize(table.probe_centers.size());
            for (std::size_t k = 0; k < table.probe_centers.size(); ++k) {
                double acc = 0.0;
                for (std::size_t i = 0; i < grid.interior_count(); ++i) {
                    acc += (sol.f_hat.values[i] - local.f_hat.values[i]) *
                           gaussian_probe(grid.node(i), table.probe_centers[k], probe_cy,
                                          table.probe_width, domain.dim());
                }
                row.density_tests[k] = hn * acc;
            }
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
    };

    const int workers = std::max(1, options.workers);
    if (workers == 1 || s_list.size() == 1) {
        for (std::size_t r = 0; r < s_list.size(); ++r) run_row(r);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t r = t; r < s_list.size(); r += workers) run_row(r);
            });
        }
        for (auto& th : pool) th.join();
    }
    return table;
}

}  // namespace frop
