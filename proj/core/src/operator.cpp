#include "frop/operator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace frop {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 4-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGauss4Nodes = {-0.8611363115940526, -0.33998104358485626,
                                                0.33998104358485626, 0.8611363115940526};
constexpr std::array<double, 4> kGauss4Weights = {0.34785484513745385, 0.6521451548625461,
                                                  0.6521451548625461, 0.34785484513745385};

struct CouplingRule {
    int dim;
    double s;
    double h;
    double c;  // operator constant

    // Kernel integral of cell j seen from node i, as a function of the
    // componentwise |offset| between the node centers. Using the absolute
    // offset makes w_ij and w_ji bitwise identical.
    double cell_coupling(double adx, double ady) const {
        if (dim == 1) {
            if (adx >= 2.0 * h) return c * h * std::pow(adx, -1.0 - 2.0 * s);
            // exact power integral over the adjacent cell
            const double near = adx - 0.5 * h;
            const double far = adx + 0.5 * h;
            return c * (std::pow(near, -2.0 * s) - std::pow(far, -2.0 * s)) / (2.0 * s);
        }
        const double d2 = adx * adx + ady * ady;
        const double d = std::sqrt(d2);
        if (d >= 2.0 * h) return c * h * h * std::pow(d2, -0.5 * (2.0 + 2.0 * s));
        // 4x4 tensor Gauss over the neighboring cell
        const double half = 0.5 * h;
        double acc = 0.0;
        for (int a = 0; a < 4; ++a) {
            const double yx = adx + half * kGauss4Nodes[a];
            for (int b = 0; b < 4; ++b) {
                const double yy = ady + half * kGauss4Nodes[b];
                const double r2 = yx * yx + yy * yy;
                acc += kGauss4Weights[a] * kGauss4Weights[b] *
                       std::pow(r2, -0.5 * (2.0 + 2.0 * s));
            }
        }
        return c * half * half * acc;
    }
};

// Exit distance from an interior point along direction theta to the
// bounding-box boundary.
double ray_box_exit(double px, double py, double theta, const Domain& dom) {
    const double dx = std::cos(theta), dy = std::sin(theta);
    double t = std::numeric_limits<double>::infinity();
    if (dx > 0.0) t = std::min(t, (dom.hi(0) - px) / dx);
    else if (dx < 0.0) t = std::min(t, (dom.lo(0) - px) / dx);
    if (dy > 0.0) t = std::min(t, (dom.hi(1) - py) / dy);
    else if (dy < 0.0) t = std::min(t, (dom.lo(1) - py) / dy);
    return t;
}

// ∫_{box^c} |p - y|^{-2-2s} dy = (1/2s) ∫_0^{2π} r_exit(θ)^{-2s} dθ for p
// inside the box (polar integration of the radial power law). The angular
// integrand is smooth between corner directions, so integrate arc by arc.
double box_complement_tail(double px, double py, double s, const Domain& dom) {
    std::array<double, 4> corners_x = {dom.lo(0), dom.hi(0), dom.hi(0), dom.lo(0)};
    std::array<double, 4> corners_y = {dom.lo(1), dom.lo(1), dom.hi(1), dom.hi(1)};
    std::array<double, 4> angles{};
    for (int k = 0; k < 4; ++k) {
        double a = std::atan2(corners_y[k] - py, corners_x[k] - px);
        if (a < 0.0) a += 2.0 * kPi;
        angles[k] = a;
    }
    std::sort(angles.begin(), angles.end());

    double integral = 0.0;
    constexpr int kPanels = 16;
    for (int arc = 0; arc < 4; ++arc) {
        const double a0 = angles[arc];
        const double a1 = arc + 1 < 4 ? angles[arc + 1] : angles[0] + 2.0 * kPi;
        const double len = (a1 - a0) / kPanels;
        for (int p = 0; p < kPanels; ++p) {
            const double mid = a0 + (p + 0.5) * len;
            for (int g = 0; g < 4; ++g) {
                const double theta = mid + 0.5 * len * kGauss4Nodes[g];
                const double r = ray_box_exit(px, py, theta, dom);
                integral += 0.5 * len * kGauss4Weights[g] * std::pow(r, -2.0 * s);
            }
        }
    }
    return integral / (2.0 * s);
}

// Second moment of the kernel over the node's own cell: the self-cell term
// of the principal value equals -κ Δw + O(h^{4-2s}) with
// κ = (c/2) ∫_cell z₁² |z|^{-n-2s} dz. Realized as a graph-Laplacian
// correction (zero row sums, M-matrix signs kept); without it the operator
// loses an O(h^{2-2s}) share of its local limit, fatal as s -> 1.
double self_cell_moment(int dim, double s, double h, double c) {
    if (dim == 1) {
        return 0.5 * c * std::pow(0.5 * h, 2.0 - 2.0 * s) / (1.0 - s);
    }
    // Polar form over the square cell: (c/2) (h/2)^{2-2s} M(s)/(2-2s) with
    // M(s) = 4 ∫_0^{π/4} cos^{2s-2}θ dθ.
    constexpr int kPanels = 64;
    const double len = (kPi / 4.0) / kPanels;
    double m = 0.0;
    for (int p = 0; p < kPanels; ++p) {
        const double mid = (p + 0.5) * len;
        for (int g = 0; g < 4; ++g) {
            const double theta = mid + 0.5 * len * kGauss4Nodes[g];
            m += 0.5 * len * kGauss4Weights[g] * std::pow(std::cos(theta), 2.0 * s - 2.0);
        }
    }
    m *= 4.0;
    return 0.5 * c * std::pow(0.5 * h, 2.0 - 2.0 * s) * m / (2.0 - 2.0 * s);
}

}  // namespace

NonlocalOperator::NonlocalOperator(Grid grid, KernelParams params, DenseMatrix a,
                                   std::vector<double> tail, double self_cell_weight)
    : grid_(std::move(grid)),
      params_(params),
      a_(std::move(a)),
      tail_(std::move(tail)),
      self_cell_weight_(self_cell_weight) {}

void NonlocalOperator::apply(std::span<const double> w, std::span<double> out) const {
    a_.multiply(w, out);
}

namespace {
class CholeskyDirect final : public DirectSolver {
public:
    explicit CholeskyDirect(const DenseMatrix& a) : chol_(a) {}
    void solve(std::span<const double> rhs, std::span<double> x) const override {
        chol_.solve(rhs, x);
    }

private:
    DenseCholesky chol_;
};
}  // namespace

std::unique_ptr<DirectSolver> NonlocalOperator::make_direct() const {
    return std::make_unique<CholeskyDirect>(a_);
}

NonlocalOperator assemble(const Grid& grid, const KernelParams& params,
                          const AssembleOptions& options) {
    params.validate();
    const std::size_t n = grid.interior_count();
    if (n > options.max_interior) {
        throw std::length_error("assemble: " + std::to_string(n) +
                                " interior nodes exceed the dense-storage cap of " +
                                std::to_string(options.max_interior));
    }

    const CouplingRule rule{grid.dim(), params.s, grid.h(), params.constant()};
    const Domain& dom = grid.domain();
    const double two_s = 2.0 * params.s;

    // Exterior lattice cells inside the bounding box (disk masks only).
    std::vector<Point> exterior_cells;
    if (dom.kind() == DomainKind::disk) {
        for (int iy = 0; iy < grid.cells_y(); ++iy) {
            for (int ix = 0; ix < grid.cells_x(); ++ix) {
                if (grid.interior_index(ix, iy) < 0) {
                    exterior_cells.push_back(Point{dom.lo(0) + (ix + 0.5) * grid.h(),
                                                   dom.lo(1) + (iy + 0.5) * grid.h()});
                }
            }
        }
    }

    DenseMatrix a(n);
    std::vector<double> tail(n, 0.0);
    const auto nodes = grid.nodes();
    const double kappa =
        self_cell_moment(grid.dim(), params.s, grid.h(), rule.c) / (grid.h() * grid.h());

    auto assemble_row = [&](std::size_t i) {
        const Point xi = nodes[i];
        double t = 0.0;
        if (grid.dim() == 1) {
            t = rule.c *
                (std::pow(xi.x - dom.lo(0), -two_s) + std::pow(dom.hi(0) - xi.x, -two_s)) /
                two_s;
        } else {
            t = rule.c * box_complement_tail(xi.x, xi.y, params.s, dom);
            for (const Point& yc : exterior_cells) {
                t += rule.cell_coupling(std::abs(xi.x - yc.x), std::abs(xi.y - yc.y));
            }
        }
        tail[i] = t;

        double diag = t;
        auto row = a.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const Point xj = nodes[j];
            const double w =
                rule.cell_coupling(std::abs(xi.x - xj.x), std::abs(xi.y - xj.y));
            row[j] = -w;
            diag += w;
        }

        // self-cell correction stencil over the interior lattice neighbors
        const auto [ix, iy] = grid.lattice_of(i);
        const std::array<std::array<int, 2>, 4> nbs = {
            {{ix - 1, iy}, {ix + 1, iy}, {ix, iy - 1}, {ix, iy + 1}}};
        const int directions = grid.dim() == 1 ? 2 : 4;
        for (int k = 0; k < directions; ++k) {
            const std::ptrdiff_t j = grid.interior_index(nbs[k][0], nbs[k][1]);
            if (j >= 0) {
                row[static_cast<std::size_t>(j)] -= kappa;
                diag += kappa;
            }
        }
        row[i] = diag;
    };

    const int threads = std::max(1, options.threads);
    if (threads == 1 || n < 64) {
        for (std::size_t i = 0; i < n; ++i) assemble_row(i);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < n; i += static_cast<std::size_t>(threads)) {
                    assemble_row(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    return NonlocalOperator(grid, params, std::move(a), std::move(tail), kappa);
}

Field apply(const LinearOperator& op, const Field& w) {
    require_field(op.grid(), w, "apply");
    if (w.exterior_value != 0.0) {
        throw std::invalid_argument(
            "apply: field has nonzero exterior value; shift to the zero-exterior variable first");
    }
    Field out = make_field(op.grid());
    op.apply(w.values, out.values);
    return out;
}

double energy(const LinearOperator& op, const Field& w) {
    require_field(op.grid(), w, "energy");
    if (w.exterior_value != 0.0) {
        throw std::invalid_argument("energy: field must have zero exterior value");
    }
    std::vector<double> aw(w.values.size());
    op.apply(w.values, aw);
    const double quad = dot(w.values, aw);
    return op.energy_factor() * std::pow(op.grid().h(), op.grid().dim()) * quad;
}

}  // namespace frop
