#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace frop {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

enum class DomainKind { interval, rectangle, disk };

/// Bounded computational domain: an interval in 1D, an axis-aligned
/// rectangle, or a disk (realized as a mask inside its bounding square).
class Domain {
public:
    static Domain interval(double a, double b);
    static Domain rectangle(double ax, double bx, double ay, double by);
    static Domain disk(double cx, double cy, double radius);

    DomainKind kind() const noexcept { return kind_; }
    int dim() const noexcept { return kind_ == DomainKind::interval ? 1 : 2; }

    /// Continuum measure |D| (length, area, or π r²).
    double measure() const noexcept;
    double diameter() const noexcept;

    // Bounding box, axis = 0 or 1.
    double lo(int axis) const { return lo_[axis]; }
    double hi(int axis) const { return hi_[axis]; }

    double disk_cx() const noexcept { return cx_; }
    double disk_cy() const noexcept { return cy_; }
    double disk_radius() const noexcept { return radius_; }

    bool contains(Point p) const noexcept;

private:
    Domain() = default;
    DomainKind kind_ = DomainKind::interval;
    std::array<double, 2> lo_{0.0, 0.0};
    std::array<double, 2> hi_{1.0, 0.0};
    double cx_ = 0.0, cy_ = 0.0, radius_ = 0.0;
};

/// Uniform cell-centered grid over the bounding box of the domain, keeping
/// only cells whose center lies in D. Cell-centered nodes keep every
/// node-to-node kernel interaction nonsingular and make the exterior-tail
/// geometry simple.
class Grid {
public:
    Grid(const Domain& domain, int n_per_axis);

    const Domain& domain() const noexcept { return domain_; }
    int dim() const noexcept { return domain_.dim(); }
    int n_per_axis() const noexcept { return n_; }
    double h() const noexcept { return h_; }
    double cell_volume() const noexcept { return cell_volume_; }

    std::size_t interior_count() const noexcept { return nodes_.size(); }
    /// Discrete measure of the interior, interior_count · h^n. Used for all
    /// budget arithmetic so that constant fields integrate exactly.
    double interior_measure() const noexcept {
        return static_cast<double>(nodes_.size()) * cell_volume_;
    }

    Point node(std::size_t i) const { return nodes_[i]; }
    std::span<const Point> nodes() const noexcept { return nodes_; }

    // Lattice bookkeeping. Cells are indexed (ix, iy) over the bounding box,
    // row-major with ix fastest; iy is 0 in 1D.
    int cells_x() const noexcept { return n_; }
    int cells_y() const noexcept { return ny_; }
    std::array<int, 2> lattice_of(std::size_t node) const { return lattice_[node]; }
    /// Interior index for lattice cell (ix, iy), or -1 if the cell is
    /// exterior or out of range.
    std::ptrdiff_t interior_index(int ix, int iy) const noexcept;

    bool same_layout(const Grid& other) const noexcept;

private:
    Domain domain_;
    int n_ = 0;    // cells along x
    int ny_ = 1;   // cells along y (1 in 1D)
    double h_ = 0.0;
    double cell_volume_ = 0.0;
    std::vector<Point> nodes_;
    std::vector<std::array<int, 2>> lattice_;
    std::vector<std::int32_t> cell_to_interior_;
};

/// build_grid(domain, N) with N >= 3 cells per axis.
Grid build_grid(const Domain& domain, int n_per_axis);

/// Values on the interior nodes of a grid plus a constant exterior value on
/// D^c (0 for Dirichlet states, α for obstacle states).
struct Field {
    std::vector<double> values;
    double exterior_value = 0.0;
};

Field make_field(const Grid& grid, double value = 0.0, double exterior_value = 0.0);

/// Midpoint rule: h^n Σ values.
double integrate(const Grid& grid, const Field& f);

/// Splits f into nonnegative parts with plus - minus = f and plus·minus = 0
/// pointwise, exterior value included.
std::pair<Field, Field> split_signs(const Field& f);

void require_field(const Grid& grid, const Field& f, const char* where);

}  // namespace frop
