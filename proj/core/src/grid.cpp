#include "frop/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace frop {

Domain Domain::interval(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("Domain::interval: requires a < b");
    Domain d;
    d.kind_ = DomainKind::interval;
    d.lo_ = {a, 0.0};
    d.hi_ = {b, 0.0};
    return d;
}

Domain Domain::rectangle(double ax, double bx, double ay, double by) {
    if (!(ax < bx) || !(ay < by)) {
        throw std::invalid_argument("Domain::rectangle: requires ax < bx and ay < by");
    }
    Domain d;
    d.kind_ = DomainKind::rectangle;
    d.lo_ = {ax, ay};
    d.hi_ = {bx, by};
    return d;
}

Domain Domain::disk(double cx, double cy, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("Domain::disk: requires radius > 0");
    Domain d;
    d.kind_ = DomainKind::disk;
    d.lo_ = {cx - radius, cy - radius};
    d.hi_ = {cx + radius, cy + radius};
    d.cx_ = cx;
    d.cy_ = cy;
    d.radius_ = radius;
    return d;
}

double Domain::measure() const noexcept {
    switch (kind_) {
        case DomainKind::interval: return hi_[0] - lo_[0];
        case DomainKind::rectangle: return (hi_[0] - lo_[0]) * (hi_[1] - lo_[1]);
        case DomainKind::disk: return 3.14159265358979323846 * radius_ * radius_;
    }
    return 0.0;
}

double Domain::diameter() const noexcept {
    switch (kind_) {
        case DomainKind::interval: return hi_[0] - lo_[0];
        case DomainKind::rectangle: return std::hypot(hi_[0] - lo_[0], hi_[1] - lo_[1]);
        case DomainKind::disk: return 2.0 * radius_;
    }
    return 0.0;
}

bool Domain::contains(Point p) const noexcept {
    switch (kind_) {
        case DomainKind::interval: return p.x > lo_[0] && p.x < hi_[0];
        case DomainKind::rectangle:
            return p.x > lo_[0] && p.x < hi_[0] && p.y > lo_[1] && p.y < hi_[1];
        case DomainKind::disk: {
            const double dx = p.x - cx_, dy = p.y - cy_;
            return dx * dx + dy * dy < radius_ * radius_;
        }
    }
    return false;
}

Grid::Grid(const Domain& domain, int n_per_axis) : domain_(domain), n_(n_per_axis) {
    if (n_per_axis < 3) {
        throw std::invalid_argument("Grid: need at least 3 cells per axis, got " +
                                    std::to_string(n_per_axis));
    }
    h_ = (domain.hi(0) - domain.lo(0)) / n_;
    if (domain.dim() == 1) {
        ny_ = 1;
        cell_volume_ = h_;
    } else {
        // Square cells: the y extent must be an integer number of cells.
        const double span_y = domain.hi(1) - domain.lo(1);
        const double cells_y = span_y / h_;
        ny_ = static_cast<int>(std::lround(cells_y));
        if (ny_ < 3 || std::abs(ny_ * h_ - span_y) > 1e-9 * h_) {
            throw std::invalid_argument(
                "Grid: rectangle height must be an integer multiple (>= 3) of the cell size");
        }
        cell_volume_ = h_ * h_;
    }

    cell_to_interior_.assign(static_cast<std::size_t>(n_) * ny_, -1);
    for (int iy = 0; iy < ny_; ++iy) {
        for (int ix = 0; ix < n_; ++ix) {
            Point p{domain.lo(0) + (ix + 0.5) * h_,
                    domain.dim() == 2 ? domain.lo(1) + (iy + 0.5) * h_ : 0.0};
            if (domain.kind() != DomainKind::disk || domain.contains(p)) {
                cell_to_interior_[static_cast<std::size_t>(iy) * n_ + ix] =
                    static_cast<std::int32_t>(nodes_.size());
                nodes_.push_back(p);
                lattice_.push_back({ix, iy});
            }
        }
    }
    if (nodes_.empty()) throw std::invalid_argument("Grid: no interior cells");
}

std::ptrdiff_t Grid::interior_index(int ix, int iy) const noexcept {
    if (ix < 0 || ix >= n_ || iy < 0 || iy >= ny_) return -1;
    return cell_to_interior_[static_cast<std::size_t>(iy) * n_ + ix];
}

bool Grid::same_layout(const Grid& other) const noexcept {
    return dim() == other.dim() && n_ == other.n_ && ny_ == other.ny_ && h_ == other.h_ &&
           interior_count() == other.interior_count();
}

Grid build_grid(const Domain& domain, int n_per_axis) { return Grid(domain, n_per_axis); }

Field make_field(const Grid& grid, double value, double exterior_value) {
    Field f;
    f.values.assign(grid.interior_count(), value);
    f.exterior_value = exterior_value;
    return f;
}

void require_field(const Grid& grid, const Field& f, const char* where) {
    if (f.values.size() != grid.interior_count()) {
        throw std::invalid_argument(std::string(where) + ": field does not match grid");
    }
}

double integrate(const Grid& grid, const Field& f) {
    require_field(grid, f, "integrate");
    double s = 0.0;
    for (double v : f.values) s += v;
    return grid.cell_volume() * s;
}

std::pair<Field, Field> split_signs(const Field& f) {
    Field plus, minus;
    plus.values.reserve(f.values.size());
    minus.values.reserve(f.values.size());
    for (double v : f.values) {
        plus.values.push_back(std::max(v, 0.0));
        minus.values.push_back(std::max(-v, 0.0));
    }
    plus.exterior_value = std::max(f.exterior_value, 0.0);
    minus.exterior_value = std::max(-f.exterior_value, 0.0);
    return {std::move(plus), std::move(minus)};
}

}  // namespace frop
