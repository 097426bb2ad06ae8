#include "frop/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace frop {

namespace {

using nlohmann::json;

void require_stream(const std::ios& s, const std::filesystem::path& path, const char* what) {
    if (!s) {
        throw std::runtime_error(std::string(what) + ": cannot access " + path.string());
    }
}

json domain_to_json(const Domain& d) {
    json j;
    switch (d.kind()) {
        case DomainKind::interval:
            j["domain_kind"] = "interval";
            j["domain_a"] = d.lo(0);
            j["domain_b"] = d.hi(0);
            break;
        case DomainKind::rectangle:
            j["domain_kind"] = "rectangle";
            j["domain_ax"] = d.lo(0);
            j["domain_bx"] = d.hi(0);
            j["domain_ay"] = d.lo(1);
            j["domain_by"] = d.hi(1);
            break;
        case DomainKind::disk:
            j["domain_kind"] = "disk";
            j["domain_cx"] = d.disk_cx();
            j["domain_cy"] = d.disk_cy();
            j["domain_radius"] = d.disk_radius();
            break;
    }
    return j;
}

Domain domain_from_json(const json& j) {
    const std::string kind = j.at("domain_kind").get<std::string>();
    if (kind == "interval") {
        return Domain::interval(j.at("domain_a").get<double>(), j.at("domain_b").get<double>());
    }
    if (kind == "rectangle") {
        return Domain::rectangle(j.at("domain_ax").get<double>(), j.at("domain_bx").get<double>(),
                                 j.at("domain_ay").get<double>(), j.at("domain_by").get<double>());
    }
    if (kind == "disk") {
        return Domain::disk(j.at("domain_cx").get<double>(), j.at("domain_cy").get<double>(),
                            j.at("domain_radius").get<double>());
    }
    throw std::runtime_error("unknown domain kind in JSON: " + kind);
}

json write_json_common(const RunParameters& p) {
    json j = domain_to_json(p.domain);
    j["n"] = p.n;
    j["s"] = p.kernel.s;
    j["normalized"] = p.kernel.normalized;
    j["beta"] = p.beta;
    return j;
}

RunParameters read_json_common(const json& j) {
    RunParameters p;
    p.domain = domain_from_json(j);
    p.n = j.at("n").get<int>();
    p.kernel.dim = p.domain.dim();
    p.kernel.s = j.at("s").get<double>();
    p.kernel.normalized = j.at("normalized").get<bool>();
    p.beta = j.value("beta", 0.0);
    return p;
}

void dump_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    require_stream(out, path, "dump_json");
    out << j.dump(2) << "\n";
}

json slurp_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    require_stream(in, path, "slurp_json");
    json j;
    in >> j;
    return j;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_field_csv(const std::filesystem::path& path, const Grid& grid, const Field& f) {
    require_field(grid, f, "write_field_csv");
    std::ofstream out(path);
    require_stream(out, path, "write_field_csv");
    out << (grid.dim() == 1 ? "x,value\n" : "x,y,value\n");
    for (std::size_t i = 0; i < grid.interior_count(); ++i) {
        const Point p = grid.node(i);
        out << format_double(p.x) << ',';
        if (grid.dim() == 2) out << format_double(p.y) << ',';
        out << format_double(f.values[i]) << '\n';
    }
}

Field read_field_csv(const std::filesystem::path& path, const Grid& grid) {
    std::ifstream in(path);
    require_stream(in, path, "read_field_csv");
    std::string line;
    std::getline(in, line);  // header
    Field f = make_field(grid);
    std::size_t i = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (i >= grid.interior_count()) {
            throw std::runtime_error("read_field_csv: more rows than interior nodes in " +
                                     path.string());
        }
        const auto last_comma = line.rfind(',');
        if (last_comma == std::string::npos) {
            throw std::runtime_error("read_field_csv: malformed row in " + path.string());
        }
        f.values[i++] = std::strtod(line.c_str() + last_comma + 1, nullptr);
    }
    if (i != grid.interior_count()) {
        throw std::runtime_error("read_field_csv: expected " +
                                 std::to_string(grid.interior_count()) + " rows, got " +
                                 std::to_string(i) + " in " + path.string());
    }
    return f;
}

void write_operator_binary(const std::filesystem::path& path, const NonlocalOperator& op) {
    std::ofstream out(path, std::ios::binary);
    require_stream(out, path, "write_operator_binary");
    const char magic[4] = {'F', 'L', 'A', 'P'};
    const std::uint32_t n = static_cast<std::uint32_t>(op.matrix().size());
    const std::uint32_t reserved = 0;
    char header[16] = {};
    std::memcpy(header, magic, 4);
    std::memcpy(header + 4, &n, 4);
    std::memcpy(header + 8, &reserved, 4);
    out.write(header, sizeof(header));
    const auto& data = op.matrix().data();
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(double)));
}

void save_rearrangement(const std::filesystem::path& dir, const RunParameters& params,
                        const RearrangementSolution& sol) {
    std::filesystem::create_directories(dir);
    const Grid grid = build_grid(params.domain, params.n);
    json j = write_json_common(params);
    j["alpha"] = sol.alpha;
    j["objective"] = sol.objective;
    j["gap"] = sol.gap;
    j["iterations"] = sol.iterations;
    j["initial_objective"] = sol.initial_objective;
    dump_json(dir / "rearrangement.json", j);
    write_field_csv(dir / "f_hat.csv", grid, sol.f_hat);
    write_field_csv(dir / "u_hat.csv", grid, sol.u_hat);
}

LoadedRearrangement load_rearrangement(const std::filesystem::path& dir) {
    const json j = slurp_json(dir / "rearrangement.json");
    RunParameters params = read_json_common(j);
    Grid grid = build_grid(params.domain, params.n);
    RearrangementSolution sol;
    sol.alpha = j.at("alpha").get<double>();
    sol.objective = j.at("objective").get<double>();
    sol.gap = j.at("gap").get<double>();
    sol.iterations = j.at("iterations").get<long>();
    sol.initial_objective = j.value("initial_objective", 0.0);
    sol.f_hat = read_field_csv(dir / "f_hat.csv", grid);
    sol.u_hat = read_field_csv(dir / "u_hat.csv", grid);
    return LoadedRearrangement{std::move(params), std::move(sol), std::move(grid)};
}

void save_obstacle(const std::filesystem::path& dir, const RunParameters& params,
                   const ObstacleSolution& sol, const Grid& grid) {
    std::filesystem::create_directories(dir);
    json j = write_json_common(params);
    j["alpha"] = sol.alpha;
    j["objective"] = sol.objective;
    j["iterations"] = sol.iterations;
    j["contact_band"] = sol.contact_band;
    j["nonlinear_valid"] = sol.nonlinear_valid;
    j["subharmonic_max_apply"] = sol.subharmonic.max_apply;
    j["subharmonic_max_apply_positive"] = sol.subharmonic.max_apply_positive;
    j["subharmonic_pass"] = sol.subharmonic.subharmonic;
    dump_json(dir / "obstacle.json", j);
    write_field_csv(dir / "state.csv", grid, sol.u);
    write_field_csv(dir / "residual_lower.csv", grid, sol.residual_lower);
    write_field_csv(dir / "residual_upper.csv", grid, sol.residual_upper);
    write_field_csv(dir / "nonlinear_residual.csv", grid, sol.nonlinear_residual);

    std::ofstream fb(dir / "free_boundary.csv");
    require_stream(fb, dir / "free_boundary.csv", "save_obstacle");
    fb << "node_index\n";
    for (std::size_t i : free_boundary_cells(grid, sol.u, sol.contact_band)) {
        fb << i << '\n';
    }
}

void save_sweep(const std::filesystem::path& dir, const SweepTable& table) {
    std::filesystem::create_directories(dir);

    std::ofstream csv(dir / "sweep.csv");
    require_stream(csv, dir / "sweep.csv", "save_sweep");
    csv << "s,alpha,objective,state_dist,frac_measure";
    for (std::size_t k = 0; k < table.probe_centers.size(); ++k) {
        csv << ",density_test_" << k + 1;
    }
    csv << ",failed\n";
    for (const auto& row : table.rows) {
        csv << format_double(row.s) << ',' << format_double(row.alpha) << ','
            << format_double(row.objective) << ',' << format_double(row.state_dist) << ','
            << format_double(row.frac_measure);
        for (std::size_t k = 0; k < table.probe_centers.size(); ++k) {
            csv << ',' << (k < row.density_tests.size() ? format_double(row.density_tests[k])
                                                        : std::string("nan"));
        }
        csv << ',' << (row.failed ? 1 : 0) << '\n';
    }

    json j;
    j["local_alpha"] = table.local_alpha;
    j["local_objective"] = table.local_objective;
    j["local_frac_measure"] = table.local_frac_measure;
    j["probe_width"] = table.probe_width;
    j["probe_centers"] = table.probe_centers;
    json rows = json::array();
    for (const auto& row : table.rows) {
        json r;
        r["s"] = row.s;
        r["alpha"] = row.alpha;
        r["objective"] = row.objective;
        r["state_dist"] = row.state_dist;
        r["frac_measure"] = row.frac_measure;
        r["density_tests"] = row.density_tests;
        r["failed"] = row.failed;
        if (row.failed) r["error"] = row.error;
        rows.push_back(r);
    }
    j["rows"] = rows;
    dump_json(dir / "sweep.json", j);

    const auto write_metric = [&](const std::string& name, auto getter) {
        std::ofstream out(dir / (name + ".dat"));
        require_stream(out, dir / (name + ".dat"), "save_sweep");
        for (const auto& row : table.rows) {
            if (row.failed) continue;
            out << format_double(row.s) << ' ' << format_double(getter(row)) << '\n';
        }
    };
    write_metric("state_dist", [](const SweepRow& r) { return r.state_dist; });
    write_metric("objective", [](const SweepRow& r) { return r.objective; });
    write_metric("objective_gap_to_local", [&](const SweepRow& r) {
        return std::abs(r.objective - table.local_objective);
    });
    write_metric("frac_measure", [](const SweepRow& r) { return r.frac_measure; });
    write_metric("alpha", [](const SweepRow& r) { return r.alpha; });
}

}  // namespace frop
