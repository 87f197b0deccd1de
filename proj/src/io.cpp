#include <iga/io.hpp>

#include <iga/norms.hpp>

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <string>

namespace iga {

namespace {

constexpr Real two_pi = 6.2831853071795864769252867665590;

auto trim(const std::string& s) -> std::string {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
        ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
        --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(int line, const std::string& message) {
    throw io_error("config line " + std::to_string(line) + ": " + message);
}

auto parse_real(const std::string& value, int line, const std::string& key) -> Real {
    char* end = nullptr;
    const Real x = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        fail(line, "invalid value '" + value + "' for '" + key + "'");
    return x;
}

auto parse_int(const std::string& value, int line, const std::string& key) -> long {
    char* end = nullptr;
    const long x = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        fail(line, "invalid value '" + value + "' for '" + key + "'");
    return x;
}

auto parse_bool(const std::string& value, int line, const std::string& key) -> bool {
    if (value == "true" || value == "1")
        return true;
    if (value == "false" || value == "0")
        return false;
    fail(line, "invalid value '" + value + "' for '" + key + "' (expected true/false)");
}

auto valid_geometry(const std::string& name) -> bool {
    return name == "default" || name == "unit-square" || name == "centered-square" ||
           name == "two-pi-square" || name == "disk" || name == "annulus";
}

auto valid_bc(const std::string& name) -> bool {
    return name == "default" || name == "neumann-zero" || name == "neumann-exact";
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f)
            std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

auto open_for_write(const std::string& path) -> FilePtr {
    FilePtr f(std::fopen(path.c_str(), "w"));
    if (!f)
        throw io_error("cannot open '" + path + "' for writing");
    return f;
}

void close_checked(FilePtr f, const std::string& path) {
    const bool bad = std::ferror(f.get()) != 0;
    f.reset();
    if (bad)
        throw io_error("write failed for '" + path + "'");
}

}  // namespace

auto parse_config(const std::string& text) -> RunConfig {
    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream stream(text);
    std::string raw;
    int line = 0;

    while (std::getline(stream, raw)) {
        ++line;
        if (!raw.empty() && raw.back() == '\r')
            raw.pop_back();
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos)
            raw.erase(hash);
        const std::string stripped = trim(raw);
        if (stripped.empty())
            continue;

        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            fail(line, "expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            fail(line, "missing key before '='");
        if (value.empty())
            fail(line, "empty value for '" + key + "'");
        if (!seen.insert(key).second)
            fail(line, "duplicate key '" + key + "'");

        if (key == "problem") {
            cfg.problem = value;
        } else if (key == "gamma") {
            const Real g = parse_real(value, line, key);
            if (g <= 0.0)
                fail(line, "'gamma' must be positive");
            cfg.gamma = g;
        } else if (key == "omega") {
            cfg.omega = parse_real(value, line, key);
        } else if (key == "advection") {
            cfg.advection = parse_bool(value, line, key);
        } else if (key == "geometry") {
            if (!valid_geometry(value))
                fail(line, "unknown geometry '" + value + "'");
            cfg.geometry = value;
        } else if (key == "degree") {
            const long p = parse_int(value, line, key);
            if (p < 1 || p > 8)
                fail(line, "'degree' must be between 1 and 8");
            cfg.degree = static_cast<int>(p);
        } else if (key == "nx" || key == "ny") {
            const long n = parse_int(value, line, key);
            if (n < 1)
                fail(line, "'" + key + "' must be at least 1");
            (key == "nx" ? cfg.nx : cfg.ny) = static_cast<Index>(n);
        } else if (key == "dt") {
            const Real dt = parse_real(value, line, key);
            if (dt <= 0.0)
                fail(line, "'dt' must be positive");
            cfg.dt = dt;
        } else if (key == "t_end") {
            const Real t = parse_real(value, line, key);
            if (t < 0.0)
                fail(line, "'t_end' must be nonnegative");
            cfg.t_end = t;
        } else if (key == "n_substeps") {
            const long n = parse_int(value, line, key);
            if (n < 0)
                fail(line, "'n_substeps' must be nonnegative");
            cfg.n_substeps = static_cast<int>(n);
        } else if (key == "quad_points") {
            const long n = parse_int(value, line, key);
            if (n < 0 || n > 20)
                fail(line, "'quad_points' must be between 0 and 20");
            cfg.quad_points = static_cast<int>(n);
        } else if (key == "bc") {
            if (!valid_bc(value))
                fail(line, "unknown bc '" + value + "'");
            cfg.bc = value;
        } else if (key == "out_dir") {
            cfg.out_dir = value;
        } else if (key == "snapshot_every") {
            const long n = parse_int(value, line, key);
            if (n < 0)
                fail(line, "'snapshot_every' must be nonnegative");
            cfg.snapshot_every = static_cast<int>(n);
        } else if (key == "sample_n") {
            const long n = parse_int(value, line, key);
            if (n < 2)
                fail(line, "'sample_n' must be at least 2");
            cfg.sample_n = static_cast<Index>(n);
        } else {
            fail(line, "unknown key '" + key + "'");
        }
    }
    return cfg;
}

auto load_config(const std::string& path) -> RunConfig {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot read config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

auto serialize_config(const RunConfig& config) -> std::string {
    std::string out;
    char buf[64];
    auto emit = [&out](const std::string& key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    auto real_str = [&buf](Real x) {
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return std::string(buf);
    };

    if (!config.problem.empty())
        emit("problem", config.problem);
    if (config.gamma)
        emit("gamma", real_str(*config.gamma));
    if (config.omega)
        emit("omega", real_str(*config.omega));
    if (config.advection)
        emit("advection", *config.advection ? "true" : "false");
    if (config.geometry != "default")
        emit("geometry", config.geometry);
    if (config.degree > 0)
        emit("degree", std::to_string(config.degree));
    if (config.nx > 0)
        emit("nx", std::to_string(config.nx));
    if (config.ny > 0)
        emit("ny", std::to_string(config.ny));
    if (config.dt > 0.0)
        emit("dt", real_str(config.dt));
    if (config.t_end >= 0.0)
        emit("t_end", real_str(config.t_end));
    if (config.n_substeps > 0)
        emit("n_substeps", std::to_string(config.n_substeps));
    if (config.quad_points > 0)
        emit("quad_points", std::to_string(config.quad_points));
    if (config.bc != "default")
        emit("bc", config.bc);
    if (config.out_dir != "out")
        emit("out_dir", config.out_dir);
    if (config.snapshot_every > 0)
        emit("snapshot_every", std::to_string(config.snapshot_every));
    if (config.sample_n > 0)
        emit("sample_n", std::to_string(config.sample_n));
    return out;
}

auto resolve_run(const RunConfig& config) -> ResolvedRun {
    ResolvedRun run;
    run.problem = make_problem(config.problem, config.gamma.value_or(100.0),
                               config.advection.value_or(false), config.omega.value_or(8.0));

    if (config.geometry != "default") {
        if (!valid_geometry(config.geometry))
            throw argument_error("unknown geometry '" + config.geometry + "'");
        const std::string& g = config.geometry;
        if (g == "unit-square")
            run.problem.make_geometry = [] { return make_rectangle(0.0, 1.0, 0.0, 1.0); };
        else if (g == "centered-square")
            run.problem.make_geometry = [] { return make_rectangle(-0.5, 0.5, -0.5, 0.5); };
        else if (g == "two-pi-square")
            run.problem.make_geometry = [] { return make_rectangle(0.0, two_pi, 0.0, two_pi); };
        else if (g == "disk")
            run.problem.make_geometry = [] { return make_disk({0.0, 0.0}, 1.0); };
        else if (g == "annulus")
            run.problem.make_geometry = [] { return make_annulus({0.0, 0.0}, 0.5, 1.0); };
        run.problem.geometry_name = g;
    }

    run.degree = config.degree > 0 ? config.degree : run.problem.default_degree;
    run.nx = config.nx > 0 ? config.nx : static_cast<Index>(run.problem.default_elements);
    run.ny = config.ny > 0 ? config.ny : run.nx;

    run.solver.dt = config.dt > 0.0 ? config.dt : run.problem.default_dt;
    run.solver.t_end = config.t_end >= 0.0 ? config.t_end : run.problem.default_t_end;
    run.solver.n_substeps = config.n_substeps;
    run.solver.quad_points = config.quad_points;
    run.solver.snapshot_every = config.snapshot_every;
    if (config.bc == "neumann-zero")
        run.solver.bc = BcKind::neumann_zero;
    else if (config.bc == "neumann-exact")
        run.solver.bc = BcKind::neumann_exact;
    else if (config.bc != "default")
        throw argument_error("unknown bc '" + config.bc + "'");

    run.sample_n = config.sample_n;
    run.out_dir = config.out_dir;
    return run;
}

void write_snapshot(const Mesh& mesh, const VectorX& u, const VectorX& v, Index sample_n,
                    const std::string& vtk_path, const std::string& csv_path) {
    const FieldSample su = sample_field(mesh, u, sample_n);
    FieldSample sv;
    const bool have_v = v.size() > 0;
    if (have_v)
        sv = sample_field(mesh, v, sample_n);

    const Index n = sample_n;
    const Index total = n * n;

    {
        FilePtr f = open_for_write(vtk_path);
        std::fprintf(f.get(), "# vtk DataFile Version 3.0\n");
        std::fprintf(f.get(), "field snapshot\n");
        std::fprintf(f.get(), "ASCII\n");
        std::fprintf(f.get(), "DATASET STRUCTURED_GRID\n");
        std::fprintf(f.get(), "DIMENSIONS %lld %lld 1\n", static_cast<long long>(n),
                     static_cast<long long>(n));
        std::fprintf(f.get(), "POINTS %lld double\n", static_cast<long long>(total));
        for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < n; ++i)
                std::fprintf(f.get(), "%.12e %.12e 0.0\n", su.x(i, j), su.y(i, j));
        std::fprintf(f.get(), "POINT_DATA %lld\n", static_cast<long long>(total));
        std::fprintf(f.get(), "SCALARS u double 1\nLOOKUP_TABLE default\n");
        for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < n; ++i)
                std::fprintf(f.get(), "%.12e\n", su.value(i, j));
        std::fprintf(f.get(), "SCALARS v double 1\nLOOKUP_TABLE default\n");
        for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < n; ++i)
                std::fprintf(f.get(), "%.12e\n", have_v ? sv.value(i, j) : 0.0);
        close_checked(std::move(f), vtk_path);
    }

    {
        FilePtr f = open_for_write(csv_path);
        std::fprintf(f.get(), "x,y,u,v\n");
        for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < n; ++i)
                std::fprintf(f.get(), "%.12e,%.12e,%.12e,%.12e\n", su.x(i, j), su.y(i, j),
                             su.value(i, j), have_v ? sv.value(i, j) : 0.0);
        close_checked(std::move(f), csv_path);
    }
}

}  // namespace iga
