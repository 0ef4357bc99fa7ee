#include "qring/cli.hpp"

#include <algorithm>
#include <cmath>
#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qring/error.hpp"
#include "qring/matching.hpp"
#include "qring/oracle.hpp"
#include "qring/parallel.hpp"
#include "qring/tables.hpp"

namespace qring::cli {

namespace {

using json = nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_solver = 2;

std::atomic<bool> interrupted{false};

extern "C" void on_sigint(int) { interrupted.store(true); }

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::string fmt(double x, int digits = 10)
{
    std::ostringstream os;
    os << std::setprecision(digits) << x;
    return os.str();
}

/// Output sink: a file given by --out, else stdout.
class Sink {
public:
    explicit Sink(const std::string& path)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) {
                throw ConfigError("cannot write '" + path + "'");
            }
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

struct Common {
    std::string config;
    std::string m_list;
    std::string window;
    double de = 0.0;
    int levels = -1;
    int jobs = -1;
    std::string out;
    std::string format = "csv";
    std::optional<double> v, a, b, s, r_i;
};

void add_common(CLI::App* sub, Common& c, bool with_m = true)
{
    sub->add_option("--config", c.config, "INI file with a [physical] or [dimensionless] block");
    if (with_m) {
        sub->add_option("--m", c.m_list, "angular indices, e.g. -2,-1,0,1 or -2:1");
    }
    sub->add_option("--window", c.window, "energy window LO:HI (default 0:v)");
    sub->add_option("--de", c.de, "scan step (default 0.05)");
    sub->add_option("--levels", c.levels, "levels per m (0 = all in window)");
    sub->add_option("--jobs", c.jobs, "worker threads (default: all cores)");
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--v", c.v, "well depth");
    sub->add_option("--a", c.a, "Rashba strength");
    sub->add_option("--b", c.b, "magnetic field");
    sub->add_option("--s", c.s, "Zeeman factor");
    sub->add_option("--r-i", c.r_i, "inner radius over outer radius");
}

RunConfig resolve(const Common& c)
{
    RunConfig cfg;
    if (!c.config.empty()) {
        cfg = load_config(c.config);
    }
    if (c.v) {
        cfg.params.v = *c.v;
    }
    if (c.a) {
        cfg.params.a = *c.a;
    }
    if (c.b) {
        cfg.params.b = *c.b;
    }
    if (c.s) {
        cfg.params.s = *c.s;
    }
    if (c.r_i) {
        cfg.params.r_i = *c.r_i;
    }
    if (!c.window.empty()) {
        std::tie(cfg.solver.e_lo, cfg.solver.e_hi) = parse_window(c.window);
    }
    if (c.de != 0.0) {
        if (!(c.de > 0.0)) {
            throw ConfigError("--de must be positive");
        }
        cfg.solver.de = c.de;
    }
    if (c.levels >= 0) {
        cfg.solver.levels = c.levels;
    }
    if (c.jobs >= 0) {
        cfg.solver.jobs = c.jobs;
    }
    cfg.params.validate();
    return cfg;
}

std::optional<double> energy_unit(const RunConfig& cfg)
{
    if (!cfg.physical) {
        return std::nullopt;
    }
    return unit_scales(cfg.physical->mass_ratio, cfg.physical->rho_o).energy_meV;
}

matching::SolveOptions solve_options(const SolverSettings& s, int max_levels)
{
    matching::SolveOptions o;
    o.e_lo = s.e_lo;
    o.e_hi = s.e_hi;
    o.de = s.de;
    o.max_levels = max_levels;
    return o;
}

struct MResult {
    int m = 0;
    std::vector<matching::BoundState> states;
    std::vector<double> fd; // matched finite-difference energies, NaN if none
    std::string error;
};

int cmd_levels(const Common& c, bool with_oracle, int fd_points, double fd_rmax)
{
    const RunConfig cfg = resolve(c);
    const auto ms = parse_m_list(c.m_list.empty() ? "-2:1" : c.m_list);
    const auto unit = energy_unit(cfg);
    std::vector<MResult> results(ms.size());
    parallel_for(
        ms.size(), resolve_jobs(cfg.solver.jobs),
        [&](std::size_t i) {
            auto& r = results[i];
            r.m = ms[i];
            try {
                r.states = matching::solve_levels({r.m}, cfg.params, solve_options(cfg.solver, cfg.solver.levels));
                if (with_oracle && !r.states.empty()) {
                    const double top = r.states.back().e;
                    oracle::FdGrid grid{fd_points, fd_rmax};
                    const int count = oracle::fd_count_below({r.m}, cfg.params, grid, std::min(cfg.params.v, top + 1.0));
                    const auto fd = oracle::fd_spectrum({r.m}, cfg.params, grid, count, false);
                    for (const auto& s : r.states) {
                        double best = std::nan("");
                        for (const auto& l : fd) {
                            if (std::isnan(best) || std::abs(l.e - s.e) < std::abs(best - s.e)) {
                                best = l.e;
                            }
                        }
                        r.fd.push_back(best);
                    }
                }
            } catch (const std::exception& e) {
                r.error = e.what();
            }
        },
        &interrupted);

    Sink sink(c.out);
    auto& os = sink.stream();
    bool failed = false;
    if (c.format == "json") {
        json doc = json::array();
        for (const auto& r : results) {
            json entry{{"m", r.m}};
            if (!r.error.empty()) {
                entry["error"] = r.error;
                failed = true;
            }
            json levels = json::array();
            for (std::size_t k = 0; k < r.states.size(); ++k) {
                const auto& s = r.states[k];
                json l{{"level_index", s.level_index},
                       {"e", s.e},
                       {"block", matching::block_name(s.block)},
                       {"norm_check", s.norm_check},
                       {"continuity_residual", s.continuity_residual},
                       {"det_residual", s.det_residual},
                       {"imag_det_ratio", s.imag_det_ratio}};
                if (unit) {
                    l["e_meV"] = s.e * *unit;
                }
                if (with_oracle) {
                    l["e_fd"] = r.fd[k];
                    l["fd_rel_deviation"] = std::abs(r.fd[k] - s.e) / s.e;
                }
                levels.push_back(l);
            }
            entry["levels"] = levels;
            doc.push_back(entry);
        }
        os << doc.dump(2) << '\n';
    } else {
        os << "m,level_index,e";
        if (unit) {
            os << ",e_meV";
        }
        os << ",norm_check,continuity_residual,det_residual,imag_det_ratio";
        if (with_oracle) {
            os << ",e_fd,fd_rel_deviation";
        }
        os << '\n';
        for (const auto& r : results) {
            if (!r.error.empty()) {
                std::cerr << "m=" << r.m << ": " << r.error << '\n';
                failed = true;
            }
            for (std::size_t k = 0; k < r.states.size(); ++k) {
                const auto& s = r.states[k];
                os << s.m << ',' << s.level_index << ',' << fmt(s.e, 12);
                if (unit) {
                    os << ',' << fmt(s.e * *unit, 10);
                }
                os << ',' << fmt(s.norm_check, 6) << ',' << fmt(s.continuity_residual, 3) << ','
                   << fmt(s.det_residual, 3) << ',' << fmt(s.imag_det_ratio, 3);
                if (with_oracle) {
                    os << ',' << fmt(r.fd[k], 10) << ',' << fmt(std::abs(r.fd[k] - s.e) / s.e, 3);
                }
                os << '\n';
            }
        }
    }
    if (interrupted.load()) {
        os << "# truncated\n";
        return exit_solver;
    }
    return failed ? exit_solver : exit_ok;
}

int cmd_sweep(const Common& c, const std::string& axis, double start, double stop, double step)
{
    const RunConfig cfg = resolve(c);
    SweepSpec spec;
    spec.axis = parse_axis(axis);
    spec.start = start;
    spec.stop = stop;
    spec.step = step;
    spec.fixed = cfg.params;
    spec.m_list = parse_m_list(c.m_list.empty() ? "-2:1" : c.m_list);
    spec.max_levels = c.levels >= 0 ? c.levels : (cfg.solver.levels > 0 ? cfg.solver.levels : 2);
    spec.validate();
    Sink sink(c.out);
    const auto result = run_sweep(spec, cfg.solver, resolve_jobs(cfg.solver.jobs), &interrupted);
    const auto unit = energy_unit(cfg);
    if (c.format == "json") {
        json doc = json::array();
        for (const auto& r : result.rows) {
            json row{{"axis_value", r.axis_value}, {"m", r.m}};
            if (r.error.empty()) {
                row["level_index"] = r.level_index;
                row["e"] = r.e;
                if (unit) {
                    row["e_meV"] = r.e * *unit;
                }
            } else {
                row["error"] = r.error;
            }
            doc.push_back(row);
        }
        json top{{"axis", axis_name(spec.axis)}, {"rows", doc}, {"truncated", result.truncated}};
        sink.stream() << top.dump(2) << '\n';
    } else {
        write_sweep_csv(sink.stream(), result, unit);
    }
    if (result.truncated || result.any_error()) {
        return exit_solver;
    }
    return exit_ok;
}

int cmd_table(const Common& c, int which)
{
    const auto& t = tables::table(which);
    const RunConfig cfg = resolve(c);
    struct Cell {
        std::vector<matching::BoundState> states;
        std::string error;
    };
    std::vector<Cell> cells(t.rows.size() * tables::table_m.size());
    parallel_for(
        cells.size(), resolve_jobs(cfg.solver.jobs),
        [&](std::size_t i) {
            const int row = static_cast<int>(i / tables::table_m.size());
            const int m = tables::table_m[i % tables::table_m.size()];
            try {
                SolverSettings s = cfg.solver;
                cells[i].states = matching::solve_levels({m}, tables::row_params(t, row), solve_options(s, 2));
            } catch (const std::exception& e) {
                cells[i].error = e.what();
            }
        },
        &interrupted);

    std::ostringstream csv;
    csv << t.axis << ",m,level,computed,published,rel_deviation,note\n";
    json doc = json::array();
    std::cout << "table " << t.id << ": " << t.axis << " varies, "
              << (t.id == 1 ? "v=400" : "r_i=0.5") << " a=1 b=1 s=-0.00737\n";
    std::cout << std::left << std::setw(7) << t.axis << std::setw(5) << "m" << std::setw(7) << "level"
              << std::setw(14) << "computed" << std::setw(12) << "published" << std::setw(11) << "rel_dev"
              << "note\n";
    bool failed = false;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const int row = static_cast<int>(i / tables::table_m.size());
        const int mi = static_cast<int>(i % tables::table_m.size());
        const int m = tables::table_m[mi];
        for (int level = 0; level < 2; ++level) {
            const int col = 2 * mi + level;
            const double published = t.values[row][col];
            std::string note;
            double computed = std::nan("");
            if (!cells[i].error.empty()) {
                note = "error: " + cells[i].error;
                failed = true;
            } else if (level < static_cast<int>(cells[i].states.size())) {
                computed = cells[i].states[level].e;
            } else {
                note = "level not found";
                failed = true;
            }
            const double dev = std::abs(computed - published) / published;
            if (dev > 1e-3) {
                note += note.empty() ? "exceeds 1e-3" : "; exceeds 1e-3";
            }
            if (const double other = tables::other_table_value(t, row, col); other != 0.0) {
                std::ostringstream n;
                n << (note.empty() ? "" : "; ") << "tables disagree on this cell: other table prints " << other
                  << " (rel_dev " << std::setprecision(2) << std::abs(computed - other) / other << ")";
                note += n.str();
            }
            std::cout << std::left << std::setw(7) << t.rows[row] << std::setw(5) << m << std::setw(7) << level + 1
                      << std::setw(14) << fmt(computed, 9) << std::setw(12) << published << std::setw(11)
                      << fmt(dev, 2) << note << '\n';
            csv << t.rows[row] << ',' << m << ',' << level + 1 << ',' << fmt(computed, 12) << ',' << published << ','
                << fmt(dev, 3) << ',' << csv_escape(note) << '\n';
            doc.push_back({{t.axis, t.rows[row]},
                           {"m", m},
                           {"level", level + 1},
                           {"computed", computed},
                           {"published", published},
                           {"rel_deviation", dev},
                           {"note", note}});
        }
    }
    if (!c.out.empty()) {
        Sink sink(c.out);
        if (c.format == "json") {
            sink.stream() << doc.dump(2) << '\n';
        } else {
            sink.stream() << csv.str();
        }
    }
    return failed || interrupted.load() ? exit_solver : exit_ok;
}

int cmd_wavefunction(const Common& c, int m, int level, int samples)
{
    const RunConfig cfg = resolve(c);
    if (level < 0 || samples < 2) {
        throw ConfigError("--level must be >= 0 and --samples >= 2");
    }
    const auto states = matching::solve_levels({m}, cfg.params, solve_options(cfg.solver, level + 1));
    if (level >= static_cast<int>(states.size())) {
        std::cerr << "level_index " << level << " out of range: " << states.size() << " level(s) found for m=" << m
                  << '\n';
        return exit_usage;
    }
    const auto& s = states[level];
    Sink sink(c.out);
    auto& os = sink.stream();
    json rows = json::array();
    if (c.format == "csv") {
        os << "r,u,w,density\n";
    }
    for (int k = 0; k <= samples; ++k) {
        const double r = s.r_cut * k / samples;
        const auto uw = matching::wavefunction(s, r);
        const double u = uw.u.real();
        const double w = uw.w.real();
        const double density = (u * u + w * w) * r;
        if (c.format == "csv") {
            os << fmt(r, 10) << ',' << fmt(u, 12) << ',' << fmt(w, 12) << ',' << fmt(density, 12) << '\n';
        } else {
            rows.push_back({r, u, w, density});
        }
    }
    if (c.format == "json") {
        json doc{{"m", m},
                 {"level_index", level},
                 {"e", s.e},
                 {"r_cut", s.r_cut},
                 {"columns", {"r", "u", "w", "density"}},
                 {"rows", rows}};
        os << doc.dump(1) << '\n';
    }
    return exit_ok;
}

} // namespace

Axis parse_axis(const std::string& name)
{
    if (name == "b") {
        return Axis::B;
    }
    if (name == "a") {
        return Axis::A;
    }
    if (name == "r_i") {
        return Axis::RI;
    }
    if (name == "v") {
        return Axis::V;
    }
    throw ConfigError("axis must be one of b, a, r_i, v (got '" + name + "')");
}

const char* axis_name(Axis axis)
{
    switch (axis) {
    case Axis::B:
        return "b";
    case Axis::A:
        return "a";
    case Axis::RI:
        return "r_i";
    case Axis::V:
        return "v";
    }
    return "?";
}

void SweepSpec::validate() const
{
    if (!(start < stop) || !(step > 0.0)) {
        throw ConfigError("sweep needs start < stop and step > 0");
    }
    if (m_list.empty()) {
        throw ConfigError("sweep needs at least one m");
    }
    if (max_levels < 1) {
        throw ConfigError("sweep needs --levels >= 1");
    }
    for (double x : {start, stop}) {
        at(x).validate();
    }
}

std::vector<double> SweepSpec::points() const
{
    std::vector<double> out;
    const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9));
    for (int k = 0; k <= n; ++k) {
        out.push_back(start + k * step);
    }
    return out;
}

RingParams SweepSpec::at(double x) const
{
    RingParams p = fixed;
    switch (axis) {
    case Axis::B:
        p.b = x;
        break;
    case Axis::A:
        p.a = x;
        break;
    case Axis::RI:
        p.r_i = x;
        break;
    case Axis::V:
        p.v = x;
        break;
    }
    return p;
}

bool SweepResult::any_error() const
{
    return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.error.empty(); });
}

SweepResult run_sweep(const SweepSpec& spec, const SolverSettings& solver, unsigned jobs,
                      const std::atomic<bool>* cancel)
{
    spec.validate();
    const auto xs = spec.points();
    const std::size_t nm = spec.m_list.size();
    std::vector<std::vector<SweepRow>> per_task(xs.size() * nm);
    std::vector<char> ran(per_task.size(), 0);
    parallel_for(
        per_task.size(), jobs,
        [&](std::size_t i) {
            const double x = xs[i / nm];
            const int m = spec.m_list[i % nm];
            auto& rows = per_task[i];
            try {
                const auto states = matching::solve_levels({m}, spec.at(x), solve_options(solver, spec.max_levels));
                for (const auto& s : states) {
                    rows.push_back({x, m, s.level_index, s.e, {}});
                }
            } catch (const std::exception& e) {
                rows.push_back({x, m, -1, std::nan(""), e.what()});
            }
            ran[i] = 1;
        },
        cancel);

    SweepResult result;
    for (std::size_t i = 0; i < per_task.size(); ++i) {
        if (!ran[i]) {
            result.truncated = true;
            continue;
        }
        result.rows.insert(result.rows.end(), per_task[i].begin(), per_task[i].end());
    }
    std::sort(result.rows.begin(), result.rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return std::tie(a.axis_value, a.m, a.level_index) < std::tie(b.axis_value, b.m, b.level_index);
    });
    return result;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result, std::optional<double> energy_unit_meV)
{
    const bool errors = result.any_error();
    os << "axis_value,m,level_index,e";
    if (energy_unit_meV) {
        os << ",e_meV";
    }
    if (errors) {
        os << ",error";
    }
    os << '\n';
    for (const auto& r : result.rows) {
        os << fmt(r.axis_value, 10) << ',' << r.m << ',';
        if (r.error.empty()) {
            os << r.level_index << ',' << fmt(r.e, 12);
            if (energy_unit_meV) {
                os << ',' << fmt(r.e * *energy_unit_meV, 10);
            }
            if (errors) {
                os << ',';
            }
        } else {
            os << ',';
            if (energy_unit_meV) {
                os << ',';
            }
            os << ',' << csv_escape(r.error);
        }
        os << '\n';
    }
    if (result.truncated) {
        os << "# truncated: interrupted before all points finished\n";
    }
}

std::vector<int> parse_m_list(const std::string& text)
{
    std::vector<int> out;
    auto to_int = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(s, &used);
            if (used != s.size()) {
                throw std::invalid_argument(s);
            }
            return v;
        } catch (const std::logic_error&) {
            throw ConfigError("bad m list '" + text + "'; use e.g. -2,-1,0,1 or -2:1");
        }
    };
    if (const auto colon = text.find(':'); colon != std::string::npos) {
        const int lo = to_int(text.substr(0, colon));
        const int hi = to_int(text.substr(colon + 1));
        if (lo > hi) {
            throw ConfigError("bad m range '" + text + "'");
        }
        for (int m = lo; m <= hi; ++m) {
            out.push_back(m);
        }
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(to_int(item));
        }
    }
    if (out.empty()) {
        throw ConfigError("empty m list");
    }
    return out;
}

int run(int argc, char** argv)
{
    CLI::App app{"Bound states of an electron in a two-dimensional ring with Rashba coupling"};
    app.require_subcommand(1);

    Common c_levels, c_sweep, c_table, c_wave;

    auto* levels = app.add_subcommand("levels", "energies for each m in a window");
    add_common(levels, c_levels);
    bool oracle = false;
    int fd_points = 4000;
    double fd_rmax = 3.0;
    levels->add_flag("--oracle", oracle, "cross-check with the finite-difference solver");
    levels->add_option("--fd-points", fd_points, "finite-difference points per component");
    levels->add_option("--fd-rmax", fd_rmax, "finite-difference outer radius");

    auto* sweep = app.add_subcommand("sweep", "levels along one parameter axis, as CSV");
    add_common(sweep, c_sweep);
    std::string axis = "b";
    double start = 0.1, stop = 4.0, step = 0.05;
    sweep->add_option("--axis", axis, "b, a, r_i or v");
    sweep->add_option("--start", start, "first axis value");
    sweep->add_option("--stop", stop, "last axis value, included when on the grid");
    sweep->add_option("--step", step, "axis increment");

    auto* table = app.add_subcommand("table", "recompute a published table");
    add_common(table, c_table, false);
    int which = 1;
    table->add_option("which,--which", which, "1 (r_i varies) or 2 (v varies)")->required()->check(CLI::Range(1, 2));

    auto* wave = app.add_subcommand("wavefunction", "radial spinor components of one level");
    add_common(wave, c_wave, false);
    int wave_m = 0, wave_level = 0, samples = 2000;
    wave->add_option("--m", wave_m, "angular index")->required();
    wave->add_option("--level", wave_level, "level index within m (0 = lowest)");
    wave->add_option("--samples", samples, "number of radial intervals");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    interrupted.store(false);
    std::signal(SIGINT, on_sigint);
    try {
        if (*levels) {
            if (levels->count("--m") && c_levels.m_list.empty()) {
                throw ConfigError("empty m list");
            }
            return cmd_levels(c_levels, oracle, fd_points, fd_rmax);
        }
        if (*sweep) {
            return cmd_sweep(c_sweep, axis, start, stop, step);
        }
        if (*table) {
            return cmd_table(c_table, which);
        }
        if (*wave) {
            return cmd_wavefunction(c_wave, wave_m, wave_level, samples);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return exit_solver;
    }
    return exit_usage;
}

} // namespace qring::cli
