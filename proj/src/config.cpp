#include "qring/config.hpp"

#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qring/error.hpp"

namespace qring {

namespace {

namespace pt = boost::property_tree;

void check_keys(const pt::ptree& section, const std::string& name, const std::set<std::string>& allowed)
{
    for (const auto& [key, value] : section) {
        if (!allowed.contains(key)) {
            std::ostringstream os;
            os << "unknown key '" << key << "' in [" << name << "]; expected one of:";
            for (const auto& k : allowed) {
                os << ' ' << k;
            }
            throw ConfigError(os.str());
        }
    }
}

template <class T>
void read(const pt::ptree& section, const std::string& section_name, const char* key, T& out)
{
    const auto node = section.get_child_optional(key);
    if (!node) {
        return;
    }
    try {
        out = node->get_value<T>();
    } catch (const pt::ptree_error&) {
        throw ConfigError("[" + section_name + "] " + key + ": cannot parse '" + node->data() + "'");
    }
}

} // namespace

std::pair<double, double> parse_window(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ConfigError("window must look like LO:HI, got '" + text + "'");
    }
    try {
        std::size_t used_lo = 0, used_hi = 0;
        const std::string lo_text = text.substr(0, colon);
        const std::string hi_text = text.substr(colon + 1);
        const double lo = std::stod(lo_text, &used_lo);
        const double hi = std::stod(hi_text, &used_hi);
        if (used_lo != lo_text.size() || used_hi != hi_text.size() || !(lo < hi) || lo < 0.0) {
            throw std::invalid_argument("window");
        }
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw ConfigError("window must be LO:HI with 0 <= LO < HI, got '" + text + "'");
    }
}

RunConfig load_config(const std::string& path)
{
    pt::ptree tree;
    try {
        pt::read_ini(path, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("cannot read config '" + path + "': " + e.message());
    }
    check_keys(tree, "top level", {"physical", "dimensionless", "solver"});

    RunConfig cfg;
    const auto phys = tree.get_child_optional("physical");
    const auto dimless = tree.get_child_optional("dimensionless");
    if (phys && dimless) {
        throw ConfigError("config '" + path + "' has both [physical] and [dimensionless]; keep one");
    }
    if (phys) {
        check_keys(*phys, "physical",
                   {"mass_ratio", "g_factor", "rho_i", "rho_o", "depth_V", "field_B", "rashba_aR"});
        PhysicalConfig pc = default_physical();
        read(*phys, "physical", "mass_ratio", pc.mass_ratio);
        read(*phys, "physical", "g_factor", pc.g_factor);
        read(*phys, "physical", "rho_i", pc.rho_i);
        read(*phys, "physical", "rho_o", pc.rho_o);
        read(*phys, "physical", "depth_V", pc.depth_V);
        read(*phys, "physical", "field_B", pc.field_B);
        read(*phys, "physical", "rashba_aR", pc.rashba_aR);
        pc.validate();
        cfg.physical = pc;
        cfg.params = to_dimensionless(pc);
    }
    if (dimless) {
        check_keys(*dimless, "dimensionless", {"v", "a", "b", "s", "r_i"});
        read(*dimless, "dimensionless", "v", cfg.params.v);
        read(*dimless, "dimensionless", "a", cfg.params.a);
        read(*dimless, "dimensionless", "b", cfg.params.b);
        read(*dimless, "dimensionless", "s", cfg.params.s);
        read(*dimless, "dimensionless", "r_i", cfg.params.r_i);
    }
    if (const auto solver = tree.get_child_optional("solver")) {
        check_keys(*solver, "solver", {"de", "window", "levels", "jobs"});
        read(*solver, "solver", "de", cfg.solver.de);
        read(*solver, "solver", "levels", cfg.solver.levels);
        read(*solver, "solver", "jobs", cfg.solver.jobs);
        std::string window;
        read(*solver, "solver", "window", window);
        if (!window.empty()) {
            std::tie(cfg.solver.e_lo, cfg.solver.e_hi) = parse_window(window);
        }
        if (!(cfg.solver.de > 0.0)) {
            throw ConfigError("[solver] de must be positive");
        }
    }
    cfg.params.validate();
    return cfg;
}

} // namespace qring
