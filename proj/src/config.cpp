#include "plasmafb/config.hpp"

#include <fstream>
#include <sstream>

namespace pfb {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for '" + key + "': " + v);
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer value for '" + key + "': " + v);
    }
}

}  // namespace

ProblemConfig parse_config_text(const std::string& text) {
    ProblemConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not key=value: " + line);
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "domain") {
            if (val == "disk")
                cfg.shape = DomainShape::Disk;
            else if (val == "square")
                cfg.shape = DomainShape::Square;
            else
                throw ConfigError("config: domain must be disk or square, got " + val);
        } else if (key == "extent") {
            cfg.extent = parse_double(key, val);
        } else if (key == "n") {
            cfg.n = parse_int(key, val);
        } else if (key == "p") {
            cfg.p = parse_double(key, val);
        } else if (key == "eps0") {
            cfg.eps0 = parse_double(key, val);
        } else if (key == "factor") {
            cfg.factor = parse_double(key, val);
        } else if (key == "eps_min") {
            cfg.eps_min = parse_double(key, val);
        } else if (key == "tol") {
            cfg.solve_tol = parse_double(key, val);
        } else if (key == "max_outer") {
            cfg.max_outer = parse_int(key, val);
        } else {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    return cfg;
}

ProblemConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

Grid grid_from_config(const ProblemConfig& cfg) {
    Grid g = build_grid(cfg.shape, cfg.extent, cfg.n);
    cfg.validate(g.h());
    return g;
}

}  // namespace pfb
