#include <charconv>
#include <cmath>
#include <sstream>

#include "qbs/cli.hpp"
#include "qbs/errors.hpp"

namespace qbs::cli {

namespace {

double parse_double(const std::string& key, const std::string& text) {
    // strtod accepts "inf"/"nan"; callers that allow infinity check explicitly.
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (text.empty() || end != begin + text.size() || std::isnan(v)) {
        throw ValidationError("parameter '" + key + "': '" + text + "' is not a number");
    }
    return v;
}

int parse_int(const std::string& key, const std::string& text) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ValidationError("parameter '" + key + "': '" + text + "' is not an integer");
    }
    return v;
}

}  // namespace

std::vector<double> Grid::values() const {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    v[n - 1] = hi;
    return v;
}

nlohmann::ordered_json Grid::to_json() const {
    return {{"lo", lo}, {"hi", hi}, {"n", n}};
}

Grid parse_grid(const std::string& text) {
    const auto a = text.find(':');
    const auto b = a == std::string::npos ? a : text.find(':', a + 1);
    if (a == std::string::npos || b == std::string::npos ||
        text.find(':', b + 1) != std::string::npos) {
        throw ValidationError("grid '" + text + "' must have the form lo:hi:n");
    }
    Grid g;
    g.lo = parse_double("grid", text.substr(0, a));
    g.hi = parse_double("grid", text.substr(a + 1, b - a - 1));
    g.n = parse_int("grid", text.substr(b + 1));
    if (!std::isfinite(g.lo) || !std::isfinite(g.hi)) {
        throw ValidationError("grid '" + text + "': bounds must be finite");
    }
    if (g.n < 1 || g.n > 1000000) throw ValidationError("grid '" + text + "': n must be in [1, 1e6]");
    if (g.n == 1 && g.lo != g.hi) throw ValidationError("grid '" + text + "': n = 1 needs lo == hi");
    if (g.hi < g.lo) throw ValidationError("grid '" + text + "': hi must not be below lo");
    return g;
}

bool Params::has(const std::string& key) const { return values_.count(key) != 0; }

std::string Params::get_string(const std::string& key, const std::string& def) const {
    const auto it = values_.find(key);
    return it == values_.end() ? def : it->second;
}

std::string Params::choice(const std::string& key, const std::string& def,
                           const std::set<std::string>& allowed) const {
    const std::string v = get_string(key, def);
    if (!allowed.count(v)) {
        std::string opts;
        for (const auto& a : allowed) opts += (opts.empty() ? "" : ", ") + a;
        throw ValidationError("parameter '" + key + "' must be one of: " + opts);
    }
    return v;
}

double Params::get_double(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ValidationError("missing required parameter '" + key + "'");
    return parse_double(key, it->second);
}

double Params::get_double(const std::string& key, double def) const {
    return has(key) ? get_double(key) : def;
}

int Params::get_int(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ValidationError("missing required parameter '" + key + "'");
    return parse_int(key, it->second);
}

int Params::get_int(const std::string& key, int def) const {
    return has(key) ? get_int(key) : def;
}

Grid Params::get_grid(const std::string& key, const std::string& def) const {
    try {
        return parse_grid(get_string(key, def));
    } catch (const ValidationError& e) {
        throw ValidationError("parameter '" + key + "': " + e.what());
    }
}

std::vector<double> Params::get_list(const std::string& key, const std::string& def) const {
    std::vector<double> out;
    std::stringstream ss(get_string(key, def));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
    if (out.empty()) throw ValidationError("parameter '" + key + "' must be a non-empty list");
    return out;
}

}  // namespace qbs::cli
