#include "mpv/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

namespace mpv {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& v) {
    T out{};
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ConfigError("not a valid number: '" + v + "'");
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("not a boolean: '" + v + "'");
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
    return os.str();
}

struct Field {
    const char* key;
    std::function<void(Config&, const std::string&)> set;
    std::function<std::string(const Config&)> get;
};

#define MPV_DOUBLE(name) \
    Field { #name, [](Config& c, const std::string& v) { c.name = parse_number<double>(v); }, \
            [](const Config& c) { return fmt(c.name); } }
#define MPV_INT(name) \
    Field { #name, [](Config& c, const std::string& v) { c.name = parse_number<int>(v); }, \
            [](const Config& c) { return std::to_string(c.name); } }
#define MPV_STRING(name) \
    Field { #name, [](Config& c, const std::string& v) { c.name = v; }, [](const Config& c) { return c.name; } }

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        MPV_DOUBLE(L),
        MPV_INT(Nq),
        MPV_INT(Np),
        MPV_DOUBLE(Pmax),
        MPV_DOUBLE(dt),
        MPV_DOUBLE(t_end),
        MPV_DOUBLE(m),
        MPV_DOUBLE(e),
        MPV_INT(K),
        Field{"scheme",
              [](Config& c, const std::string& v) {
                  if (v == "FD4" || v == "fd4") {
                      c.scheme = DiffScheme::FD4;
                  } else if (v == "Fourier" || v == "fourier") {
                      c.scheme = DiffScheme::Fourier;
                  } else {
                      throw ConfigError("scheme must be FD4 or Fourier, got '" + v + "'");
                  }
              },
              [](const Config& c) { return std::string(to_string(c.scheme)); }},
        Field{"field_mode",
              [](Config& c, const std::string& v) {
                  if (v == "self_consistent") {
                      c.field_mode = FieldMode::SelfConsistent;
                  } else if (v == "prescribed") {
                      c.field_mode = FieldMode::Prescribed;
                  } else {
                      throw ConfigError("field_mode must be self_consistent or prescribed, got '" + v + "'");
                  }
              },
              [](const Config& c) {
                  return std::string(c.field_mode == FieldMode::Prescribed ? "prescribed" : "self_consistent");
              }},
        Field{"seed", [](Config& c, const std::string& v) { c.seed = parse_number<std::uint64_t>(v); },
              [](const Config& c) { return std::to_string(c.seed); }},
        MPV_INT(order_cap),
        Field{"bernoulli_half_factor",
              [](Config& c, const std::string& v) { c.bernoulli_half_factor = parse_bool(v); },
              [](const Config& c) { return std::string(c.bernoulli_half_factor ? "true" : "false"); }},
        MPV_INT(instances),
        MPV_INT(threads),
        MPV_STRING(initial),
        MPV_DOUBLE(amplitude),
        MPV_INT(mode),
        MPV_DOUBLE(thermal_width),
        MPV_DOUBLE(drift),
        MPV_DOUBLE(phi_amplitude),
        MPV_INT(snapshot_every),
        MPV_STRING(moment_model),
        MPV_DOUBLE(fluid_kappa),
        MPV_DOUBLE(fluid_gamma),
    };
    return table;
}

#undef MPV_DOUBLE
#undef MPV_INT
#undef MPV_STRING

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

}  // namespace

void Config::validate() const {
    auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
    require(positive(L), "L must be positive");
    require(Nq >= 8, "Nq must be at least 8");
    require(Np >= 16, "Np must be at least 16");
    require(positive(Pmax), "Pmax must be positive");
    require(positive(dt), "dt must be positive");
    require(positive(t_end), "t_end must be positive");
    require(positive(m), "m must be positive");
    require(std::isfinite(e), "e must be finite");
    require(K >= 2, "K must be at least 2");
    require(order_cap >= 2, "order_cap must be at least 2");
    require(instances >= 1, "instances must be at least 1");
    require(threads >= 1, "threads must be at least 1");
    require(initial == "landau" || initial == "bump", "initial must be landau or bump");
    require(std::isfinite(amplitude), "amplitude must be finite");
    require(mode >= 1 && 2 * mode < Nq, "mode must lie in 1..Nq/2-1");
    require(positive(thermal_width), "thermal_width must be positive");
    require(std::abs(drift) < Pmax, "drift must lie inside (-Pmax, Pmax)");
    require(std::isfinite(phi_amplitude), "phi_amplitude must be finite");
    require(snapshot_every >= 0, "snapshot_every must be non-negative");
    require(moment_model == "euler" || moment_model == "vlasov", "moment_model must be euler or vlasov");
    require(positive(fluid_kappa), "fluid_kappa must be positive");
    require(fluid_gamma > 1.0 && std::isfinite(fluid_gamma), "fluid_gamma must exceed 1");
    if (scheme == DiffScheme::Fourier) {
        require(power_of_two(Nq) && power_of_two(Np), "Nq and Np must be powers of two with the Fourier scheme");
    }
}

std::string Config::to_text() const {
    std::string out;
    for (const Field& f : fields()) out += std::string(f.key) + " = " + f.get(*this) + "\n";
    return out;
}

Config parse_config(const std::string& text) {
    Config c;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto where = "line " + std::to_string(lineno) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + "missing key");
        if (value.empty()) throw ConfigError(where + "missing value for '" + key + "'");
        const auto& table = fields();
        auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return key == f.key; });
        if (it == table.end()) throw ConfigError(where + "unknown key '" + key + "'");
        if (!seen.insert(key).second) throw ConfigError(where + "repeated key '" + key + "'");
        try {
            it->set(c, value);
        } catch (const ConfigError& err) {
            throw ConfigError(where + key + ": " + err.what());
        }
    }
    c.validate();
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace mpv
