#include "vlab/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <cstdlib>
#include <map>
#include <numbers>
#include <sstream>

namespace vlab {

using std::numbers::pi;

double smooth_bump(double u) {
    if (!(std::abs(u) < 1.0)) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

MomentSpec bump_psi(double amp) {
    MomentSpec spec;
    spec.psi = [amp](double v) { return amp * smooth_bump(2.0 * v); };
    spec.r0 = 0.0;
    spec.derivative_order_available = 1000;
    spec.growth_constant = std::abs(amp);
    return spec;
}

namespace {

struct KeyValue {
    std::string value;
    bool used = false;
};

using Sections = std::map<std::string, std::map<std::string, KeyValue>>;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

Sections tokenize(const std::string& text) {
    Sections out;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("scenario line " + std::to_string(lineno) +
                                   ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            out[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("scenario line " + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw config_error("scenario line " + std::to_string(lineno) + ": key outside a section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (out[section].count(key))
            throw config_error("duplicate key '" + section + "." + key + "'");
        out[section][key] = KeyValue{value, false};
    }
    return out;
}

class Reader {
  public:
    explicit Reader(Sections sections) : sections_(std::move(sections)) {}

    bool has(const std::string& sec, const std::string& key) {
        auto s = sections_.find(sec);
        return s != sections_.end() && s->second.count(key);
    }

    std::string str(const std::string& sec, const std::string& key) {
        auto s = sections_.find(sec);
        if (s == sections_.end() || !s->second.count(key))
            throw config_error("missing required key '" + sec + "." + key + "'");
        s->second[key].used = true;
        return s->second[key].value;
    }

    std::string str_or(const std::string& sec, const std::string& key, const std::string& def) {
        return has(sec, key) ? str(sec, key) : def;
    }

    double num(const std::string& sec, const std::string& key) {
        const std::string v = str(sec, key);
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        // strtod flags denormals with ERANGE; those are fine, infinities from
        // overflow are not
        if (end != v.c_str() + v.size() || v.empty() || !std::isfinite(x))
            throw config_error("key '" + sec + "." + key + "' is not a number: '" + v + "'");
        return x;
    }

    double num_or(const std::string& sec, const std::string& key, double def) {
        return has(sec, key) ? num(sec, key) : def;
    }

    int integer(const std::string& sec, const std::string& key) {
        const double x = num(sec, key);
        if (x != std::floor(x))
            throw config_error("key '" + sec + "." + key + "' must be an integer");
        return static_cast<int>(x);
    }

    int integer_or(const std::string& sec, const std::string& key, int def) {
        return has(sec, key) ? integer(sec, key) : def;
    }

    void finish() const {
        static const std::map<std::string, bool> known_sections = {
            {"grid", true}, {"advection", true}, {"model", true},
            {"initial", true}, {"run", true}, {"norms", true}};
        for (const auto& [sec, keys] : sections_) {
            if (!known_sections.count(sec))
                throw config_error("unknown section '[" + sec + "]'");
            for (const auto& [key, kv] : keys)
                if (!kv.used) throw config_error("unknown key '" + sec + "." + key + "'");
        }
    }

  private:
    Sections sections_;
};

std::vector<NormRequest> parse_norm_list(const std::string& text) {
    std::vector<NormRequest> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        std::istringstream parts(item);
        std::string kind, ks, rs;
        if (!std::getline(parts, kind, ':') || !std::getline(parts, ks, ':') ||
            !std::getline(parts, rs, ':'))
            throw config_error("norms.requests entry '" + item + "' is not kind:k:r");
        kind = trim(kind);
        if (kind != "sobolev" && kind != "winf" && kind != "aniso")
            throw config_error("norms.requests kind '" + kind +
                               "' must be sobolev, winf or aniso");
        try {
            out.push_back(NormRequest{kind, std::stod(trim(ks)), std::stod(trim(rs))});
        } catch (const std::exception&) {
            throw config_error("norms.requests entry '" + item + "' has non-numeric parameters");
        }
    }
    return out;
}

std::string shortest(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string shortest(int x) { return std::to_string(x); }

} // namespace

ScenarioSpec parse_scenario_text(const std::string& text) {
    Reader r(tokenize(text));
    ScenarioSpec s;

    s.nx = r.integer("grid", "nx");
    s.nv = r.integer("grid", "nv");
    s.v_cut = r.num("grid", "v_cut");
    if (!is_power_of_two(s.nx)) throw config_error("grid.nx must be a power of two");
    if (!is_power_of_two(s.nv)) throw config_error("grid.nv must be a power of two");
    if (!(s.v_cut > 0.0)) throw config_error("grid.v_cut must be positive");

    s.advection_kind = r.str("advection", "kind");
    if (s.advection_kind == "relativistic") {
        s.c = r.num("advection", "c");
        if (!(*s.c > 0.0)) throw config_error("advection.c must be positive");
    } else if (s.advection_kind != "classical") {
        throw config_error("advection.kind must be classical or relativistic");
    }

    s.model_kind = r.str("model", "kind");
    if (s.model_kind == "poisson") {
        s.sign = r.str_or("model", "sign", "repulsive");
        if (s.sign != "repulsive" && s.sign != "attractive")
            throw config_error("model.sign must be repulsive or attractive");
    } else if (s.model_kind == "moment_force") {
        s.shift = r.num_or("model", "shift", 0.0);
        s.psi_amp = r.num_or("model", "psi_amp", 1.0);
    } else if (s.model_kind != "zero") {
        throw config_error("model.kind must be zero, poisson or moment_force");
    }

    s.initial_kind = r.str("initial", "kind");
    if (s.initial_kind == "gaussian_perturbed") {
        s.amplitude = r.num_or("initial", "amplitude", 0.1);
        s.mode = r.integer_or("initial", "mode", 1);
        if (std::abs(s.amplitude) >= 1.0)
            throw config_error("initial.amplitude must lie in (-1,1) to keep f nonnegative");
        if (s.mode < 1 || s.mode >= s.nx / 2)
            throw config_error("initial.mode must lie in [1, nx/2)");
    } else if (s.initial_kind == "file") {
        s.path = r.str("initial", "path");
    } else if (s.initial_kind == "product") {
        s.amplitude = r.num_or("initial", "amplitude", 1.0);
        s.x_center = r.num_or("initial", "x_center", 0.5);
        s.x_width = r.num_or("initial", "x_width", 0.25);
        s.v_center = r.num_or("initial", "v_center", 0.0);
        s.v_width = r.num_or("initial", "v_width", 1.0);
        if (!(s.x_width > 0.0) || s.x_width > 1.0)
            throw config_error("initial.x_width must lie in (0,1]");
        if (!(s.v_width > 0.0)) throw config_error("initial.v_width must be positive");
    } else {
        throw config_error("initial.kind must be gaussian_perturbed, file or product");
    }

    s.T = r.num("run", "T");
    if (!(s.T > 0.0)) throw config_error("run.T must be positive");
    s.dt = r.num_or("run", "dt", 1e-3);
    if (!(s.dt > 0.0)) throw config_error("run.dt must be positive");
    s.picard_tol = r.num_or("run", "picard_tol", 1e-8);
    if (!(s.picard_tol > 0.0)) throw config_error("run.picard_tol must be positive");
    s.picard_max = r.integer_or("run", "picard_max", 25);
    if (s.picard_max < 1) throw config_error("run.picard_max must be >= 1");
    s.cadence = r.integer_or("run", "cadence", 10);
    if (s.cadence < 1) throw config_error("run.cadence must be >= 1");
    s.contraction_r = r.num_or("run", "contraction_r", 2.0);
    if (s.contraction_r < 0.0) throw config_error("run.contraction_r must be >= 0");

    if (r.has("norms", "requests")) s.norms = parse_norm_list(r.str("norms", "requests"));

    r.finish();
    return s;
}

ScenarioSpec parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open scenario file " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_scenario_text(text);
}

std::string canonical_scenario_text(const ScenarioSpec& s) {
    std::ostringstream os;
    os << "[grid]\n";
    os << "nx = " << s.nx << "\n";
    os << "nv = " << s.nv << "\n";
    os << "v_cut = " << shortest(s.v_cut) << "\n";
    os << "\n[advection]\n";
    if (s.advection_kind == "relativistic") os << "c = " << shortest(*s.c) << "\n";
    os << "kind = " << s.advection_kind << "\n";
    os << "\n[model]\n";
    os << "kind = " << s.model_kind << "\n";
    if (s.model_kind == "poisson") os << "sign = " << s.sign << "\n";
    if (s.model_kind == "moment_force") {
        os << "psi_amp = " << shortest(s.psi_amp) << "\n";
        os << "shift = " << shortest(s.shift) << "\n";
    }
    os << "\n[initial]\n";
    if (s.initial_kind == "gaussian_perturbed") {
        os << "amplitude = " << shortest(s.amplitude) << "\n";
        os << "kind = " << s.initial_kind << "\n";
        os << "mode = " << shortest(s.mode) << "\n";
    } else if (s.initial_kind == "file") {
        os << "kind = " << s.initial_kind << "\n";
        os << "path = " << s.path << "\n";
    } else {
        os << "amplitude = " << shortest(s.amplitude) << "\n";
        os << "kind = " << s.initial_kind << "\n";
        os << "v_center = " << shortest(s.v_center) << "\n";
        os << "v_width = " << shortest(s.v_width) << "\n";
        os << "x_center = " << shortest(s.x_center) << "\n";
        os << "x_width = " << shortest(s.x_width) << "\n";
    }
    os << "\n[run]\n";
    os << "T = " << shortest(s.T) << "\n";
    os << "cadence = " << shortest(s.cadence) << "\n";
    os << "contraction_r = " << shortest(s.contraction_r) << "\n";
    os << "dt = " << shortest(s.dt) << "\n";
    os << "picard_max = " << shortest(s.picard_max) << "\n";
    os << "picard_tol = " << shortest(s.picard_tol) << "\n";
    os << "\n[norms]\n";
    os << "requests =";
    for (size_t q = 0; q < s.norms.size(); ++q) {
        os << (q == 0 ? " " : ",") << s.norms[q].kind << ":" << shortest(s.norms[q].k) << ":"
           << shortest(s.norms[q].r);
    }
    os << "\n";
    return os.str();
}

Scenario ScenarioSpec::build() const {
    Scenario sc;
    sc.grid = build_grid(nx, nv, v_cut);
    sc.advection = (advection_kind == "relativistic") ? AdvectionField::relativistic(*c)
                                                      : AdvectionField::classical();
    if (model_kind == "zero") {
        sc.model = ForceModel::zero();
    } else if (model_kind == "poisson") {
        sc.model = ForceModel::poisson(sign == "repulsive" ? PoissonSign::repulsive
                                                           : PoissonSign::attractive);
    } else {
        MomentSpec psi = bump_psi(psi_amp);
        validate_moment_spec(psi, sc.grid);
        sc.model = ForceModel::moment(std::move(psi), shift);
    }

    if (initial_kind == "gaussian_perturbed") {
        const double eps = amplitude;
        const int m = mode;
        sc.f0 = sample_phase(sc.grid, [eps, m](double x, double v) {
            return (1.0 + eps * std::cos(2.0 * pi * m * x)) *
                   std::exp(-0.5 * v * v) / std::sqrt(2.0 * pi);
        });
    } else if (initial_kind == "file") {
        sc.f0 = load_phase_field(path);
        if (sc.f0.grid.nx != nx || sc.f0.grid.nv != nv || sc.f0.grid.v_cut != v_cut)
            throw config_error("initial.path: dumped grid does not match [grid] section");
    } else {
        const double A = amplitude, xc = x_center, xw = x_width, vc = v_center, vw = v_width;
        sc.f0 = sample_phase(sc.grid, [=](double x, double v) {
            double ux = (x - xc) - std::round(x - xc); // periodic distance
            return A * smooth_bump(2.0 * ux / xw) * smooth_bump(2.0 * (v - vc) / vw);
        });
    }

    sc.T = T;
    sc.dt = dt;
    sc.picard_tol = picard_tol;
    sc.picard_max = picard_max;
    sc.contraction_r = contraction_r;
    sc.norm_requests = norms;
    sc.output_cadence = cadence;
    sc.validate();
    return sc;
}

} // namespace vlab
