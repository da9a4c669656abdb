#include "vlab/grid.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace vlab {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

Grid build_grid(int nx, int nv, double v_cut) {
    if (!is_power_of_two(nx)) throw config_error("grid.nx must be a power of two");
    if (!is_power_of_two(nv)) throw config_error("grid.nv must be a power of two");
    if (!(v_cut > 0.0)) throw config_error("grid.v_cut must be positive");
    Grid g;
    g.nx = nx;
    g.nv = nv;
    g.v_cut = v_cut;
    g.dx = 1.0 / nx;
    g.dv = 2.0 * v_cut / nv;
    if (!(g.dv < 1.0)) throw config_error("grid.nv too coarse for grid.v_cut (dv must be < 1)");
    return g;
}

PhaseField sample_phase(const Grid& g, const std::function<double(double, double)>& f,
                        double time) {
    PhaseField out(g, time);
    for (int j = 0; j < g.nv; ++j) {
        double* row = out.row(j);
        const double v = g.v(j);
        for (int i = 0; i < g.nx; ++i) row[i] = f(g.x(i), v);
    }
    return out;
}

SpatialField sample_spatial(int nx, const std::function<double(double)>& f, double time) {
    SpatialField out(nx, time);
    for (int i = 0; i < nx; ++i) out.values[i] = f(static_cast<double>(i) / nx);
    return out;
}

namespace {
void require_same_grid(const PhaseField& a, const PhaseField& b) {
    if (!(a.grid == b.grid)) throw config_error("phase field arithmetic: grid mismatch");
}
} // namespace

PhaseField operator+(const PhaseField& a, const PhaseField& b) {
    require_same_grid(a, b);
    PhaseField out = a;
    for (size_t q = 0; q < out.values.size(); ++q) out.values[q] += b.values[q];
    return out;
}

PhaseField operator-(const PhaseField& a, const PhaseField& b) {
    require_same_grid(a, b);
    PhaseField out = a;
    for (size_t q = 0; q < out.values.size(); ++q) out.values[q] -= b.values[q];
    return out;
}

PhaseField operator*(double s, const PhaseField& a) {
    PhaseField out = a;
    for (double& x : out.values) x *= s;
    return out;
}

PhaseField hadamard(const PhaseField& a, const PhaseField& b) {
    require_same_grid(a, b);
    PhaseField out = a;
    for (size_t q = 0; q < out.values.size(); ++q) out.values[q] *= b.values[q];
    return out;
}

PhaseField scale_rows(const PhaseField& a, const std::function<double(double)>& w) {
    PhaseField out = a;
    for (int j = 0; j < out.grid.nv; ++j) {
        const double s = w(out.grid.v(j));
        double* row = out.row(j);
        for (int i = 0; i < out.grid.nx; ++i) row[i] *= s;
    }
    return out;
}

void validate_moment_spec(MomentSpec& spec, const Grid& g, double bound) {
    if (!spec.psi) throw config_error("moment spec: psi callable missing");
    double worst = 0.0;
    for (int j = 0; j < g.nv; ++j) {
        const double v = g.v(j);
        const double scaled = std::abs(spec.psi(v)) * std::pow(1.0 + v * v, -spec.r0 / 2.0);
        worst = std::max(worst, scaled);
    }
    if (!(worst <= bound))
        throw config_error("moment spec: psi grows faster than (1+v^2)^(r0/2) on the grid");
    spec.growth_constant = worst;
}

double decay_certificate(const PhaseField& f) {
    double fmax = 0.0;
    for (double x : f.values) fmax = std::max(fmax, std::abs(x));
    if (fmax == 0.0) return 0.0;
    double edge = 0.0;
    const int nv = f.grid.nv;
    for (int i = 0; i < f.grid.nx; ++i) {
        edge = std::max(edge, std::abs(f.at(i, 0)));
        edge = std::max(edge, std::abs(f.at(i, nv - 1)));
    }
    return edge / fmax;
}

bool all_finite(const PhaseField& f) {
    for (double x : f.values)
        if (!std::isfinite(x)) return false;
    return true;
}

bool all_finite(const SpatialField& f) {
    for (double x : f.values)
        if (!std::isfinite(x)) return false;
    return true;
}

void NormReport::add(const std::string& kind, const std::string& params, double time,
                     double value) {
    if (!(value >= 0.0)) throw domain_error("norm report: negative or NaN norm value");
    entries[Key{kind, params, time}] = value;
}

double NormReport::get(const std::string& kind, const std::string& params, double time) const {
    auto it = entries.find(Key{kind, params, time});
    if (it == entries.end()) throw config_error("norm report: no entry for requested key");
    return it->second;
}

namespace {

constexpr char kMagic[8] = {'V', 'L', 'G', 'R', 'I', 'D', '1', '\0'};

void put_u32(std::string& buf, uint32_t x) {
    for (int b = 0; b < 4; ++b) buf.push_back(static_cast<char>((x >> (8 * b)) & 0xff));
}

void put_f64(std::string& buf, double x) {
    uint64_t bits;
    std::memcpy(&bits, &x, 8);
    for (int b = 0; b < 8; ++b) buf.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

uint32_t get_u32(const unsigned char* p) {
    uint32_t x = 0;
    for (int b = 3; b >= 0; --b) x = (x << 8) | p[b];
    return x;
}

double get_f64(const unsigned char* p) {
    uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) bits = (bits << 8) | p[b];
    double x;
    std::memcpy(&x, &bits, 8);
    return x;
}

} // namespace

void dump_phase_field(const PhaseField& f, const std::string& path) {
    std::string buf;
    buf.reserve(32 + f.values.size() * 8);
    buf.append(kMagic, 8);
    put_u32(buf, static_cast<uint32_t>(f.grid.nx));
    put_u32(buf, static_cast<uint32_t>(f.grid.nv));
    put_f64(buf, f.grid.v_cut);
    put_f64(buf, f.time);
    for (int i = 0; i < f.grid.nx; ++i)
        for (int j = 0; j < f.grid.nv; ++j) put_f64(buf, f.at(i, j));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw io_error("short write to " + path);
}

PhaseField load_phase_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 32 || std::memcmp(buf.data(), kMagic, 8) != 0)
        throw io_error(path + ": not a VLGRID1 dump");
    const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
    const int nx = static_cast<int>(get_u32(p + 8));
    const int nv = static_cast<int>(get_u32(p + 12));
    const double v_cut = get_f64(p + 16);
    const double time = get_f64(p + 24);
    if (buf.size() != 32 + static_cast<size_t>(nx) * nv * 8)
        throw io_error(path + ": truncated VLGRID1 dump");
    PhaseField f(build_grid(nx, nv, v_cut), time);
    const unsigned char* q = p + 32;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < nv; ++j, q += 8) f.at(i, j) = get_f64(q);
    return f;
}

} // namespace vlab
