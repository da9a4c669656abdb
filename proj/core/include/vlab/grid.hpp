#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "vlab/errors.hpp"

namespace vlab {

/// Tensor grid for the periodic torus [0,1) in x and the truncated velocity
/// interval [-v_cut, v_cut) in v. Both point counts are powers of two so
/// that every spectral operation runs on FFT-friendly sizes. The v grid is
/// uniform and open: it contains -v_cut but not +v_cut, so no point is
/// duplicated under periodic extension of the window.
struct Grid {
    int nx = 0;          ///< points on the torus
    int nv = 0;          ///< points on the velocity window
    double v_cut = 0.0;  ///< velocity truncation radius
    double dx = 0.0;     ///< 1/nx
    double dv = 0.0;     ///< 2*v_cut/nv

    double x(int i) const { return i * dx; }
    double v(int j) const { return -v_cut + j * dv; }

    bool operator==(const Grid&) const = default;
};

/// build_grid(64, 64, 8.0) gives dx = 1/64, dv = 0.25.
/// Throws config_error unless nx and nv are powers of two, v_cut > 0 and
/// the resulting dv is below 1.
Grid build_grid(int nx, int nv, double v_cut);

bool is_power_of_two(int n);

/// Scalar function f(x,v) sampled on a Grid.
///
/// Storage is v-major (x contiguous within each v row) because nearly every
/// kernel in the library walks x spectrally; the on-disk format is x-major
/// and the I/O routines transpose.
struct PhaseField {
    Grid grid;
    std::vector<double> values; ///< size nx*nv, layout [j*nx + i]
    double time = 0.0;
    std::vector<std::string> notes; ///< diagnostic warnings attached by operations

    PhaseField() = default;
    explicit PhaseField(const Grid& g, double t = 0.0)
        : grid(g), values(static_cast<size_t>(g.nx) * g.nv, 0.0), time(t) {}

    double& at(int i, int j) { return values[static_cast<size_t>(j) * grid.nx + i]; }
    double at(int i, int j) const { return values[static_cast<size_t>(j) * grid.nx + i]; }

    /// Row pointer for fixed v index j (contiguous in x).
    double* row(int j) { return values.data() + static_cast<size_t>(j) * grid.nx; }
    const double* row(int j) const { return values.data() + static_cast<size_t>(j) * grid.nx; }
};

/// Sample a callable (x,v) -> double on a grid.
PhaseField sample_phase(const Grid& g, const std::function<double(double, double)>& f,
                        double time = 0.0);

PhaseField operator+(const PhaseField& a, const PhaseField& b);
PhaseField operator-(const PhaseField& a, const PhaseField& b);
PhaseField operator*(double s, const PhaseField& a);
/// Pointwise product.
PhaseField hadamard(const PhaseField& a, const PhaseField& b);
/// Multiply each v row by w(v).
PhaseField scale_rows(const PhaseField& a, const std::function<double(double)>& w);

/// Scalar function of x alone (densities, moments, force components).
/// Periodic semantics: index arithmetic is mod nx.
struct SpatialField {
    int nx = 0;
    std::vector<double> values;
    double time = 0.0;

    SpatialField() = default;
    explicit SpatialField(int n, double t = 0.0) : nx(n), values(n, 0.0), time(t) {}

    double& operator[](int i) { return values[wrap(i)]; }
    double operator[](int i) const { return values[wrap(i)]; }
    int wrap(int i) const {
        int r = i % nx;
        return r < 0 ? r + nx : r;
    }
};

SpatialField sample_spatial(int nx, const std::function<double(double)>& f, double time = 0.0);

/// Velocity test function psi with its polynomial growth certificate.
struct MomentSpec {
    std::function<double(double)> psi;
    double r0 = 0.0;                     ///< growth exponent: |psi| <= C (1+v^2)^(r0/2)
    int derivative_order_available = 0;  ///< derivatives of psi the supplier guarantees
    double growth_constant = 0.0;        ///< filled by validate_moment_spec

    static MomentSpec unit() { return MomentSpec{[](double) { return 1.0; }, 0.0, 1000, 1.0}; }
};

/// Checks |psi(v)| (1+v^2)^(-r0/2) <= bound on the sampled v grid and
/// records the observed constant. Throws config_error on violation.
void validate_moment_spec(MomentSpec& spec, const Grid& g, double bound = 1e6);

/// Relative magnitude of the two outermost v rows: max over x of |f| on
/// rows j=0 and j=nv-1, divided by the global maximum (0 if f == 0).
/// Certifies that v_cut is large enough for the weighted norms in use.
double decay_certificate(const PhaseField& f);

/// Default tolerance for the boundary-decay invariant.
inline constexpr double kDecayTolerance = 1e-10;

bool all_finite(const PhaseField& f);
bool all_finite(const SpatialField& f);

/// Accumulated table of evaluated norms, keyed by (norm kind, parameter
/// string, time). Values must be nonnegative.
struct NormReport {
    using Key = std::tuple<std::string, std::string, double>;
    std::map<Key, double> entries;

    void add(const std::string& kind, const std::string& params, double time, double value);
    double get(const std::string& kind, const std::string& params, double time) const;
};

/// Binary dump of a phase field.
///
/// Layout: 32-byte header (magic "VLGRID1\0", little-endian u32 nx, u32 nv,
/// f64 v_cut, f64 time) followed by nx*nv little-endian f64 values in
/// x-major row order.
void dump_phase_field(const PhaseField& f, const std::string& path);
PhaseField load_phase_field(const std::string& path);

} // namespace vlab
