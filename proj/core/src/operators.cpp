#include "vlab/operators.hpp"

#include <algorithm>
#include <cmath>

#include "vlab/calculus.hpp"
#include "vlab/interp.hpp"

namespace vlab {

std::pair<PhaseField, PhaseField> CoeffPair::at(double t) const {
    if (times.empty()) throw config_error("coefficient pair: empty time stack");
    if (t < times.front() - 1e-12 || t > times.back() + 1e-12)
        throw config_error("coefficient pair: requested time outside stored range");
    if (t <= times.front()) return {phi.front(), psi.front()};
    if (t >= times.back()) return {phi.back(), psi.back()};
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const int k = static_cast<int>(it - times.begin()) - 1;
    const double theta = (t - times[k]) / (times[k + 1] - times[k]);
    PhaseField p = (1.0 - theta) * phi[k] + theta * phi[k + 1];
    PhaseField q = (1.0 - theta) * psi[k] + theta * psi[k + 1];
    p.time = t;
    q.time = t;
    return {std::move(p), std::move(q)};
}

namespace {

struct AugmentedState {
    std::vector<double> X, V, phi, psi;
};

struct AugmentedDeriv {
    double x, v, phi, psi;
};

AugmentedDeriv rhs(const ForceField& force, const AdvectionField& a, double t, double X, double V,
                   double phi, double psi) {
    const double Fx = force.dx(t, X, V);
    const double Fv = force.dv(t, X, V);
    const double ap = a.deriv(V, 1);
    AugmentedDeriv d;
    d.x = a.eval(V);
    d.v = force.value(t, X, V);
    d.phi = 2.0 * ap * psi - ap * phi * phi + 2.0 * Fx + phi * Fv;
    d.psi = -ap * phi * psi + phi * Fx + 2.0 * psi * Fv;
    return d;
}

void rk4_aug(AugmentedState& st, const ForceField& force, const AdvectionField& a, double t,
             double h) {
    const size_t n = st.X.size();
    for (size_t q = 0; q < n; ++q) {
        const double X = st.X[q], V = st.V[q], P = st.phi[q], S = st.psi[q];
        const auto k1 = rhs(force, a, t, X, V, P, S);
        const auto k2 = rhs(force, a, t + 0.5 * h, X + 0.5 * h * k1.x, V + 0.5 * h * k1.v,
                            P + 0.5 * h * k1.phi, S + 0.5 * h * k1.psi);
        const auto k3 = rhs(force, a, t + 0.5 * h, X + 0.5 * h * k2.x, V + 0.5 * h * k2.v,
                            P + 0.5 * h * k2.phi, S + 0.5 * h * k2.psi);
        const auto k4 = rhs(force, a, t + h, X + h * k3.x, V + h * k3.v, P + h * k3.phi,
                            S + h * k3.psi);
        st.X[q] = X + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
        st.V[q] = V + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
        st.phi[q] = P + h / 6.0 * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi);
        st.psi[q] = S + h / 6.0 * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi);
    }
}

// Two-pass tensor re-grid of characteristic data onto the uniform grid:
// first periodic monotone cubic in x per v label, then a monotone inversion
// of the arrival velocities per x column.
void regrid(const Grid& g, const AugmentedState& st, PhaseField& phi_out, PhaseField& psi_out,
            double tk) {
    const int nx = g.nx, nv = g.nv;
    std::vector<double> xs(nx), vv(nx), pp(nx), ss(nx), x0(nx);
    for (int i = 0; i < nx; ++i) x0[i] = g.x(i);
    // pass 1: (X -> V, phi, psi) at uniform x, still labeled by start v.
    // The position map is inverted with the monotone cubic; the transported
    // profiles (smooth, periodic in the start label) are then evaluated
    // trigonometrically at the pulled-back labels, as in solve_burgers.
    std::vector<double> Vx(static_cast<size_t>(nx) * nv), Px(Vx.size()), Sx(Vx.size());
    for (int j = 0; j < nv; ++j) {
        const size_t base = static_cast<size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            xs[i] = st.X[base + i];
            vv[i] = st.V[base + i];
            pp[i] = st.phi[base + i];
            ss[i] = st.psi[base + i];
        }
        if (!strictly_increasing(xs) || !(xs.front() + 1.0 > xs.back()))
            throw horizon_error("solve_coeff_system: x re-gridding failed (characteristic "
                                "crossing)");
        auto inv = MonotoneCubic::periodic(xs, x0, 1.0, 1.0);
        // arrival velocity minus label is periodic in the label; interpolate
        // the deviation so the trigonometric route applies
        const double vlabel = g.v(j);
        std::vector<double> dv(nx);
        for (int i = 0; i < nx; ++i) dv[i] = vv[i] - vlabel;
        FourierInterpolant pv(dv.data(), nx);
        FourierInterpolant pf(pp.data(), nx);
        FourierInterpolant ps(ss.data(), nx);
        for (int i = 0; i < nx; ++i) {
            const double label = inv(g.x(i));
            Vx[base + i] = vlabel + pv(label);
            Px[base + i] = pf(label);
            Sx[base + i] = ps(label);
        }
    }
    // pass 2: per x column, invert label -> arrival velocity
    std::vector<double> wa(nv), pa(nv), sa(nv);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < nv; ++j) {
            const size_t q = static_cast<size_t>(j) * nx + i;
            wa[j] = Vx[q];
            pa[j] = Px[q];
            sa[j] = Sx[q];
        }
        if (!strictly_increasing(wa))
            throw horizon_error("solve_coeff_system: v re-gridding failed (velocity map not "
                                "monotone)");
        MonotoneCubic ip(wa, pa);
        MonotoneCubic is(wa, sa);
        for (int j = 0; j < nv; ++j) {
            phi_out.at(i, j) = ip(g.v(j));
            psi_out.at(i, j) = is(g.v(j));
        }
    }
    phi_out.time = tk;
    psi_out.time = tk;
}

} // namespace

CoeffPair solve_coeff_system(const ForceField& force, const AdvectionField& a, const Grid& grid,
                             double T, double dt, int store_every) {
    if (!(T >= 0.0)) throw config_error("solve_coeff_system: T must be nonnegative");
    if (!(dt > 0.0)) throw config_error("solve_coeff_system: dt must be positive");
    if (store_every < 1) throw config_error("solve_coeff_system: store_every must be >= 1");
    const int nx = grid.nx, nv = grid.nv;

    AugmentedState st;
    st.X.resize(static_cast<size_t>(nx) * nv);
    st.V.resize(st.X.size());
    st.phi.assign(st.X.size(), 0.0);
    st.psi.assign(st.X.size(), 0.0);
    for (int j = 0; j < nv; ++j)
        for (int i = 0; i < nx; ++i) {
            const size_t q = static_cast<size_t>(j) * nx + i;
            st.X[q] = grid.x(i);
            st.V[q] = grid.v(j);
        }

    CoeffPair out;
    out.grid = grid;
    out.times.push_back(0.0);
    out.phi.emplace_back(grid, 0.0);
    out.psi.emplace_back(grid, 0.0);

    const int n = (T == 0.0) ? 0 : std::max(1, static_cast<int>(std::lround(T / dt)));
    const double h = n > 0 ? T / n : 0.0;
    for (int k = 1; k <= n; ++k) {
        rk4_aug(st, force, a, (k - 1) * h, h);
        if (k % store_every != 0 && k != n) continue;
        PhaseField phi_k(grid), psi_k(grid);
        regrid(grid, st, phi_k, psi_k, k * h);
        out.times.push_back(k * h);
        out.phi.push_back(std::move(phi_k));
        out.psi.push_back(std::move(psi_k));
    }
    return out;
}

PhaseField apply_L(const CoeffPair& coeffs, const PhaseField& g, double t) {
    const auto [phi, psi] = coeffs.at(t);
    PhaseField out = spectral_dx(g, 2);
    out = out + hadamard(phi, fd_dv(spectral_dx(g, 1), 1));
    out = out + hadamard(psi, fd_dv(g, 2));
    out.time = t;
    return out;
}

PhaseField ManufacturedField::sample(const Grid& g, double t) const {
    return sample_phase(g, [&](double x, double v) { return value(t, x, v); }, t);
}

PhaseField ManufacturedField::sample_ddt(const Grid& g, double t) const {
    return sample_phase(g, [&](double x, double v) { return ddt(t, x, v); }, t);
}

namespace {

PhaseField sample_force(const ForceField& force, const Grid& g, double t) {
    return sample_phase(g, [&](double x, double v) { return force.value(t, x, v); }, t);
}

PhaseField transport_apply(const PhaseField& w, const AdvectionField& a, const PhaseField& F,
                           const PhaseField& ddt) {
    // T w = dw/dt + a(v) dx w + F dv w, with dw/dt supplied.
    PhaseField out = ddt + scale_rows(spectral_dx(w, 1), [&](double v) { return a.eval(v); });
    return out + hadamard(F, fd_dv(w, 1));
}

} // namespace

double commutation_residual(const CoeffPair& coeffs, const ForceField& force,
                            const AdvectionField& a, const ManufacturedField& g, double t,
                            double dt) {
    const Grid& grid = coeffs.grid;
    const PhaseField gt = g.sample(grid, t);
    const PhaseField F = sample_force(force, grid, t);

    // L T(g) with T g assembled from the analytic time derivative.
    const PhaseField Tg = transport_apply(gt, a, F, g.sample_ddt(grid, t));
    const PhaseField LTg = apply_L(coeffs, Tg, t);

    // T L(g): centered time difference of L g over +-dt, then advection.
    const PhaseField Lg = apply_L(coeffs, gt, t);
    const PhaseField Lg_m = apply_L(coeffs, g.sample(grid, t - dt), t - dt);
    const PhaseField Lg_p = apply_L(coeffs, g.sample(grid, t + dt), t + dt);
    const PhaseField dLg_dt = (1.0 / (2.0 * dt)) * (Lg_p - Lg_m);
    const PhaseField TLg = transport_apply(Lg, a, F, dLg_dt);

    // Correction terms: (L F) dv g + (L a) dx g + a' phi L g.
    const auto [phi, psi] = coeffs.at(t);
    const PhaseField LF = apply_L(coeffs, F, t);
    const PhaseField La = scale_rows(psi, [&](double v) { return a.deriv(v, 2); });
    PhaseField resid = LTg - TLg;
    resid = resid - hadamard(LF, fd_dv(gt, 1));
    resid = resid - hadamard(La, spectral_dx(gt, 1));
    resid = resid - hadamard(scale_rows(phi, [&](double v) { return a.deriv(v, 1); }), Lg);
    return weighted_sobolev_norm(resid, 0, 0.0);
}

} // namespace vlab
