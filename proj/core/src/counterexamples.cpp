#include "vlab/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vlab/calculus.hpp"

namespace vlab {

using std::numbers::pi;

namespace {

// B(v) = exp(-1/(1-4v^2)) on (-1/2,1/2); derivatives via the log-derivative
// chain g = B'/B.
double bump_B(double v, int k) {
    const double u = 1.0 - 4.0 * v * v;
    if (u <= 1e-12) return 0.0;
    const double B = std::exp(-1.0 / u);
    if (k == 0) return B;
    const double g = -8.0 * v / (u * u);
    if (k == 1) return g * B;
    const double gp = -8.0 / (u * u) - 128.0 * v * v / (u * u * u);
    if (k == 2) return (g * g + gp) * B;
    const double gpp = -384.0 * v / (u * u * u) - 3072.0 * v * v * v / (u * u * u * u);
    if (k == 3) return (g * g * g + 3.0 * g * gp + gpp) * B;
    throw config_error("bump derivative order beyond closed forms (k <= 3)");
}

double simpson_integral(const std::function<double(double)>& f, double a, double b, int n) {
    // n odd node count
    const double h = (b - a) / (n - 1);
    double acc = 0.0;
    for (int q = 0; q < n; ++q) {
        const double w = (q == 0 || q == n - 1) ? 1.0 : (q % 2 == 1 ? 4.0 : 2.0);
        acc += w * f(a + q * h);
    }
    return acc * h / 3.0;
}

} // namespace

double bump_phi(double v, int deriv) {
    if (deriv < 0 || deriv > 2)
        throw config_error("bump_phi: derivative order must be in {0,1,2}");
    return bump_B(v, deriv + 1);
}

double bump_phi_l2(int deriv, double amplitude) {
    const double sq = simpson_integral(
        [&](double v) {
            const double y = bump_phi(v, deriv);
            return y * y;
        },
        -0.5, 0.5, 20001);
    return amplitude * std::sqrt(sq);
}

Ce1Result counterexample1(int k, double t, double amplitude) {
    if (k < 1 || k > 3) throw config_error("counterexample1: k must be in {1,2,3}");
    if (!(t > 0.0)) throw config_error("counterexample1: t must be positive");
    if (t >= 4.0)
        throw domain_error("counterexample1: t >= 4 is outside the validity window of the "
                           "translate formula");
    Ce1Result out;
    const double phinorm = bump_phi_l2(k - 1, amplitude);
    out.exact = std::sqrt(2.0 / std::pow(t, 2.0 * (k - 1) - 1.0)) * phinorm;

    // Direct route: the translate formula evaluated on a fine x grid.
    const double half = 1.0 + 0.5 * t + 0.1;
    const int n = (1 << 17) + 1;
    const double pref = std::pow(t, -(k - 1.0));
    const double sq = simpson_integral(
        [&](double x) {
            const double y = pref * amplitude *
                             (bump_phi((x + 1.0) / t, k - 1) - bump_phi((x - 1.0) / t, k - 1));
            return y * y;
        },
        -half, half, n);
    out.quadrature = std::sqrt(sq);
    return out;
}

double ce1_time_l2_hk(int k, double T, int time_nodes, double amplitude) {
    if (time_nodes < 2) throw config_error("ce1_time_l2_hk: need at least two time nodes");
    // trapezoid over [T/time_nodes, T]; the shrinking lower endpoint is what
    // exposes the divergence for k >= 2
    std::vector<double> ts(time_nodes);
    for (int q = 0; q < time_nodes; ++q)
        ts[q] = T * (q + 1) / static_cast<double>(time_nodes);
    double acc = 0.0;
    std::vector<double> phisq(k + 1);
    for (int j = 0; j <= k; ++j) {
        if (j == 0) {
            const double b = std::sqrt(simpson_integral(
                [&](double v) { return bump_B(v, 0) * bump_B(v, 0); }, -0.5, 0.5, 20001));
            phisq[0] = b * b;
        } else {
            const double b = bump_phi_l2(j - 1, 1.0);
            phisq[j] = b * b;
        }
    }
    auto hk_sq = [&](double t) {
        double s = 2.0 * t * phisq[0];
        for (int j = 1; j <= k; ++j) s += 2.0 / std::pow(t, 2.0 * (j - 1) - 1.0) * phisq[j];
        return amplitude * amplitude * s;
    };
    for (int q = 0; q + 1 < time_nodes; ++q)
        acc += 0.5 * (hk_sq(ts[q]) + hk_sq(ts[q + 1])) * (ts[q + 1] - ts[q]);
    return std::sqrt(acc);
}

SuperpositionSpec SuperpositionSpec::example2() {
    SuperpositionSpec s;
    s.which = SuperpositionWhich::example2;
    s.psi_amp = -8.0; // downward drift: the passive bump moves toward the psi support
    s.T = 0.2;
    // single-x-mode profiles need little x resolution; the velocity window
    // only has to hold the bumps plus their downward drift
    s.nx = 64;
    s.nv = 128;
    s.v_cut = 3.0;
    return s;
}

SuperpositionSpec SuperpositionSpec::example3() {
    SuperpositionSpec s;
    s.which = SuperpositionWhich::example3;
    s.psi_amp = 4.0;
    // narrow x-bumps need the finer x grid to keep trigonometric ringing
    // below the support monitors; contact is driven by the x-spread, so the
    // velocity window can stay small
    s.nx = 256;
    s.nv = 128;
    s.v_cut = 3.0;
    s.ex3_vhalf = 1.0;
    s.T = 0.06;
    return s;
}

namespace {

double periodic_dist(double x, double c) {
    const double d = x - c;
    return d - std::round(d);
}

// Interval helpers on the torus, intervals given as [lo,hi] with hi > lo.
bool mod_intervals_overlap(double alo, double ahi, double blo, double bhi) {
    for (int s = -1; s <= 1; ++s) {
        const double lo = blo + s, hi = bhi + s;
        if (alo < hi && blo + s < ahi) {
            if (std::max(alo, lo) < std::min(ahi, hi)) return true;
        }
    }
    return false;
}

Trajectory chained_trajectory(Scenario sc, double window_T) {
    const int total = std::max(1, static_cast<int>(std::lround(sc.T / sc.dt)));
    const int win = std::max(1, static_cast<int>(std::lround(window_T / sc.dt)));
    Trajectory full;
    full.dt = sc.dt;
    full.states.reserve(total + 1);
    full.states.push_back(sc.f0);
    int done = 0;
    while (done < total) {
        const int steps = std::min(win, total - done);
        Scenario w = sc;
        w.f0 = full.states.back();
        w.T = steps * sc.dt;
        w.keep_trajectory = true;
        w.norm_requests.clear();
        SimOutput out = run_simulation(w);
        for (size_t i = 1; i < out.trajectory.size(); ++i)
            full.states.push_back(std::move(out.trajectory[i]));
        done += steps;
    }
    return full;
}

struct Fragments {
    PhaseField driver;  ///< nonlinear fragment
    PhaseField passive; ///< fragment transported linearly through the driver force
};

void validate_geometry(const SuperpositionSpec& s) {
    if (s.which == SuperpositionWhich::example2) {
        if (s.amp2 != 0.0 && !(s.ex2_f2_vlo > 0.5))
            throw config_error("superposition: passive v-support must stay above the psi "
                               "support [-1/2,1/2]");
        if (!(s.ex2_f2_vhi > s.ex2_f2_vlo))
            throw config_error("superposition: empty passive v-support");
        if (!(s.ex2_f2_vhi < s.v_cut))
            throw config_error("superposition: passive v-support exceeds the velocity window");
    } else {
        if (!(s.ex3_f1_xhi > s.ex3_f1_xlo) || !(s.ex3_f2_xhi > s.ex3_f2_xlo))
            throw config_error("superposition: empty fragment x-support");
        if (s.amp2 != 0.0 && s.amp1 != 0.0) {
            if (mod_intervals_overlap(s.ex3_f1_xlo, s.ex3_f1_xhi, s.ex3_f2_xlo, s.ex3_f2_xhi))
                throw config_error("superposition: fragment x-supports overlap");
            // force zone of fragment 1 must avoid both fragments
            if (mod_intervals_overlap(s.ex3_f1_xlo - s.shift, s.ex3_f1_xhi - s.shift,
                                      s.ex3_f1_xlo, s.ex3_f1_xhi) ||
                mod_intervals_overlap(s.ex3_f1_xlo - s.shift, s.ex3_f1_xhi - s.shift,
                                      s.ex3_f2_xlo, s.ex3_f2_xhi))
                throw config_error("superposition: shifted force zone of fragment 1 touches a "
                                   "fragment support");
            // self-force zone of fragment 2 must avoid fragment 2
            if (mod_intervals_overlap(s.ex3_f2_xlo - s.shift, s.ex3_f2_xhi - s.shift,
                                      s.ex3_f2_xlo, s.ex3_f2_xhi))
                throw config_error("superposition: fragment 2 self-force zone touches its own "
                                   "support");
        }
    }
}

} // namespace

PhaseField superposition_initial(const SuperpositionSpec& s, int fragment) {
    const Grid g = build_grid(s.nx, s.nv, s.v_cut);
    auto build = [&](int which) {
        if (s.which == SuperpositionWhich::example2) {
            if (which == 1)
                return sample_phase(g, [&](double x, double v) {
                    return s.amp1 * (1.0 + std::cos(2.0 * pi * x)) * smooth_bump(2.0 * v);
                });
            const double c2 = 0.5 * (s.ex2_f2_vlo + s.ex2_f2_vhi);
            const double w2 = s.ex2_f2_vhi - s.ex2_f2_vlo;
            return sample_phase(g, [&](double x, double v) {
                return s.amp2 * (1.0 + std::cos(2.0 * pi * (x - 0.3))) *
                       smooth_bump(2.0 * (v - c2) / w2);
            });
        }
        const double xlo = which == 1 ? s.ex3_f1_xlo : s.ex3_f2_xlo;
        const double xhi = which == 1 ? s.ex3_f1_xhi : s.ex3_f2_xhi;
        const double amp = which == 1 ? s.amp1 : s.amp2;
        const double cx = 0.5 * (xlo + xhi), wx = xhi - xlo;
        return sample_phase(g, [&, cx, wx, amp](double x, double v) {
            return amp * smooth_bump(2.0 * periodic_dist(x, cx) / wx) *
                   smooth_bump(v / s.ex3_vhalf);
        });
    };
    if (fragment == 1) return build(1);
    if (fragment == 2) return build(2);
    return build(1) + build(2);
}

namespace {

Scenario superposition_base(const SuperpositionSpec& s, const Grid& g) {
    Scenario base;
    base.grid = g;
    base.advection = AdvectionField::classical();
    MomentSpec psi = bump_psi(s.psi_amp);
    validate_moment_spec(psi, g);
    base.model = ForceModel::moment(std::move(psi),
                                    s.which == SuperpositionWhich::example3 ? s.shift : 0.0);
    base.T = s.T;
    base.dt = s.dt;
    base.picard_max = 60;
    base.picard_tol = 1e-9;
    base.contraction_r = 0.0;
    return base;
}

} // namespace

Trajectory superposition_coupled_trajectory(const SuperpositionSpec& s) {
    validate_geometry(s);
    const Grid g = build_grid(s.nx, s.nv, s.v_cut);
    Scenario coupled = superposition_base(s, g);
    coupled.f0 = superposition_initial(s, 0);
    return chained_trajectory(coupled, s.window_T);
}

SuperpositionResult counterexample_superposition(const SuperpositionSpec& s) {
    validate_geometry(s);
    const Grid g = build_grid(s.nx, s.nv, s.v_cut);
    Scenario base = superposition_base(s, g);

    // In example 2 the nonlinear fragment is the one overlapping psi; in
    // example 3 it is the free-streaming bump whose shifted moment drives
    // the other.
    Fragments frag;
    if (s.which == SuperpositionWhich::example2) {
        frag.driver = superposition_initial(s, 1);
        frag.passive = superposition_initial(s, 2);
    } else {
        frag.driver = superposition_initial(s, 2);
        frag.passive = superposition_initial(s, 1);
    }

    Scenario coupled = base;
    coupled.f0 = frag.driver + frag.passive;
    Trajectory coupled_traj = chained_trajectory(coupled, s.window_T);

    Scenario driver_sc = base;
    driver_sc.f0 = frag.driver;
    Trajectory driver_traj = chained_trajectory(driver_sc, s.window_T);

    Scenario passive_sc = base;
    passive_sc.f0 = frag.passive;
    Trajectory passive_traj = picard_iterate(driver_traj, passive_sc);

    // Contact monitors.
    const MomentSpec psi_m = bump_psi(s.psi_amp);
    const int shift_idx = static_cast<int>(std::lround(s.shift * s.nx));
    const double mscale = [&] {
        SpatialField m0 = moment(s.which == SuperpositionWhich::example2 ? frag.driver
                                                                         : frag.passive,
                                 psi_m);
        double peak = 0.0;
        for (double x : m0.values) peak = std::max(peak, std::abs(x));
        return std::max(peak, 1e-30);
    }();
    const double f1peak = winf_norm(frag.driver, 0, 0.0);
    const double f2peak = std::max(winf_norm(frag.passive, 0, 0.0), 1e-30);

    // Significance level for the support monitors: genuine contact drives
    // the monitored moments to O(1) of their scale, while the trigonometric
    // side lobes of the compact bumps sit around 1e-5 relative.
    constexpr double kContactLevel = 1e-3;
    auto contact_now = [&](const PhaseField& f1, const PhaseField& f2) {
        if (s.which == SuperpositionWhich::example2) {
            SpatialField leak = moment(f2, psi_m);
            for (double x : leak.values)
                if (std::abs(x) > kContactLevel * mscale) return true;
            return false;
        }
        // example 3: thresholded x-supports against the shifted force zones
        const int nx = g.nx;
        std::vector<char> in1(nx, 0), in2(nx, 0);
        for (int i = 0; i < nx; ++i) {
            double m1 = 0.0, m2 = 0.0;
            for (int j = 0; j < g.nv; ++j) {
                m1 = std::max(m1, std::abs(f1.at(i, j)));
                m2 = std::max(m2, std::abs(f2.at(i, j)));
            }
            in1[i] = m1 > kContactLevel * std::max(f1peak, 1e-30);
            in2[i] = m2 > kContactLevel * f2peak;
        }
        SpatialField m1 = moment(f1, psi_m);
        SpatialField m2 = moment(f2, psi_m);
        for (int i = 0; i < nx; ++i) {
            const double force1_here = std::abs(m1[(i + shift_idx) % nx]);
            const double force2_here = std::abs(m2[(i + shift_idx) % nx]);
            if ((in1[i] || in2[i]) && force1_here > kContactLevel * mscale) return true;
            if (in2[i] && force2_here > kContactLevel * mscale) return true;
        }
        return false;
    };

    SuperpositionResult out;
    const int n = static_cast<int>(coupled_traj.states.size()) - 1;
    for (int i = 0; i <= n; i += s.cadence) {
        const PhaseField& fc = coupled_traj.states[i];
        const PhaseField* fd = &driver_traj.states[i];
        const PhaseField* fp = &passive_traj.states[i];
        const PhaseField& f1 = s.which == SuperpositionWhich::example2 ? *fd : *fp;
        const PhaseField& f2 = s.which == SuperpositionWhich::example2 ? *fp : *fd;
        const double resid = weighted_sobolev_norm(fc - (*fd + *fp), 0, 0.0);
        out.times.push_back(fc.time);
        out.residuals.push_back(resid);
        if (!out.first_contact && contact_now(f1, f2)) out.first_contact = fc.time;
        if (!out.first_contact) out.max_residual_disjoint =
            std::max(out.max_residual_disjoint, resid);
        out.max_residual_total = std::max(out.max_residual_total, resid);
    }
    return out;
}

} // namespace vlab
