#include "vlab/characteristics.hpp"

#include <algorithm>
#include <cmath>

#include "vlab/calculus.hpp"

namespace vlab {

namespace {

struct NodeState {
    std::vector<double> X; // unwrapped
    std::vector<double> V;
};

double wrap_unit(double x) { return x - std::floor(x); }

// One RK4 step of (X' = a(V), V' = F(sigma,X,V)) for all nodes.
void rk4_step(NodeState& st, const ForceField& force, const AdvectionField& a, double sigma,
              double h) {
    const size_t n = st.X.size();
    for (size_t q = 0; q < n; ++q) {
        const double x0 = st.X[q], v0 = st.V[q];
        const double k1x = a.eval(v0);
        const double k1v = force.value(sigma, x0, v0);
        const double k2x = a.eval(v0 + 0.5 * h * k1v);
        const double k2v = force.value(sigma + 0.5 * h, x0 + 0.5 * h * k1x, v0 + 0.5 * h * k1v);
        const double k3x = a.eval(v0 + 0.5 * h * k2v);
        const double k3v = force.value(sigma + 0.5 * h, x0 + 0.5 * h * k2x, v0 + 0.5 * h * k2v);
        const double k4x = a.eval(v0 + h * k3v);
        const double k4v = force.value(sigma + h, x0 + h * k3x, v0 + h * k3v);
        st.X[q] = x0 + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        st.V[q] = v0 + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
}

void check_escape(const NodeState& st, const std::vector<char>& watched, double fence,
                  const char* who) {
    for (size_t q = 0; q < st.V.size(); ++q)
        if (watched[q] && std::abs(st.V[q]) > fence)
            throw escape_error(std::string(who) +
                               ": traced state crossed the certified velocity fence");
}

int step_count(double span, double dt) {
    if (span == 0.0) return 0;
    return std::max(1, static_cast<int>(std::lround(span / dt)));
}

} // namespace

FlowMap trace_flow(const ForceField& force, const AdvectionField& a, double from_t, double to_s,
                   const Grid& grid, double dt) {
    if (!(dt > 0.0)) throw config_error("trace_flow: dt must be positive");
    const int nx = grid.nx, nv = grid.nv;
    NodeState st;
    st.X.resize(static_cast<size_t>(nx) * nv);
    st.V.resize(st.X.size());
    std::vector<char> watched(st.X.size());
    const double fence = kEscapeFence * grid.v_cut;
    for (int j = 0; j < nv; ++j)
        for (int i = 0; i < nx; ++i) {
            const size_t q = static_cast<size_t>(j) * nx + i;
            st.X[q] = grid.x(i);
            st.V[q] = grid.v(j);
            watched[q] = std::abs(grid.v(j)) <= fence;
        }

    const int n = step_count(std::abs(to_s - from_t), dt);
    const double h = n > 0 ? (to_s - from_t) / n : 0.0;
    double sigma = from_t;
    for (int k = 0; k < n; ++k) {
        rk4_step(st, force, a, sigma, h);
        sigma = from_t + (k + 1) * h;
        check_escape(st, watched, fence, "trace_flow");
    }

    FlowMap out;
    out.s = to_s;
    out.t = from_t;
    out.grid = grid;
    out.X_unwrapped = std::move(st.X);
    out.V = std::move(st.V);
    out.X.resize(out.X_unwrapped.size());
    for (size_t q = 0; q < out.X.size(); ++q) out.X[q] = wrap_unit(out.X_unwrapped[q]);
    return out;
}

FlowMap extend_flow(const FlowMap& flow, const ForceField& force, const AdvectionField& a,
                    double to_s, double dt) {
    if (!(dt > 0.0)) throw config_error("extend_flow: dt must be positive");
    NodeState st{flow.X_unwrapped, flow.V};
    std::vector<char> watched(st.X.size());
    const double fence = kEscapeFence * flow.grid.v_cut;
    for (size_t q = 0; q < st.V.size(); ++q) watched[q] = std::abs(st.V[q]) <= fence;

    const int n = step_count(std::abs(to_s - flow.s), dt);
    const double h = n > 0 ? (to_s - flow.s) / n : 0.0;
    for (int k = 0; k < n; ++k) {
        rk4_step(st, force, a, flow.s + k * h, h);
        check_escape(st, watched, fence, "extend_flow");
    }

    FlowMap out;
    out.s = to_s;
    out.t = flow.t;
    out.grid = flow.grid;
    out.X_unwrapped = std::move(st.X);
    out.V = std::move(st.V);
    out.X.resize(out.X_unwrapped.size());
    for (size_t q = 0; q < out.X.size(); ++q) out.X[q] = wrap_unit(out.X_unwrapped[q]);
    return out;
}

MonotoneCubic invert_velocity_map(const FlowMap& flow, int x_index) {
    const int nv = flow.grid.nv;
    std::vector<double> v_nodes(nv), w(nv);
    for (int j = 0; j < nv; ++j) {
        v_nodes[j] = flow.grid.v(j);
        w[j] = flow.v_at(x_index, j);
    }
    return invert_monotone_samples(v_nodes, w, "invert_velocity_map");
}

PhaseField liouville_det(const FlowMap& flow) {
    const Grid& g = flow.grid;
    const int nx = g.nx, nv = g.nv;
    PhaseField det(g, flow.s);

    // d/dx stencil: centered 5 point, periodic. X differences are wrapped to
    // the nearest image so the seam does not corrupt them.
    static constexpr double cw[4] = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};
    static constexpr int coff[4] = {-2, -1, 1, 2};

    auto wrap_diff = [](double d) { return d - std::round(d); };

    // v-edge stencils (order 4, shifted) per row.
    auto v_stencil = [&](int j) {
        int start = std::clamp(j - 2, 0, nv - 5);
        std::vector<double> xs(5);
        for (int q = 0; q < 5; ++q) xs[q] = (start + q - j) * g.dv;
        return std::make_pair(start, fd_weights(0.0, xs, 1));
    };

    for (int j = 0; j < nv; ++j) {
        auto [vstart, vw] = v_stencil(j);
        for (int i = 0; i < nx; ++i) {
            const size_t q = static_cast<size_t>(j) * nx + i;
            double Xx = 0.0, Vx = 0.0;
            for (int s = 0; s < 4; ++s) {
                const int ii = (i + coff[s] + nx) % nx;
                const size_t qq = static_cast<size_t>(j) * nx + ii;
                Xx += cw[s] * wrap_diff(flow.X[qq] - flow.X[q]);
                Vx += cw[s] * (flow.V[qq] - flow.V[q]);
            }
            Xx /= g.dx;
            Vx /= g.dx;
            double Xv = 0.0, Vv = 0.0;
            for (size_t s = 0; s < vw.size(); ++s) {
                const size_t qq = static_cast<size_t>(vstart + s) * nx + i;
                Xv += vw[s] * wrap_diff(flow.X[qq] - flow.X[q]);
                Vv += vw[s] * flow.V[qq];
            }
            det.at(i, j) = Xx * Vv - Xv * Vx;
        }
    }
    return det;
}

BurgersField solve_burgers(const ForceField& force, const AdvectionField& a, const Grid& grid,
                           double T, double dt, int store_every, double step_bound) {
    if (!(T >= 0.0)) throw config_error("solve_burgers: T must be nonnegative");
    if (!(dt > 0.0)) throw config_error("solve_burgers: dt must be positive");
    if (store_every < 1) throw config_error("solve_burgers: store_every must be >= 1");
    const int nx = grid.nx, nv = grid.nv;

    NodeState st;
    st.X.resize(static_cast<size_t>(nx) * nv);
    st.V.resize(st.X.size()); // V plays the role of phi along the traced curve
    std::vector<char> watched(st.X.size());
    const double fence = kEscapeFence * grid.v_cut;
    for (int j = 0; j < nv; ++j)
        for (int i = 0; i < nx; ++i) {
            const size_t q = static_cast<size_t>(j) * nx + i;
            st.X[q] = grid.x(i);
            st.V[q] = grid.v(j);
            watched[q] = std::abs(grid.v(j)) <= fence;
        }

    BurgersField out;
    out.grid = grid;

    // Exact identity slice at t = 0.
    PhaseField phi0(grid, 0.0);
    for (int j = 0; j < nv; ++j) {
        double* row = phi0.row(j);
        std::fill(row, row + nx, grid.v(j));
    }
    out.times.push_back(0.0);
    out.phi.push_back(std::move(phi0));

    const int n = step_count(T, dt);
    const double h = n > 0 ? T / n : 0.0;
    double prev_dev = 0.0;

    std::vector<double> xs(nx), ys(nx);
    for (int k = 1; k <= n; ++k) {
        rk4_step(st, force, a, (k - 1) * h, h);
        check_escape(st, watched, fence, "solve_burgers");
        if (k % store_every != 0 && k != n) continue;

        const double tk = k * h;
        PhaseField slice(grid, tk);
        double dev = 0.0;
        std::vector<double> x0(nx);
        for (int i = 0; i < nx; ++i) x0[i] = grid.x(i);
        for (int j = 0; j < nv; ++j) {
            const size_t base = static_cast<size_t>(j) * nx;
            for (int i = 0; i < nx; ++i) {
                xs[i] = st.X[base + i];
                ys[i] = st.V[base + i];
            }
            // Characteristic crossing monitor: traced positions must stay a
            // strictly increasing degree-1 circle map of the start positions.
            bool stepmono = strictly_increasing(xs) && (xs.front() + 1.0 > xs.back());
            if (!stepmono)
                throw shock_error("solve_burgers: characteristic crossing (shock) detected", tk);
            // Re-grid by inverting the position map (monotone cubic) and
            // evaluating the profile trigonometrically at the pulled-back
            // labels; the profile is smooth and periodic in the start label.
            auto inv = MonotoneCubic::periodic(xs, x0, 1.0, 1.0);
            FourierInterpolant prof(ys.data(), nx);
            double* row = slice.row(j);
            for (int i = 0; i < nx; ++i) {
                row[i] = prof(inv(grid.x(i)));
                dev = std::max(dev, std::abs(row[i] - grid.v(j)));
            }
        }
        if (dev - prev_dev > step_bound)
            throw horizon_error("solve_burgers: straightening field jumped more than the step "
                                "bound between stored times");
        prev_dev = dev;
        out.times.push_back(tk);
        out.phi.push_back(std::move(slice));
    }
    return out;
}

BurgersEvaluator::BurgersEvaluator(const BurgersField& field) : field_(&field) {
    interp_.reserve(field.phi.size());
    for (const auto& slice : field.phi) interp_.emplace_back(slice);
}

std::pair<int, double> BurgersEvaluator::bracket(double time) const {
    const auto& ts = field_->times;
    if (time <= ts.front()) return {0, 0.0};
    if (time >= ts.back()) return {static_cast<int>(ts.size()) - 2, 1.0};
    const auto it = std::upper_bound(ts.begin(), ts.end(), time);
    const int k = static_cast<int>(it - ts.begin()) - 1;
    const double theta = (time - ts[k]) / (ts[k + 1] - ts[k]);
    return {k, theta};
}

double BurgersEvaluator::at_label(double time, double x, int j) const {
    const auto [k, theta] = bracket(time);
    const double a = interp_[k].row_at(j, x);
    if (theta == 0.0) return a;
    const double b = interp_[k + 1].row_at(j, x);
    return (1.0 - theta) * a + theta * b;
}

double BurgersEvaluator::at(double time, double x, double v) const {
    const Grid& g = field_->grid;
    const double pos = (v + g.v_cut) / g.dv;
    const int j = std::clamp(static_cast<int>(std::floor(pos)), 0, g.nv - 2);
    const double s = pos - j;
    const int j0 = std::clamp(j - 2, 0, g.nv - 6);
    const auto [k, theta] = bracket(time);
    double ga[6], gb[6], gmix[6];
    interp_[k].rows_at(j0, 6, x, ga);
    if (theta != 0.0) {
        interp_[k + 1].rows_at(j0, 6, x, gb);
        for (int q = 0; q < 6; ++q) gmix[q] = (1.0 - theta) * ga[q] + theta * gb[q];
    } else {
        std::copy(ga, ga + 6, gmix);
    }
    return window_cubic(gmix, j - j0, s);
}

namespace {

// RK4 for dX/dtau = a(Phi(tau, X, label)).
template <typename PhiEval>
double integrate_straightened(const PhiEval& phi, const AdvectionField& a, double t, double s,
                              double x0, double dt) {
    const int n = step_count(std::abs(t - s), dt);
    const double h = n > 0 ? (t - s) / n : 0.0;
    double x = x0;
    for (int k = 0; k < n; ++k) {
        const double tau = s + k * h;
        const double k1 = a.eval(phi(tau, x));
        const double k2 = a.eval(phi(tau + 0.5 * h, x + 0.5 * h * k1));
        const double k3 = a.eval(phi(tau + 0.5 * h, x + 0.5 * h * k2));
        const double k4 = a.eval(phi(tau + h, x + h * k3));
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
}

} // namespace

StraightenedFlow straightened_flow(const BurgersEvaluator& burgers, const AdvectionField& a,
                                   double t, double s, double dt) {
    const Grid& g = burgers.field().grid;
    const int nx = g.nx, nv = g.nv;
    StraightenedFlow out;
    out.t = t;
    out.s = s;
    out.grid = g;
    out.X_unwrapped.resize(static_cast<size_t>(nx) * nv);
    out.X.resize(out.X_unwrapped.size());
    out.xtilde.assign(out.X_unwrapped.size(), 0.0);
    out.psi.resize(out.X_unwrapped.size());

    for (int j = 0; j < nv; ++j)
        for (int i = 0; i < nx; ++i) {
            const size_t q = static_cast<size_t>(j) * nx + i;
            auto phi = [&](double tau, double x) { return burgers.at_label(tau, x, j); };
            const double arrive = integrate_straightened(phi, a, t, s, g.x(i), dt);
            out.X_unwrapped[q] = arrive;
            out.X[q] = wrap_unit(arrive);
            if (t != s) out.xtilde[q] = (arrive - g.x(i)) / (t - s) - a.eval(g.v(j));
        }

    // psi: invert v -> X(t,s,x,v) per x column against the free-streaming
    // targets x + (t-s) a(v).
    std::vector<double> v_nodes(nv), xv(nv);
    for (int j = 0; j < nv; ++j) v_nodes[j] = g.v(j);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < nv; ++j) xv[j] = out.X_unwrapped[static_cast<size_t>(j) * nx + i];
        if (t == s) {
            for (int j = 0; j < nv; ++j) out.psi[static_cast<size_t>(j) * nx + i] = v_nodes[j];
            continue;
        }
        std::vector<double> vn = v_nodes, xw = xv;
        if (t < s) { // arrival decreases in v; flip to invert
            std::reverse(vn.begin(), vn.end());
            std::reverse(xw.begin(), xw.end());
        }
        auto inv = invert_monotone_samples(vn, xw, "straightened_flow");
        for (int j = 0; j < nv; ++j) {
            const double target = g.x(i) + (t - s) * a.eval(v_nodes[j]);
            out.psi[static_cast<size_t>(j) * nx + i] = inv(target);
        }
    }
    return out;
}

double straightened_position(const BurgersEvaluator& burgers, const AdvectionField& a, double t,
                             double s, double x0, double vlabel, double dt) {
    auto phi = [&](double tau, double x) { return burgers.at(tau, x, vlabel); };
    return integrate_straightened(phi, a, t, s, x0, dt);
}

} // namespace vlab
