#include "vlab/models.hpp"

#include <cmath>
#include <numbers>

#include "vlab/calculus.hpp"

namespace vlab {

using std::numbers::pi;

AdvectionField AdvectionField::classical() {
    return AdvectionField{AdvectionKind::classical, 1.0, 0.0};
}

AdvectionField AdvectionField::relativistic(double c) {
    if (!(c > 0.0)) throw config_error("advection.c must be positive");
    return AdvectionField{AdvectionKind::relativistic, c, 2.0};
}

double AdvectionField::eval(double v) const {
    if (kind == AdvectionKind::classical) return v;
    return v / std::sqrt(1.0 + v * v / (c * c));
}

double AdvectionField::inverse(double w) const {
    if (kind == AdvectionKind::classical) return w;
    if (!(std::abs(w) < c)) throw domain_error("advection inverse: |w| >= c is outside a(R)");
    return w / std::sqrt(1.0 - w * w / (c * c));
}

double AdvectionField::deriv(double v, int k) const {
    if (kind == AdvectionKind::classical) {
        if (k == 0) return v;
        return k == 1 ? 1.0 : 0.0;
    }
    const double u = 1.0 + v * v / (c * c);
    switch (k) {
        case 0: return v / std::sqrt(u);
        case 1: return std::pow(u, -1.5);
        case 2: return -3.0 * v / (c * c) * std::pow(u, -2.5);
        default: throw config_error("advection derivative order beyond closed forms (k <= 2)");
    }
}

double AssembledForce::value(double, double x, double v) const {
    double acc = 0.0;
    for (const auto& t : terms_) acc += t.a_of_v(v) * t.fj(x);
    return acc;
}

double AssembledForce::dx(double, double x, double v) const {
    double acc = 0.0;
    for (const auto& t : terms_) acc += t.a_of_v(v) * t.fj.derivative(x, 1);
    return acc;
}

double AssembledForce::dv(double, double x, double v) const {
    double acc = 0.0;
    for (const auto& t : terms_) acc += t.da_of_v(v) * t.fj(x);
    return acc;
}

ForceModel ForceModel::zero() { return ForceModel{}; }

ForceModel ForceModel::external_force(std::shared_ptr<ForceField> f) {
    ForceModel m;
    m.kind = ForceKind::external;
    m.external = std::move(f);
    return m;
}

ForceModel ForceModel::poisson(PoissonSign sign) {
    ForceModel m;
    m.kind = ForceKind::poisson;
    m.sign = sign;
    m.moment_specs = {MomentSpec::unit()};
    m.coefficients = {[](double) { return 1.0; }};
    return m;
}

ForceModel ForceModel::moment(MomentSpec psi, double shift) {
    ForceModel m;
    m.kind = ForceKind::moment_force;
    m.shift = shift;
    m.moment_specs = {std::move(psi)};
    m.coefficients = {[](double) { return 1.0; }};
    return m;
}

SpatialField poisson_force(const SpatialField& rho, PoissonSign sign) {
    const int n = rho.nx;
    auto c = fft_of_real(rho.values.data(), n);
    const double flip = (sign == PoissonSign::repulsive) ? 1.0 : -1.0;
    std::vector<std::complex<double>> e(n, 0.0);
    for (int m = 1; m < n; ++m) {
        const int k = signed_freq(m, n);
        if (k == 0) continue;
        // E_hat = -i rho_hat / (2 pi k) in the repulsive convention.
        e[m] = flip * std::complex<double>(0.0, -1.0) * c[m] / (2.0 * pi * k);
    }
    if (n % 2 == 0) e[n / 2] = 0.0;
    fft_backward(e);
    SpatialField out(n, rho.time);
    for (int i = 0; i < n; ++i) out.values[i] = e[i].real() / n;
    return out;
}

SpatialField moment_force(const PhaseField& f, const MomentSpec& spec, double shift) {
    SpatialField m = moment(f, spec);
    if (shift == 0.0) return m;
    return fourier_shift(m, shift);
}

std::shared_ptr<ForceField> force_assemble(const ForceModel& model, const PhaseField& f) {
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    switch (model.kind) {
        case ForceKind::zero:
            return std::make_shared<ZeroForce>();
        case ForceKind::external:
            if (!model.external) throw config_error("external force model without evaluator");
            return model.external;
        case ForceKind::poisson: {
            SpatialField rho = moment(f, model.moment_specs.at(0));
            SpatialField e = poisson_force(rho, model.sign);
            std::vector<ForceTerm> terms;
            terms.push_back(ForceTerm{FourierInterpolant(e), one, zero});
            return std::make_shared<AssembledForce>(std::move(terms), f.time);
        }
        case ForceKind::moment_force: {
            SpatialField fj = moment_force(f, model.moment_specs.at(0), model.shift);
            std::vector<ForceTerm> terms;
            terms.push_back(ForceTerm{FourierInterpolant(fj), one, zero});
            return std::make_shared<AssembledForce>(std::move(terms), f.time);
        }
    }
    throw config_error("unsupported force model kind");
}

double poisson_gain_check(const SpatialField& rho, int n) {
    if (n < 1) throw config_error("poisson gain check: n must be >= 1");
    SpatialField e = poisson_force(rho, PoissonSign::repulsive);
    const double denom = spectral_hn_norm_meanfree(rho, n - 1);
    if (denom == 0.0)
        throw domain_error("poisson gain check: rho is constant, ratio undefined");
    return spectral_hn_norm(e, n) / denom;
}

double poisson_gain_bound() {
    const double k = 2.0 * pi;
    return std::sqrt(1.0 + k * k) / k;
}

} // namespace vlab
