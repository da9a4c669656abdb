#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "vlab/fft.hpp"
#include "vlab/grid.hpp"

namespace vlab {

enum class AdvectionKind { classical, relativistic };

/// Advection field a(v) with closed-form inverse and derivatives.
///
/// classical:    a(v) = v, inverse identity, growth exponent lambda = 0.
/// relativistic: a(v) = v / sqrt(1 + v^2/c^2), range (-c, c),
///               inverse a^-1(w) = w / sqrt(1 - w^2/c^2), lambda = 2.
struct AdvectionField {
    AdvectionKind kind = AdvectionKind::classical;
    double c = 1.0;      ///< light speed (relativistic only)
    double lambda = 0.0; ///< growth exponent of the inverse

    double eval(double v) const;
    /// Throws domain_error when |w| >= c in the relativistic case.
    double inverse(double w) const;
    /// k-th derivative of a, closed form, k in {0,1,2}.
    double deriv(double v, int k) const;

    static AdvectionField classical();
    static AdvectionField relativistic(double c);
};

/// Force evaluator F(t,x,v) with first derivatives; the common currency
/// between the models, characteristics and operators modules.
class ForceField {
  public:
    virtual ~ForceField() = default;
    virtual double value(double t, double x, double v) const = 0;
    virtual double dx(double t, double x, double v) const = 0;
    virtual double dv(double t, double x, double v) const = 0;
};

/// F == 0.
class ZeroForce : public ForceField {
  public:
    double value(double, double, double) const override { return 0.0; }
    double dx(double, double, double) const override { return 0.0; }
    double dv(double, double, double) const override { return 0.0; }
};

/// Closed-form external force, derivatives supplied by the caller.
class AnalyticForce : public ForceField {
  public:
    using fn3 = std::function<double(double, double, double)>;
    AnalyticForce(fn3 value, fn3 ddx, fn3 ddv)
        : value_(std::move(value)), dx_(std::move(ddx)), dv_(std::move(ddv)) {}
    double value(double t, double x, double v) const override { return value_(t, x, v); }
    double dx(double t, double x, double v) const override { return dx_(t, x, v); }
    double dv(double t, double x, double v) const override { return dv_(t, x, v); }

  private:
    fn3 value_, dx_, dv_;
};

/// One term A_j(v) F^j(x) of the moment-determined decomposition, with the
/// spatial part held spectrally for exact off-grid evaluation.
struct ForceTerm {
    FourierInterpolant fj;                  ///< F^j
    std::function<double(double)> a_of_v;   ///< A_j
    std::function<double(double)> da_of_v;  ///< A_j'
};

/// Force assembled from a phase-space state at a fixed time: F(x,v) =
/// sum_j A_j(v) F^j(x). Frozen in t (the solver freezes the force at the
/// start of each step). Immutable after assembly; safe to share.
class AssembledForce : public ForceField {
  public:
    AssembledForce() = default;
    explicit AssembledForce(std::vector<ForceTerm> terms, double time)
        : terms_(std::move(terms)), time_(time) {}

    double value(double, double x, double v) const override;
    double dx(double, double x, double v) const override;
    double dv(double, double x, double v) const override;

    double assembly_time() const { return time_; }
    const std::vector<ForceTerm>& terms() const { return terms_; }

  private:
    std::vector<ForceTerm> terms_;
    double time_ = 0.0;
};

enum class ForceKind { zero, external, poisson, moment_force };
enum class PoissonSign { repulsive, attractive };

/// Declarative force model. The moment specs and coefficients describe the
/// decomposition F = sum_j A_j(v) F^j(t,x); every in-scope kind here has a
/// single term with A_1 == 1.
struct ForceModel {
    ForceKind kind = ForceKind::zero;
    PoissonSign sign = PoissonSign::repulsive;       // poisson
    double shift = 0.0;                              // moment_force
    std::shared_ptr<ForceField> external;            // external
    std::vector<MomentSpec> moment_specs;
    std::vector<std::function<double(double)>> coefficients;

    static ForceModel zero();
    static ForceModel external_force(std::shared_ptr<ForceField> f);
    static ForceModel poisson(PoissonSign sign);
    static ForceModel moment(MomentSpec psi, double shift);
};

/// Electric field of the periodic Poisson coupling: E = -d phi/dx with
/// -phi'' = rho - mean(rho), solved spectrally. Mode 0 of E is zero exactly,
/// so the output has exact zero mean; the attractive sign flips E.
SpatialField poisson_force(const SpatialField& rho, PoissonSign sign);

/// Moment of f against spec.psi, evaluated at x + shift via exact Fourier
/// phase multiplication.
SpatialField moment_force(const PhaseField& f, const MomentSpec& spec, double shift);

/// Assembles the model's force evaluator from the state f (frozen at
/// f.time). Throws config_error for kinds the model cannot assemble.
std::shared_ptr<ForceField> force_assemble(const ForceModel& model, const PhaseField& f);

/// Ratio ||E||_{H^n} / ||rho - mean||_{H^(n-1)} for the spectral Poisson
/// solve; bounded by the exact supremum over modes, see
/// poisson_gain_bound(). Throws domain_error for constant rho.
double poisson_gain_check(const SpatialField& rho, int n);

/// sup_{m >= 1} (1+(2 pi m)^2)^(1/2) / (2 pi m); attained at m = 1 and
/// independent of n.
double poisson_gain_bound();

} // namespace vlab
