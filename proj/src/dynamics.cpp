#include "edl/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace edl {

std::string ValidationResult::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < violations_.size(); ++i) {
        if (i) os << "; ";
        os << violations_[i].message();
    }
    return os.str();
}

void ValidationResult::throw_if_invalid() const {
    if (!ok()) throw ValidationError(violations_);
}

namespace {

std::string join_messages(const std::vector<Violation>& v) {
    ValidationResult r;
    for (const auto& x : v) r.add(x.field, x.constraint);
    return r.to_string();
}

void check_positive(ValidationResult& r, const char* name, double v) {
    if (!std::isfinite(v))
        r.add(name, "be finite");
    else if (!(v > 0.0))
        r.add(name, "be > 0");
}

void check_nonneg(ValidationResult& r, const std::string& name, double v) {
    if (!std::isfinite(v))
        r.add(name, "be finite");
    else if (v < 0.0)
        r.add(name, "be >= 0");
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error("invalid configuration: " + join_messages(violations)), violations_(std::move(violations)) {}

ValidationResult validate(const SystemParams& p, const ControlParams& c) {
    ValidationResult r;
    check_positive(r, "a", p.a);
    check_positive(r, "b", p.b);
    check_positive(r, "c", p.c);
    check_positive(r, "d", p.d);
    check_positive(r, "e", p.e);
    check_positive(r, "f", p.f);
    check_nonneg(r, "r_H", p.r_H);
    check_nonneg(r, "r_Q", p.r_Q);
    check_nonneg(r, "r_M", p.r_M);
    check_positive(r, "alpha", c.alpha);
    check_positive(r, "beta", c.beta);
    if (!std::isfinite(c.u) || c.u < 0.0 || c.u > 1.0) r.add("u", "lie in [0,1]");
    return r;
}

ValidationResult validate_state(const StateVec& s, const char* prefix) {
    ValidationResult r;
    const std::string p(prefix);
    check_nonneg(r, p + ".H", s.H);
    check_nonneg(r, p + ".Q", s.Q);
    check_nonneg(r, p + ".M", s.M);
    return r;
}

ControlSignals control_signals(const StateVec& state, const ControlParams& control) {
    const double A = control.alpha * control.u * state.M;
    return {A, control.beta * A};
}

StateVec derivative(const StateVec& x, const SystemParams& p, const ControlParams& c) {
    const ControlSignals sig = control_signals(x, c);
    const StateVec dx{
        p.a * (1.0 - c.u) - p.b * c.u * x.H + p.r_H,
        p.c * x.H - p.d * sig.A + p.r_Q,
        p.e * x.Q - p.f * sig.S + p.r_M,
    };
    if (!std::isfinite(dx.H)) throw NumericalError("derivative: dH/dt is not finite");
    if (!std::isfinite(dx.Q)) throw NumericalError("derivative: dQ/dt is not finite");
    if (!std::isfinite(dx.M)) throw NumericalError("derivative: dM/dt is not finite");
    return dx;
}

}  // namespace edl
