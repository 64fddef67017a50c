#pragma once

#include <cmath>

namespace edl {

/// System state (H, Q, M): human cognition, data quality, model capability.
/// Also used for rate vectors of the same shape.
struct StateVec {
    double H = 0.0;
    double Q = 0.0;
    double M = 0.0;

    bool operator==(const StateVec&) const = default;

    StateVec& operator+=(const StateVec& o) {
        H += o.H;
        Q += o.Q;
        M += o.M;
        return *this;
    }
    StateVec& operator-=(const StateVec& o) {
        H -= o.H;
        Q -= o.Q;
        M -= o.M;
        return *this;
    }
    StateVec& operator*=(double s) {
        H *= s;
        Q *= s;
        M *= s;
        return *this;
    }

    double operator[](int i) const { return i == 0 ? H : (i == 1 ? Q : M); }
    double& operator[](int i) { return i == 0 ? H : (i == 1 ? Q : M); }
};

inline StateVec operator+(StateVec a, const StateVec& b) { return a += b; }
inline StateVec operator-(StateVec a, const StateVec& b) { return a -= b; }
inline StateVec operator*(double s, StateVec a) { return a *= s; }
inline StateVec operator*(StateVec a, double s) { return a *= s; }

inline double norm(const StateVec& x) { return std::sqrt(x.H * x.H + x.Q * x.Q + x.M * x.M); }

inline bool is_finite(const StateVec& x) {
    return std::isfinite(x.H) && std::isfinite(x.Q) && std::isfinite(x.M);
}

}  // namespace edl
