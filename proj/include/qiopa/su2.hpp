#pragma once

#include "qiopa/fock.hpp"

#include <cmath>
#include <vector>

namespace qiopa {

namespace detail {

inline double factorial_d(int n) {
    static const std::vector<double> table = [] {
        std::vector<double> t(64, 1.0);
        for (int i = 1; i < 64; ++i) t[i] = t[i - 1] * i;
        return t;
    }();
    return table.at(n);
}

inline double binomial_d(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    return factorial_d(n) / (factorial_d(k) * factorial_d(n - k));
}

} // namespace detail

// Unit-determinant polarization rotation [[theta, zeta], [-conj(zeta), conj(theta)]].
struct Su2Element {
    cplx theta{1.0, 0.0};
    cplx zeta{0.0, 0.0};

    Su2Element() = default;
    Su2Element(cplx t, cplx z) : theta(t), zeta(z) {
        if (std::abs(std::norm(theta) + std::norm(zeta) - 1.0) > 1e-12)
            throw Error(ErrorKind::invalid_arguments, "|theta|^2 + |zeta|^2 must be 1");
    }

    static Su2Element identity() { return {}; }

    Su2Element inverse() const { return Su2Element(std::conj(theta), -zeta); }

    // Element whose matrix takes (1,0) to the given qubit amplitudes.
    static Su2Element taking_h_to(const PolarizationQubit& q) {
        return Su2Element(q.alpha, -std::conj(q.beta));
    }
};

// Matrix action on the amplitude pair; norm is preserved.
inline PolarizationQubit rotate_qubit(const PolarizationQubit& q, const Su2Element& r) {
    const cplx a = r.theta * q.alpha + r.zeta * q.beta;
    const cplx b = -std::conj(r.zeta) * q.alpha + std::conj(r.theta) * q.beta;
    return PolarizationQubit(a, b);
}

namespace detail {

// Amplitudes of the rotated two-mode ket |nh, nv> under the creation-operator
// substitution bh^dag = theta ah^dag - conj(zeta) av^dag,
// bv^dag = zeta ah^dag + conj(theta) av^dag (the lift of the qubit rotation).
inline std::vector<std::pair<std::pair<int, int>, cplx>>
rotate_pair_ket(int nh, int nv, const Su2Element& r) {
    const int total = nh + nv;
    std::vector<cplx> coeff(total + 1, 0.0); // indexed by resulting h-count
    for (int p = 0; p <= nh; ++p) {
        const cplx ch = binomial_d(nh, p) * std::pow(r.theta, p) * std::pow(-std::conj(r.zeta), nh - p);
        for (int q = 0; q <= nv; ++q) {
            const cplx cv = binomial_d(nv, q) * std::pow(r.zeta, q) * std::pow(std::conj(r.theta), nv - q);
            coeff[p + q] += ch * cv;
        }
    }
    std::vector<std::pair<std::pair<int, int>, cplx>> out;
    const double base = std::sqrt(factorial_d(nh) * factorial_d(nv));
    for (int kh = 0; kh <= total; ++kh) {
        if (coeff[kh] == cplx(0.0)) continue;
        const int kv = total - kh;
        const double scale = std::sqrt(factorial_d(kh) * factorial_d(kv)) / base;
        out.push_back({{kh, kv}, coeff[kh] * scale});
    }
    return out;
}

} // namespace detail

enum class RotationTarget { k1, k2, both };

// Applies the same SU(2) polarization rotation to the (h, v) mode pair of the
// selected spatial mode(s).  Photon number per spatial mode is conserved.
inline StateVector apply_polarization_rotation(const StateVector& state, const Su2Element& r,
                                               RotationTarget target = RotationTarget::both) {
    const bool do_k1 = target != RotationTarget::k2;
    const bool do_k2 = target != RotationTarget::k1;
    StateVector out(state.cutoff());
    out.add_leakage(state.leakage());
    for (const auto& [k, a] : state.amplitudes()) {
        std::vector<std::pair<std::pair<int, int>, cplx>> k1_terms, k2_terms;
        if (do_k1) k1_terms = detail::rotate_pair_ket(k[Mode::k1h], k[Mode::k1v], r);
        else k1_terms = {{{k[Mode::k1h], k[Mode::k1v]}, 1.0}};
        if (do_k2) k2_terms = detail::rotate_pair_ket(k[Mode::k2h], k[Mode::k2v], r);
        else k2_terms = {{{k[Mode::k2h], k[Mode::k2v]}, 1.0}};
        for (const auto& [p1, c1] : k1_terms)
            for (const auto& [p2, c2] : k2_terms)
                out.accumulate(OccupationKet(p1.first, p1.second, p2.first, p2.second), a * c1 * c2);
    }
    out.prune();
    return out;
}

} // namespace qiopa
