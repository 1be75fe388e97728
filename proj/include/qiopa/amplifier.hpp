#pragma once

#include "qiopa/oracle.hpp"
#include "qiopa/params.hpp"
#include "qiopa/su2.hpp"

#include <array>
#include <cmath>
#include <utility>

namespace qiopa {

// The two amplified macrostates, summed in ascending pair order n = i + j and
// ascending j within each order:
//   |Psi>^alpha = C^-3 sum (-Gamma)^(i+j) eps^j sqrt(i+1) |i+1, j, j, i>
//   |Psi>^beta  = C^-3 sum (-Gamma)^(i+j) eps^j sqrt(j+1) |i, j+1, j, i>
inline std::pair<StateVector, StateVector> macrostates(const AmplifierParams& params, int cutoff) {
    if (cutoff < 2) throw Error(ErrorKind::invalid_arguments, "macrostates need cutoff >= 2");
    const double gamma = params.Gamma();
    const cplx eps = params.epsilon();
    const double c3 = std::pow(params.C(), -3.0);
    StateVector alpha(cutoff), beta(cutoff);
    const int max_order = cutoff; // orders past (cutoff-1)/2 only feed leakage
    for (int n = 0; n <= max_order; ++n) {
        const double gamma_pow = std::pow(-gamma, n);
        if (gamma_pow == 0.0 && n > 0) break;
        for (int j = 0; j <= n; ++j) {
            const int i = n - j;
            const cplx base = c3 * gamma_pow * std::pow(eps, j);
            alpha.accumulate(OccupationKet(i + 1, j, j, i), base * std::sqrt(double(i + 1)));
            beta.accumulate(OccupationKet(i, j + 1, j, i), base * std::sqrt(double(j + 1)));
        }
    }
    // everything beyond max_order is truncation loss
    const double tail = 1.0 - alpha.norm2() - alpha.leakage();
    alpha.add_leakage(std::max(tail, 0.0));
    const double tail_b = 1.0 - beta.norm2() - beta.leakage();
    beta.add_leakage(std::max(tail_b, 0.0));
    alpha.prune();
    beta.prune();
    return {std::move(alpha), std::move(beta)};
}

// Output of the quantum-injected amplifier: alpha |Psi>^alpha + beta |Psi>^beta.
inline StateVector evolve_qubit(const PolarizationQubit& qubit, const AmplifierParams& params, int cutoff = 12) {
    auto [ma, mb] = macrostates(params, cutoff);
    StateVector out(cutoff);
    const double la = ma.leakage(), lb = mb.leakage();
    ma *= qubit.alpha;
    mb *= qubit.beta;
    for (const auto& [k, a] : ma.amplitudes()) out.accumulate(k, a);
    for (const auto& [k, a] : mb.amplitudes()) out.accumulate(k, a);
    out.add_leakage(std::norm(qubit.alpha) * la + std::norm(qubit.beta) * lb);
    out.prune();
    return out;
}

// Vacuum-injected output (spontaneous emission): the product of the two
// independent two-mode squeezed vacua,
//   C^-2 sum (-Gamma)^(i+j) eps^j |i, j, j, i>.
// To first order at Phi = 0 this is |0> - Gamma(|1,0;0,1> - |0,1;1,0>).
inline StateVector spdc_output(const AmplifierParams& params, int cutoff = 12) {
    const double gamma = params.Gamma();
    const cplx eps = params.epsilon();
    const double c2 = std::pow(params.C(), -2.0);
    StateVector out(cutoff);
    for (int n = 0; n <= cutoff; ++n) {
        const double gamma_pow = std::pow(-gamma, n);
        if (gamma_pow == 0.0 && n > 0) break;
        for (int j = 0; j <= n; ++j) {
            const int i = n - j;
            out.accumulate(OccupationKet(i, j, j, i), c2 * gamma_pow * std::pow(eps, j));
        }
    }
    const double tail = 1.0 - out.norm2() - out.leakage();
    out.add_leakage(std::max(tail, 0.0));
    out.prune();
    return out;
}

// First-order output of Eq.-14 type.  For the H qubit:
//   |1,0,0,0> - Gamma (sqrt(2)|2,0;0,1> - |1,1;1,0>),
// and for general qubits the SU(2)-rotated image of that expression.  The
// rotated form is only invariant at Phi = 0, which is enforced.
inline StateVector first_order_output(const PolarizationQubit& qubit, const AmplifierParams& params) {
    if (!params.phase_is_zero())
        throw Error(ErrorKind::unsupported_configuration,
                    "first-order form is only universal at Phi = 0");
    const double gamma = params.Gamma();
    StateVector h_form(4);
    h_form.accumulate(OccupationKet(1, 0, 0, 0), 1.0);
    h_form.accumulate(OccupationKet(2, 0, 0, 1), -gamma * std::sqrt(2.0));
    h_form.accumulate(OccupationKet(1, 1, 1, 0), gamma);
    const Su2Element r = Su2Element::taking_h_to(qubit);
    return apply_polarization_rotation(h_form, r, RotationTarget::both);
}

// Binomial coefficient as double (exact for the ranges used here).
inline double binomial(int n, int k) { return detail::binomial_d(n, k); }

// Optimum N -> M cloning output state:
//   sum_m (-1)^m P(m) |M-m, m, m, M-N-m>, P(m) = sqrt(C(M-m,N)/C(M+1,N+1)).
inline StateVector nm_clone_state(int n_in, int m_out) {
    if (n_in < 1 || m_out < n_in)
        throw Error(ErrorKind::invalid_arguments, "need M >= N >= 1");
    const int cutoff = 2 * m_out - n_in;
    StateVector out(cutoff);
    const double denom = binomial(m_out + 1, n_in + 1);
    for (int m = 0; m <= m_out - n_in; ++m) {
        const double p = std::sqrt(binomial(m_out - m, n_in) / denom);
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        out.accumulate(OccupationKet(m_out - m, m, m, m_out - n_in - m), sign * p);
    }
    return out;
}

// The two 2x2 Bogoliubov matrices: [[C, S], [S, C]] for the A pair and
// [[C, S~], [conj(S~), C]] for the A' pair, S~ = eps S.
inline std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> bogoliubov_coefficients(const AmplifierParams& p) {
    Eigen::Matrix2cd a, ap;
    a << p.C(), p.S(), p.S(), p.C();
    ap << p.C(), p.S_tilde(), std::conj(p.S_tilde()), p.C();
    return {a, ap};
}

struct CoherentGain {
    double n1h = 0.0, n1v = 0.0, n2h = 0.0, n2v = 0.0;
    double k1_total() const { return n1h + n1v; }
    double k2_total() const { return n2h + n2v; }
};

// Mean photon numbers after amplification of a coherent injection
// (alpha_h, alpha_v) on k1 and vacuum on k2 (Heisenberg-picture moments):
//   <n_1h> = C^2 |a_h|^2 + S^2,        <n_1v> = C^2 |a_v|^2 + S^2,
//   <n_2v> = S^2 (|a_h|^2 + 1),        <n_2h> = S^2 (|a_v|^2 + 1).
inline CoherentGain coherent_gain(cplx alpha_h, cplx alpha_v, const AmplifierParams& p) {
    const double c2 = p.C() * p.C();
    const double s2 = p.S() * p.S();
    CoherentGain out;
    out.n1h = c2 * std::norm(alpha_h) + s2;
    out.n1v = c2 * std::norm(alpha_v) + s2;
    out.n2v = s2 * (std::norm(alpha_h) + 1.0);
    out.n2h = s2 * (std::norm(alpha_v) + 1.0);
    return out;
}

// Two-mode (collinear) amplifier evolution.  The parallel/perpendicular modes
// ride on the 1h/1v slots; for qubit (1,0) the output is
// |1,0> - sqrt(2) Gamma |2,1> + O(Gamma^2).
inline StateVector degenerate_evolve(const PolarizationQubit& qubit, const AmplifierParams& params,
                                     int cutoff = 12) {
    StateVector in(cutoff);
    in.accumulate(OccupationKet(1, 0, 0, 0), qubit.alpha);
    in.accumulate(OccupationKet(0, 1, 0, 0), qubit.beta);
    return degenerate_oracle(in, params, cutoff);
}

// Degenerate evolution of the two-mode vacuum: |0,0> - Gamma |1,1> + O(Gamma^2).
inline StateVector degenerate_vacuum_output(const AmplifierParams& params, int cutoff = 12) {
    StateVector in(cutoff);
    in.accumulate(OccupationKet(0, 0, 0, 0), 1.0);
    return degenerate_oracle(in, params, cutoff);
}

} // namespace qiopa
