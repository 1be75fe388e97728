#pragma once

#include "qiopa/density.hpp"
#include "qiopa/params.hpp"
#include "qiopa/su2.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <vector>

namespace qiopa {

namespace detail {

// All four-mode kets with total photon number <= cap, in ket ordering.
struct FockBasis {
    std::vector<OccupationKet> kets;
    std::map<OccupationKet, int> index;

    explicit FockBasis(int cap) {
        for (int a = 0; a <= cap; ++a)
            for (int b = 0; a + b <= cap; ++b)
                for (int c = 0; a + b + c <= cap; ++c)
                    for (int d = 0; a + b + c + d <= cap; ++d)
                        kets.push_back(OccupationKet(a, b, c, d));
        std::sort(kets.begin(), kets.end());
        for (std::size_t i = 0; i < kets.size(); ++i) index[kets[i]] = static_cast<int>(i);
    }

    int size() const { return static_cast<int>(kets.size()); }
};

// Sparse operator as adjacency rows: out[i] = sum_j rows[i][j].second * v[rows[i][j].first].
using SparseRows = std::vector<std::vector<std::pair<int, cplx>>>;

inline void add_entry(SparseRows& rows, int r, int c, cplx v) {
    if (v != cplx(0.0)) rows[r].push_back({c, v});
}

// Pair annihilator A = a_mode1 a_mode2 as sparse rows on the basis; the
// conjugate pair creator is accumulated with coefficient `creation_coeff`
// and the annihilator itself with `annihilation_coeff`.
inline void accumulate_pair_terms(SparseRows& rows, const FockBasis& basis, Mode m1, Mode m2,
                                  cplx annihilation_coeff, cplx creation_coeff) {
    for (int i = 0; i < basis.size(); ++i) {
        const OccupationKet& k = basis.kets[i];
        const int n1 = k[m1];
        const int n2 = k[m2];
        if (annihilation_coeff != cplx(0.0) && n1 > 0 && n2 > 0) {
            OccupationKet down = k;
            down[m1] = n1 - 1;
            down[m2] = n2 - 1;
            add_entry(rows, basis.index.at(down), i, annihilation_coeff * std::sqrt(double(n1 * n2)));
        }
        if (creation_coeff != cplx(0.0)) {
            OccupationKet up = k;
            up[m1] = n1 + 1;
            up[m2] = n2 + 1;
            auto it = basis.index.find(up);
            if (it != basis.index.end())
                add_entry(rows, it->second, i, creation_coeff * std::sqrt(double((n1 + 1) * (n2 + 1))));
        }
    }
}

// Anti-Hermitian generator K with U = exp(K):
//   K = g [ (A - A^dag) + (e^{-i Phi} A'^dag - e^{i Phi} A') ],
// A = a_1h a_2v, A' = a_1v a_2h.
inline SparseRows qiopa_generator(const FockBasis& basis, const AmplifierParams& p) {
    SparseRows rows(basis.size());
    const cplx eminus = std::exp(cplx(0.0, -p.phi));
    const cplx eplus = std::exp(cplx(0.0, p.phi));
    accumulate_pair_terms(rows, basis, Mode::k1h, Mode::k2v, p.g, -p.g);
    accumulate_pair_terms(rows, basis, Mode::k1v, Mode::k2h, -p.g * eplus, p.g * eminus);
    return rows;
}

// Two-mode collinear generator K = g (A - A^dag), A = a_par a_perp, with the
// parallel/perpendicular modes carried on the 1h/1v slots.
inline SparseRows degenerate_generator(const FockBasis& basis, const AmplifierParams& p) {
    SparseRows rows(basis.size());
    accumulate_pair_terms(rows, basis, Mode::k1h, Mode::k1v, p.g, -p.g);
    return rows;
}

inline double one_norm(const SparseRows& rows, int n) {
    std::vector<double> col(n, 0.0);
    for (const auto& row : rows)
        for (const auto& [c, v] : row) col[c] += std::abs(v);
    double m = 0.0;
    for (double x : col) m = std::max(m, x);
    return m;
}

// v <- exp(K) v by scaled Taylor summation; K anti-Hermitian keeps this stable.
inline void expm_multiply(const SparseRows& rows, std::vector<cplx>& v) {
    const int n = static_cast<int>(v.size());
    const double norm_bound = one_norm(rows, n);
    const int steps = std::max(1, static_cast<int>(std::ceil(norm_bound)));
    std::vector<cplx> term(n), next(n), acc(n);
    for (int s = 0; s < steps; ++s) {
        acc = v;
        term = v;
        for (int k = 1; k <= 80; ++k) {
            std::fill(next.begin(), next.end(), cplx(0.0));
            for (int i = 0; i < n; ++i) {
                for (const auto& [c, coeff] : rows[i]) next[i] += coeff * term[c];
            }
            const double scale = 1.0 / (double(steps) * k);
            double term_norm = 0.0, acc_norm = 0.0;
            for (int i = 0; i < n; ++i) {
                term[i] = next[i] * scale;
                acc[i] += term[i];
                term_norm += std::norm(term[i]);
                acc_norm += std::norm(acc[i]);
            }
            if (term_norm < 1e-34 * std::max(acc_norm, 1.0)) break;
        }
        v = acc;
    }
}

// Enlarged internal cutoff so that truncated-generator boundary artifacts on
// the retained sector stay far below the 1e-8 comparison tolerances.
inline int oracle_margin(double gamma) {
    if (gamma < 1e-8) return 2;
    const double decay = std::max(-std::log(gamma), 0.35);
    int m = static_cast<int>(std::ceil(28.0 / decay));
    return std::min(m + (m % 2), 36);
}

inline StateVector evolve_with_generator(const StateVector& input, int cutoff,
                                         const FockBasis& basis, const SparseRows& gen) {
    std::vector<cplx> v(basis.size(), cplx(0.0));
    double leak = input.leakage();
    for (const auto& [k, a] : input.amplitudes()) {
        auto it = basis.index.find(k);
        if (it == basis.index.end()) leak += std::norm(a);
        else v[it->second] = a;
    }
    expm_multiply(gen, v);
    StateVector out(cutoff);
    for (int i = 0; i < basis.size(); ++i) {
        if (v[i] == cplx(0.0)) continue;
        if (basis.kets[i].total() > cutoff) leak += std::norm(v[i]);
        else out.accumulate(basis.kets[i], v[i]);
    }
    out.add_leakage(leak);
    out.prune();
    return out;
}

} // namespace detail

// Returns the number of four-mode kets with total photon number <= cap.
inline long basis_size(int cap) {
    const long n = cap;
    return (n + 1) * (n + 2) * (n + 3) * (n + 4) / 24;
}

// Brute-force evolution: exp of the truncated interaction generator applied to
// the input on an enlarged internal basis, then cropped to `cutoff` with the
// cropped weight reported as leakage.
inline StateVector evolution_oracle(const StateVector& input, const AmplifierParams& params, int cutoff) {
    if (basis_size(cutoff) > 4000)
        throw Error(ErrorKind::resource_limit,
                    "oracle basis too large: cutoff " + std::to_string(cutoff));
    const int internal = cutoff + detail::oracle_margin(params.Gamma());
    if (basis_size(internal) > 200000)
        throw Error(ErrorKind::resource_limit, "oracle internal basis too large");
    detail::FockBasis basis(internal);
    const detail::SparseRows gen = detail::qiopa_generator(basis, params);
    return detail::evolve_with_generator(input, cutoff, basis, gen);
}

// Same machinery for the two-mode collinear amplifier (modes on the 1h/1v slots).
inline StateVector degenerate_oracle(const StateVector& input, const AmplifierParams& params, int cutoff) {
    const int internal = cutoff + detail::oracle_margin(params.Gamma());
    detail::FockBasis basis(internal);
    const detail::SparseRows gen = detail::degenerate_generator(basis, params);
    return detail::evolve_with_generator(input, cutoff, basis, gen);
}

namespace detail {

// Dense annihilation operator for one mode on the truncated four-mode basis.
inline Eigen::MatrixXcd dense_annihilator(const FockBasis& basis, Mode m) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(basis.size(), basis.size());
    for (int i = 0; i < basis.size(); ++i) {
        const int n = basis.kets[i][m];
        if (n == 0) continue;
        OccupationKet down = basis.kets[i];
        down[m] = n - 1;
        a(basis.index.at(down), i) = std::sqrt(double(n));
    }
    return a;
}

} // namespace detail

// Interaction Hamiltonian in units of hbar*chi on the truncated basis,
// optionally built from SU(2)-rotated mode operators:
//   H = i (A - e^{i Phi} A') + h.c.
inline Eigen::MatrixXcd hamiltonian_matrix(double phi, int cutoff,
                                           const Su2Element& r = Su2Element::identity()) {
    if (basis_size(cutoff) > 4000)
        throw Error(ErrorKind::resource_limit, "hamiltonian basis too large");
    detail::FockBasis basis(cutoff);
    const Eigen::MatrixXcd a1h = detail::dense_annihilator(basis, Mode::k1h);
    const Eigen::MatrixXcd a1v = detail::dense_annihilator(basis, Mode::k1v);
    const Eigen::MatrixXcd a2h = detail::dense_annihilator(basis, Mode::k2h);
    const Eigen::MatrixXcd a2v = detail::dense_annihilator(basis, Mode::k2v);
    const cplx t = r.theta, z = r.zeta;
    const Eigen::MatrixXcd r1h = t * a1h + z * a1v;
    const Eigen::MatrixXcd r1v = -std::conj(z) * a1h + std::conj(t) * a1v;
    const Eigen::MatrixXcd r2h = t * a2h + z * a2v;
    const Eigen::MatrixXcd r2v = -std::conj(z) * a2h + std::conj(t) * a2v;
    const Eigen::MatrixXcd pair_a = r1h * r2v;
    const Eigen::MatrixXcd pair_ap = r1v * r2h;
    const Eigen::MatrixXcd m = cplx(0.0, 1.0) * (pair_a - std::exp(cplx(0.0, phi)) * pair_ap);
    return m + m.adjoint();
}

inline double operator_norm(const Eigen::MatrixXcd& hermitian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

} // namespace qiopa
