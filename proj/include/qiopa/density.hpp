#pragma once

#include "qiopa/fock.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

namespace qiopa {

// Hermitian operator on a two-mode (one spatial mode) subsystem, carried on an
// explicit ordered basis of (nh, nv) occupation pairs.
class DensityMatrix {
  public:
    using PairBasis = std::vector<std::pair<int, int>>;

    DensityMatrix() = default;
    explicit DensityMatrix(PairBasis basis, double leakage = 0.0)
        : basis_(std::move(basis)), leakage_(leakage) {
        entries_ = Eigen::MatrixXcd::Zero(basis_.size(), basis_.size());
        for (std::size_t i = 0; i < basis_.size(); ++i) index_[basis_[i]] = i;
    }

    int dim() const { return static_cast<int>(basis_.size()); }
    const PairBasis& basis() const { return basis_; }
    const Eigen::MatrixXcd& entries() const { return entries_; }
    Eigen::MatrixXcd& entries() { return entries_; }
    double leakage() const { return leakage_; }
    void set_leakage(double l) { leakage_ = l; }

    bool has_pair(int nh, int nv) const { return index_.count({nh, nv}) > 0; }
    int index_of(int nh, int nv) const {
        auto it = index_.find({nh, nv});
        if (it == index_.end()) throw Error(ErrorKind::invalid_arguments, "pair not in basis");
        return static_cast<int>(it->second);
    }

    void accumulate(int row_nh, int row_nv, int col_nh, int col_nv, cplx value) {
        entries_(index_of(row_nh, row_nv), index_of(col_nh, col_nv)) += value;
    }

    double trace() const { return entries_.trace().real(); }

    double hermiticity_defect() const {
        return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    }

    Eigen::VectorXd eigenvalues() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries_, Eigen::EigenvaluesOnly);
        return es.eigenvalues();
    }

    double frobenius_distance(const DensityMatrix& other) const {
        // union of the two bases, missing entries are zero
        std::map<std::pair<int, int>, int> joint;
        for (const auto& p : basis_) joint.emplace(p, 0);
        for (const auto& p : other.basis_) joint.emplace(p, 0);
        std::vector<std::pair<int, int>> keys;
        for (auto& [p, idx] : joint) { idx = static_cast<int>(keys.size()); keys.push_back(p); }
        double s = 0.0;
        auto get = [](const DensityMatrix& m, const std::pair<int, int>& r, const std::pair<int, int>& c) {
            if (!m.index_.count(r) || !m.index_.count(c)) return cplx(0.0);
            return m.entries_(m.index_.at(r), m.index_.at(c));
        };
        for (const auto& r : keys)
            for (const auto& c : keys) s += std::norm(get(*this, r, c) - get(other, r, c));
        return std::sqrt(s);
    }

  private:
    PairBasis basis_;
    Eigen::MatrixXcd entries_;
    std::map<std::pair<int, int>, std::size_t> index_;
    double leakage_ = 0.0;
};

// Reduced density matrix over the two polarization modes of the kept spatial
// mode; trace equals the stored norm^2 of the input state.
inline DensityMatrix partial_trace(const StateVector& state, SpatialMode keep) {
    const bool keep_k1 = keep == SpatialMode::k1;
    std::map<std::pair<int, int>, int> seen;
    for (const auto& [k, a] : state.amplitudes()) {
        seen.emplace(keep_k1 ? std::make_pair(k[Mode::k1h], k[Mode::k1v])
                             : std::make_pair(k[Mode::k2h], k[Mode::k2v]),
                     0);
    }
    DensityMatrix::PairBasis basis;
    basis.reserve(seen.size());
    for (const auto& [p, unused] : seen) basis.push_back(p);
    DensityMatrix rho(basis, state.leakage());

    // group amplitudes by the traced-out pair
    std::map<std::pair<int, int>, std::vector<std::pair<std::pair<int, int>, cplx>>> groups;
    for (const auto& [k, a] : state.amplitudes()) {
        const auto kept = keep_k1 ? std::make_pair(k[Mode::k1h], k[Mode::k1v])
                                  : std::make_pair(k[Mode::k2h], k[Mode::k2v]);
        const auto traced = keep_k1 ? std::make_pair(k[Mode::k2h], k[Mode::k2v])
                                    : std::make_pair(k[Mode::k1h], k[Mode::k1v]);
        groups[traced].push_back({kept, a});
    }
    for (const auto& [traced, members] : groups) {
        for (const auto& [pr, ar] : members)
            for (const auto& [pc, ac] : members)
                rho.accumulate(pr.first, pr.second, pc.first, pc.second, ar * std::conj(ac));
    }
    return rho;
}

// Von Neumann entropy in bits: -Tr rho log2 rho over eigenvalues > 1e-14.
inline double von_neumann_entropy(const DensityMatrix& rho) {
    if (rho.hermiticity_defect() > 1e-10)
        throw Error(ErrorKind::not_a_state, "density matrix is not Hermitian");
    const Eigen::VectorXd ev = rho.eigenvalues();
    double s = 0.0;
    for (int i = 0; i < ev.size(); ++i) {
        const double lambda = ev[i];
        if (lambda < -1e-8)
            throw Error(ErrorKind::not_a_state, "density matrix has eigenvalue " + format_double(lambda));
        if (lambda > 1e-14) s -= lambda * std::log2(lambda);
    }
    return s;
}

enum class RelativePolarization { aligned, orthogonal };

// Expectation of the photon-number operator for the mode aligned with the
// qubit (or its orthogonal), n = b^dag b with b = conj(alpha) a_h + conj(beta) a_v.
inline double number_expectation(const DensityMatrix& rho, const PolarizationQubit& qubit,
                                 RelativePolarization which) {
    const PolarizationQubit q = which == RelativePolarization::aligned ? qubit : qubit.orthogonal();
    const cplx ca = std::conj(q.alpha);
    const cplx cb = std::conj(q.beta);
    // n_pi = |alpha|^2 n_h + |beta|^2 n_v + alpha conj(beta) a_h^dag a_v + conj(alpha) beta a_v^dag a_h
    cplx acc = 0.0;
    const auto& basis = rho.basis();
    for (int col = 0; col < rho.dim(); ++col) {
        const auto [nh, nv] = basis[col];
        // diagonal part
        acc += rho.entries()(col, col) * (std::norm(ca) * nh + std::norm(cb) * nv);
        // a_h^dag a_v : (nh, nv) -> (nh+1, nv-1), coefficient conj(ca)*cb = alpha* ... see below
        if (nv > 0 && rho.has_pair(nh + 1, nv - 1)) {
            const int row = rho.index_of(nh + 1, nv - 1);
            // <row| n_pi |col> with n_pi term (ca* cb) a_h^dag a_v
            acc += rho.entries()(col, row) * std::conj(ca) * cb * std::sqrt(double((nh + 1) * nv));
        }
        if (nh > 0 && rho.has_pair(nh - 1, nv + 1)) {
            const int row = rho.index_of(nh - 1, nv + 1);
            acc += rho.entries()(col, row) * ca * std::conj(cb) * std::sqrt(double(nh * (nv + 1)));
        }
    }
    return acc.real();
}

} // namespace qiopa
