// Copyright 2026 The spfilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace spf {

using cplx = std::complex<double>;

/// Dense operator on a 2-dim (atom, ancilla) or 4-dim (ancilla ⊗ atom) space.
/// Storage never exceeds 4x4, so no heap allocation happens.
using Operator = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 4, 4>;
using Op2 = Eigen::Matrix2cd;
using Op4 = Eigen::Matrix4cd;

inline constexpr cplx kI{0.0, 1.0};

/// Raised for any input that violates a documented precondition.
class ValidationError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

// Two-level basis: index 0 is |g> (ancilla |down>), index 1 is |e> (ancilla |up>).
namespace basis {
Op2 sigma_minus();  // |g><e|
Op2 sigma_plus();   // |e><g|
Op2 excited();      // |e><e| = sigma_plus * sigma_minus
Op2 ground();       // |g><g|
}  // namespace basis

template <class A, class B>
void require_same_shape(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
        throw ValidationError(std::string(what) + ": operator dimension mismatch");
    }
}

template <class Derived>
cplx trace(const Eigen::MatrixBase<Derived>& a) {
    return a.trace();
}

template <class A, class B>
typename A::PlainObject commutator(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    require_same_shape(a, b, "commutator");
    return a * b - b * a;
}

/// D*_A rho = A rho A^dag - (A^dag A rho + rho A^dag A) / 2
template <class A, class B>
typename B::PlainObject dissipator_adjoint(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& rho) {
    require_same_shape(a, rho, "dissipator_adjoint");
    const typename A::PlainObject ada = a.adjoint() * a;
    return a * rho * a.adjoint() - 0.5 * (ada * rho + rho * ada);
}

/// D_A X = A^dag X A - (A^dag A X + X A^dag A) / 2
template <class A, class B>
typename B::PlainObject dissipator(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& x) {
    require_same_shape(a, x, "dissipator");
    const typename A::PlainObject ada = a.adjoint() * a;
    return a.adjoint() * x * a - 0.5 * (ada * x + x * ada);
}

/// Im{A} for an operator argument, (A - A^dag) / 2i. Hermitian for every A.
template <class A>
typename A::PlainObject operator_imag(const Eigen::MatrixBase<A>& a) {
    return (a - a.adjoint()) / (2.0 * kI);
}

template <class A>
double hermiticity_residual(const Eigen::MatrixBase<A>& a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Kronecker product with the ancilla as the first factor.
Op4 tensor_embed(const Op2& ancilla, const Op2& system);

/// Open system (S, L, H) with an n x n channel matrix of operators.
/// Scalar channel entries are stored as scalar * identity.
struct SLHTriple {
    std::size_t channels = 0;
    std::vector<Operator> S;  // row-major, channels * channels
    std::vector<Operator> L;  // channels
    Operator H;

    Eigen::Index dim() const { return H.rows(); }
    const Operator& s(std::size_t i, std::size_t j) const { return S[i * channels + j]; }
    Operator& s(std::size_t i, std::size_t j) { return S[i * channels + j]; }
};

/// (I, 0, 0) with the given channel count on a space of dimension dim.
SLHTriple trivial_system(std::size_t channels, Eigen::Index dim);
SLHTriple single_channel(const Operator& S, const Operator& L, const Operator& H);

/// max |(S^dag S - I)_ij|, |(S S^dag - I)_ij| over the operator-valued channel matrix.
double channel_unitarity_residual(const SLHTriple& g);

/// -i[H, rho] + sum_k D*_{L_k} rho. Multi-channel triples sum their dissipators.
Operator liouvillian(const SLHTriple& g, const Operator& rho);

struct FlaggedOperator {
    Operator value;
    bool non_hermitian_input = false;
};
/// As liouvillian(), plus an advisory flag when rho is not Hermitian (1e-12).
FlaggedOperator liouvillian_checked(const SLHTriple& g, const Operator& rho);

/// -i[X, H] + sum_k D_{L_k} X.
Operator lindbladian(const SLHTriple& g, const Operator& x);

/// G2 <| G1 = (S2 S1, L2 + S2 L1, H1 + H2 + Im{L2^dag S2 L1}).
SLHTriple series_product(const SLHTriple& g2, const SLHTriple& g1);

/// G1 [+] G2 = (diag(S1, S2), [L1; L2], H1 + H2).
SLHTriple concatenation_product(const SLHTriple& g1, const SLHTriple& g2);

/// Two-port scattering matrix between the signal and noise channels.
class BeamSplitter {
   public:
    struct Entries {};
    struct Angles {
        double Theta, Psi, Phi, Lambda;
    };
    struct Reduction {
        double r, theta;
    };
    struct Simulation {
        double r;
    };
    using Provenance = std::variant<Entries, Angles, Reduction, Simulation>;

    static constexpr double kInputTolerance = 1e-9;

    /// Raw entries; rejected when the unitarity residual exceeds 1e-9.
    static BeamSplitter from_entries(cplx s11, cplx s12, cplx s21, cplx s22);
    /// e^{i Lambda/2} [[cos(T/2) e^{i(Psi+Phi)/2}, sin(T/2) e^{i(Psi-Phi)/2}],
    ///                 [-sin(T/2) e^{-i(Psi-Phi)/2}, cos(T/2) e^{-i(Psi+Phi)/2}]]
    static BeamSplitter from_angles(double Theta, double Psi, double Phi, double Lambda);
    /// [[sqrt(1-r^2) e^{i theta}, r e^{i theta}], [-r e^{i theta}, sqrt(1-r^2) e^{i theta}]]
    static BeamSplitter from_reduction(double r, double theta);
    /// [[sqrt(1-r^2), i r], [i r, sqrt(1-r^2)]]
    static BeamSplitter simulation(double r);
    static BeamSplitter identity() { return simulation(0.0); }

    cplx s11() const { return m_(0, 0); }
    cplx s12() const { return m_(0, 1); }
    cplx s21() const { return m_(1, 0); }
    cplx s22() const { return m_(1, 1); }
    const Op2& matrix() const { return m_; }
    const Provenance& provenance() const { return provenance_; }

    double unitarity_residual() const;

    /// Whole matrix times e^{i phi}.
    BeamSplitter with_global_phase(double phi) const;
    /// Second row times e^{i phi}; still unitary. phi = pi/2 maps s21 -> i s21.
    BeamSplitter with_second_row_phase(double phi) const;

   private:
    BeamSplitter(const Op2& m, Provenance p) : m_(m), provenance_(p) {}
    Op2 m_;
    Provenance provenance_;
};

/// Two-level atom with L = kappa * sigma_minus.
struct SystemModel {
    double kappa = 1.0;
    Op2 S = Op2::Identity();
    Op2 H = Op2::Zero();

    Op2 L() const { return kappa * basis::sigma_minus(); }
    bool scattering_is_identity() const { return S == Op2::Identity(); }
    /// kappa >= 0, S unitary (1e-9), H Hermitian (1e-9).
    void validate() const;
    SLHTriple slh() const;
};

/// Whole network G3 <| [(G <| M) [+] (1, 0, 0)] on ancilla ⊗ atom, with
/// M = (I, lambda sigma_minus (ancilla), 0) and G3 = (S_b, 0, 0).
SLHTriple build_extended_system(const SystemModel& model, cplx lambda, const BeamSplitter& sb);

/// L + S L_M on the 4-dim space: the coupling of G <| M.
Op4 extended_coupling(const SystemModel& model, cplx lambda);

}  // namespace spf
