#pragma once

// Test-only reference implementations. None of these share code with the
// library: operators are built from scratch in the bare or eigen basis and
// the master equations are applied term by term.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <array>
#include <cmath>
#include <complex>

namespace oracle {

using cd = std::complex<double>;
using Mat4 = Eigen::Matrix4cd;
using Mat16 = Eigen::Matrix<cd, 16, 16>;

// 1/(e^x - 1) from its Laurent series (|x| < 2 pi) or the geometric series.
inline long double bose(long double eps, long double T) {
    if (T == 0) return 0;
    const long double x = eps / T;
    if (x < 0.5L) {
        // B2/2!, B4/4!, ... B12/12!
        const long double c[] = {1.0L / 12, -1.0L / 720, 1.0L / 30240, -1.0L / 1209600, 1.0L / 47900160,
                                 -691.0L / 1307674368000};
        long double s = 1 / x - 0.5L, p = x;
        for (long double ck : c) {
            s += ck * p;
            p *= x * x;
        }
        return s;
    }
    long double s = 0, q = std::exp(-x), term = q;
    for (int k = 0; k < 100000 && term > 1e-22L * s; ++k, term *= q) s += term;
    return s;
}

inline Mat4 tau(int i, int j) {  // |lambda_i><lambda_j|, one-based
    Mat4 m = Mat4::Zero();
    m(i - 1, j - 1) = 1.0;
    return m;
}

template <typename Apply>
Mat16 superoperator(Apply&& apply) {
    Mat16 l;
    for (int k = 0; k < 16; ++k) {
        Mat4 e = Mat4::Zero();
        e(k / 4, k % 4) = 1.0;
        const Mat4 out = apply(e);
        for (int r = 0; r < 16; ++r) l(r, k) = out(r / 4, r % 4);
    }
    return l;
}

inline Eigen::Matrix<cd, 16, 1> vec(const Mat4& m) {
    Eigen::Matrix<cd, 16, 1> v;
    for (int r = 0; r < 16; ++r) v(r) = m(r / 4, r % 4);
    return v;
}

inline Mat4 unvec(const Eigen::Matrix<cd, 16, 1>& v) {
    Mat4 m;
    for (int r = 0; r < 16; ++r) m(r / 4, r % 4) = v(r);
    return m;
}

// Eigenbasis master equation with rates G(i, j) from lambda_i to lambda_j (one-based)
// and cross-dephasing rates L[0..3].
template <typename Rate>
Mat16 eigen_liouvillian(const std::array<double, 4>& energy, Rate&& G, const std::array<double, 4>& L) {
    Mat4 h = Mat4::Zero();
    for (int i = 0; i < 4; ++i) h(i, i) = energy[static_cast<std::size_t>(i)];
    const cd I(0.0, 1.0);
    return superoperator([&](const Mat4& r) -> Mat4 {
        Mat4 out = I * (r * h - h * r);
        const int pairs[4][2] = {{4, 2}, {3, 1}, {2, 1}, {4, 3}};
        for (const auto& p : pairs) {
            const int i = p[0], j = p[1];
            out += G(j, i) * (2.0 * tau(i, j) * r * tau(j, i) - tau(j, j) * r - r * tau(j, j));
            out += G(i, j) * (2.0 * tau(j, i) * r * tau(i, j) - tau(i, i) * r - r * tau(i, i));
        }
        out += 2.0 * L[0] * (tau(4, 2) * r * tau(1, 3) + tau(3, 1) * r * tau(2, 4));
        out += 2.0 * L[1] * (tau(2, 1) * r * tau(3, 4) + tau(4, 3) * r * tau(1, 2));
        out += 2.0 * L[2] * (tau(2, 4) * r * tau(3, 1) + tau(1, 3) * r * tau(4, 2));
        out += 2.0 * L[3] * (tau(1, 2) * r * tau(4, 3) + tau(3, 4) * r * tau(2, 1));
        return out;
    });
}

// ---- bare basis |ee>, |eg>, |ge>, |gg> ----

inline Mat4 kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Mat4 m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return m;
}

inline Eigen::Matrix2cd pauli_z() { return Eigen::Vector2cd(1.0, -1.0).asDiagonal(); }
inline Eigen::Matrix2cd lower() {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(1, 0) = 1.0;
    return m;
}

inline Mat4 sigma_z(int l) {
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    return l == 1 ? kron(pauli_z(), id) : kron(id, pauli_z());
}

inline Mat4 hamiltonian(double w1, double w2, double xi) {
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    const Mat4 s1 = kron(lower(), id), s2 = kron(id, lower());
    return 0.5 * w1 * sigma_z(1) + 0.5 * w2 * sigma_z(2) + xi * (s1.adjoint() * s2 + s1 * s2.adjoint());
}

inline Mat4 gibbs(double w1, double w2, double xi, double T) {
    const Eigen::Matrix4d h = hamiltonian(w1, w2, xi).real();
    const Eigen::Matrix4d shifted = -(h - 0.5 * (w1 + w2) * Eigen::Matrix4d::Identity()) / T;
    Eigen::Matrix4d g = shifted.exp();
    g /= g.trace();
    return g.cast<cd>();
}

// Populations of rho on the numerically diagonalised Hamiltonian, descending energy.
inline std::array<double, 4> eigen_populations(const Mat4& rho, double w1, double w2, double xi) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(hamiltonian(w1, w2, xi));
    std::array<double, 4> p{};
    for (int k = 0; k < 4; ++k) {
        const auto v = es.eigenvectors().col(3 - k);
        p[static_cast<std::size_t>(k)] = (v.adjoint() * rho * v)(0, 0).real();
    }
    return p;
}

// Local-dissipator master equation as Kronecker superoperators (row-major vec).
inline Mat16 phenomenological(double w1, double w2, double xi, double n1, double n2, double g1, double g2) {
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    const Mat4 h = hamiltonian(w1, w2, xi);
    const Mat4 I4 = Mat4::Identity();
    auto sup = [](const Mat4& a, const Mat4& b) {  // r -> a r b
        Mat16 m;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) m.block<4, 4>(4 * i, 4 * j) = a(i, j) * b.transpose();
        return m;
    };
    Mat16 l = cd(0, 1) * (sup(I4, h) - sup(h, I4));
    const Mat4 s[2] = {kron(lower(), id), kron(id, lower())};
    const double n[2] = {n1, n2}, g[2] = {g1, g2};
    for (int k = 0; k < 2; ++k) {
        const Mat4 ops[2] = {s[k], Mat4(s[k].adjoint())};
        const double w[2] = {0.5 * g[k] * (n[k] + 1.0), 0.5 * g[k] * n[k]};
        for (int a = 0; a < 2; ++a) {
            const Mat4 ada = ops[a].adjoint() * ops[a];
            l += w[a] * (2.0 * sup(ops[a], ops[a].adjoint()) - sup(ada, I4) - sup(I4, ada));
        }
    }
    return l;
}

// p |Psi+><Psi+| + (1 - p) I/4 with Psi+ = (|eg> + |ge>)/sqrt 2.
inline Mat4 werner(double p) {
    Eigen::Vector4cd psi(0.0, 1.0, 1.0, 0.0);
    psi /= std::sqrt(2.0);
    return p * psi * psi.adjoint() + (1.0 - p) * Mat4::Identity() / 4.0;
}

inline double werner_concurrence(double p) { return std::max(0.0, (3.0 * p - 1.0) / 2.0); }

}  // namespace oracle
