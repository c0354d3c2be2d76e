// Independent reference formulas for the tests. Nothing here calls the
// library's operator or generator code; states are plain bitmasks.

#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

// Couplings of two parallel dipoles perpendicular to their separation,
// x = k0 * r, in units of Gamma0.
inline double perpendicular_gamma(double x) {
    return 1.5 * (std::sin(x) / x + std::cos(x) / (x * x) - std::sin(x) / (x * x * x));
}

inline double perpendicular_omega(double x) {
    return -0.75 * (std::cos(x) / x - std::sin(x) / (x * x) - std::cos(x) / (x * x * x));
}

// Two-level atom with decay 1 and incoherent pump nu.
inline double single_atom_population(double nu) { return nu / (nu + 1.0); }

// Dense model on the masks with at most `max_exc` excitations (all masks if
// max_exc >= n). Column-stacked vectorization: vec(A X B) = (B^T kron A) vec X.
struct DenseModel {
    int n{0};
    std::vector<std::uint32_t> masks;
    std::vector<Eigen::MatrixXcd> lower; // sigma_i^-
    std::vector<Eigen::MatrixXcd> raise; // projected sigma_i^+

    DenseModel(int atoms, int max_exc) : n(atoms) {
        for (std::uint32_t m = 0; m < (1u << atoms); ++m) {
            if (std::popcount(m) <= max_exc) masks.push_back(m);
        }
        const auto d = static_cast<Eigen::Index>(masks.size());
        auto index = [&](std::uint32_t m) -> Eigen::Index {
            for (Eigen::Index k = 0; k < d; ++k) {
                if (masks[k] == m) return k;
            }
            return -1;
        };
        for (int i = 0; i < atoms; ++i) {
            Eigen::MatrixXcd lo = Eigen::MatrixXcd::Zero(d, d);
            Eigen::MatrixXcd up = Eigen::MatrixXcd::Zero(d, d);
            for (Eigen::Index c = 0; c < d; ++c) {
                const std::uint32_t m = masks[c];
                if (m & (1u << i)) {
                    lo(index(m & ~(1u << i)), c) = 1.0;
                } else if (const auto r = index(m | (1u << i)); r >= 0) {
                    up(r, c) = 1.0;
                }
            }
            lower.push_back(lo);
            raise.push_back(up);
        }
    }

    Eigen::Index dim() const { return static_cast<Eigen::Index>(masks.size()); }

    Eigen::MatrixXcd hamiltonian(const Eigen::MatrixXd& omega) const {
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim(), dim());
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i != j) h += omega(i, j) * raise[i] * lower[j];
            }
        }
        return h;
    }

    // Superoperator of the master equation with the pump on `pump`.
    Eigen::MatrixXcd liouvillian(const Eigen::MatrixXd& omega, const Eigen::MatrixXd& gamma,
                                 double nu, int pump) const {
        const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim(), dim());
        Eigen::MatrixXcd heff = hamiltonian(omega);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) heff -= cplx(0, 0.5 * gamma(i, j)) * raise[i] * lower[j];
        }
        heff -= cplx(0, 0.5 * nu) * lower[pump] * raise[pump];
        const cplx i1(0, 1);
        Eigen::MatrixXcd l = -i1 * kron(id, heff) + i1 * kron(heff.conjugate(), id);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                // Gamma_ij s_i^- rho s_j^+
                l += gamma(i, j) * kron(raise[j].transpose(), lower[i]);
            }
        }
        l += nu * kron(lower[pump].transpose(), raise[pump]);
        return l;
    }

    static Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
        Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            for (Eigen::Index j = 0; j < a.cols(); ++j) {
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
            }
        }
        return out;
    }

    Eigen::MatrixXcd unvec(const Eigen::VectorXcd& v) const {
        return Eigen::Map<const Eigen::MatrixXcd>(v.data(), dim(), dim());
    }

    // Null vector of the superoperator normalized to unit trace.
    Eigen::MatrixXcd steady_state(const Eigen::MatrixXcd& l) const {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(l, Eigen::ComputeFullV);
        Eigen::MatrixXcd rho = unvec(svd.matrixV().col(l.cols() - 1));
        rho /= rho.trace();
        return 0.5 * (rho + rho.adjoint());
    }

    Eigen::MatrixXcd collective_lowering() const {
        Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(dim(), dim());
        for (const auto& lo : lower) s += lo;
        return s;
    }

    // 2 Re Tr[S^+ (i w - L)^(-1) (S^- rho)]
    double resolvent_spectrum(const Eigen::MatrixXcd& l, const Eigen::MatrixXcd& rho,
                              double w) const {
        const Eigen::MatrixXcd s = collective_lowering();
        const Eigen::MatrixXcd x0 = s * rho;
        const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(x0.data(), x0.size());
        const Eigen::MatrixXcd a =
            cplx(0, w) * Eigen::MatrixXcd::Identity(l.rows(), l.cols()) - l;
        const Eigen::MatrixXcd x = unvec(a.partialPivLu().solve(v));
        return 2.0 * (s.adjoint() * x).trace().real();
    }

    // sum_ijkl <s_i^+ s_j^+ s_k^- s_l^-> / |sum_mn <s_m^+ s_n^->|^2
    double g2(const Eigen::MatrixXcd& rho) const {
        cplx num = 0.0;
        cplx den = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                den += (rho * raise_full(i) * lower[j]).trace();
                for (int k = 0; k < n; ++k) {
                    for (int m = 0; m < n; ++m) {
                        num += (rho * raise_full(i) * raise_full(j) * lower[k] * lower[m]).trace();
                    }
                }
            }
        }
        return num.real() / std::norm(den);
    }

    // true adjoint of the lowering operator (no projection)
    Eigen::MatrixXcd raise_full(int i) const { return lower[i].adjoint(); }
};

} // namespace oracle
