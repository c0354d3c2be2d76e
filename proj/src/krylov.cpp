#include "ringlaser/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

#include "ringlaser/error.hpp"

namespace ringlaser {

namespace {

using cplx = std::complex<double>;

double round_step(double t) {
    const double s = std::pow(10.0, std::floor(std::log10(t)) - 1.0);
    return std::ceil(t / s) * s;
}

double inf_norm(const Eigen::SparseMatrix<cplx>& a) {
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(a.rows());
    for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(a, k); it; ++it) {
            row_sums(it.row()) += std::abs(it.value());
        }
    }
    return row_sums.size() ? row_sums.maxCoeff() : 0.0;
}

} // namespace

Eigen::VectorXcd krylov_expv(double t,
                             const Eigen::SparseMatrix<cplx>& a,
                             const Eigen::VectorXcd& v,
                             const KrylovOptions& options,
                             KrylovStats* stats) {
    KrylovStats local;
    KrylovStats& st = stats ? *stats : local;

    const Eigen::Index n = v.size();
    double beta = v.norm();
    if (t == 0.0 || beta == 0.0 || n == 0) return v;

    const double anorm = std::max(inf_norm(a), std::numeric_limits<double>::min());
    const int m = static_cast<int>(std::min<Eigen::Index>(options.subspace_dim, n));
    constexpr double gamma = 0.9;
    constexpr double delta = 1.2;
    const double breakdown_tol = 1e-12 * anorm;
    const double rndoff = anorm * std::numeric_limits<double>::epsilon();
    const double sign = t > 0 ? 1.0 : -1.0;
    const double t_out = std::abs(t);

    auto tolerance = [&](double b) { return options.atol + options.rtol * b; };

    double xm = 1.0 / m;
    const double fact =
        std::pow((m + 1) / std::exp(1.0), m + 1) * std::sqrt(2.0 * 3.14159265358979 * (m + 1));
    double t_new = (1.0 / anorm) * std::pow((fact * tolerance(beta)) / (4.0 * beta * anorm), xm);
    t_new = round_step(t_new);

    Eigen::VectorXcd w = v;
    Eigen::MatrixXcd basis(n, m + 1);
    double t_now = 0.0;

    while (t_now < t_out) {
        if (++st.steps > options.max_steps) {
            throw ConvergenceError("Krylov propagation exceeded the step budget",
                                   st.accumulated_error);
        }
        double t_step = std::min(t_out - t_now, t_new);
        Eigen::MatrixXcd hess = Eigen::MatrixXcd::Zero(m + 2, m + 2);
        basis.col(0) = w / beta;

        int mb = m;
        int k1 = 2;
        for (int j = 0; j < m; ++j) {
            Eigen::VectorXcd p = a * basis.col(j);
            ++st.matvecs;
            for (int i = 0; i <= j; ++i) {
                hess(i, j) = basis.col(i).dot(p);
                p -= hess(i, j) * basis.col(i);
            }
            const double s = p.norm();
            if (s < breakdown_tol) {
                // happy breakdown: the subspace is invariant, step to the end
                k1 = 0;
                mb = j + 1;
                t_step = t_out - t_now;
                break;
            }
            hess(j + 1, j) = s;
            basis.col(j + 1) = p / s;
        }
        double avnorm = 0.0;
        if (k1 != 0) {
            hess(m + 1, m) = 1.0;
            avnorm = (a * basis.col(m)).norm();
            ++st.matvecs;
        }

        Eigen::MatrixXcd f;
        double err_loc = 0.0;
        for (int reject = 0;; ++reject) {
            const int mx = mb + k1;
            f = (sign * t_step * hess.topLeftCorner(mx, mx)).exp();
            if (k1 == 0) {
                err_loc = breakdown_tol;
                break;
            }
            const double phi1 = std::abs(beta * f(m, 0));
            const double phi2 = std::abs(beta * f(m + 1, 0) * avnorm);
            if (phi1 > 10.0 * phi2) {
                err_loc = phi2;
                xm = 1.0 / m;
            } else if (phi1 > phi2) {
                err_loc = (phi1 * phi2) / (phi1 - phi2);
                xm = 1.0 / m;
            } else {
                err_loc = phi1;
                xm = 1.0 / (m - 1);
            }
            if (err_loc <= delta * t_step * tolerance(beta)) break;
            if (reject >= options.max_rejections) {
                throw ConvergenceError("Krylov step rejected too often; local error " +
                                           std::to_string(err_loc),
                                       err_loc);
            }
            t_step = round_step(gamma * t_step * std::pow(t_step * tolerance(beta) / err_loc, xm));
        }

        const int mx = mb + std::max(0, k1 - 1);
        w = basis.leftCols(mx) * (beta * f.col(0).head(mx));
        beta = w.norm();
        t_now += t_step;
        if (beta == 0.0) break;
        t_new = round_step(gamma * t_step *
                           std::pow(t_step * tolerance(beta) / std::max(err_loc, rndoff), xm));
        st.accumulated_error += std::max(err_loc, rndoff);
    }
    return w;
}

} // namespace ringlaser
