// adaptive Krylov-subspace propagation of exp(t A) v

#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace ringlaser {

struct KrylovOptions {
    double rtol{1e-8};
    double atol{1e-10};
    int subspace_dim{30};
    int max_rejections{20};
    long max_steps{1'000'000};
};

struct KrylovStats {
    long steps{0};
    long matvecs{0};
    double accumulated_error{0.0};
};

// exp(t A) v with local error control per step (Expokit-style step
// selection). Throws ConvergenceError if the tolerance cannot be met.
Eigen::VectorXcd krylov_expv(double t,
                             const Eigen::SparseMatrix<std::complex<double>>& a,
                             const Eigen::VectorXcd& v,
                             const KrylovOptions& options = {},
                             KrylovStats* stats = nullptr);

} // namespace ringlaser
