#pragma once

#include <Eigen/Dense>

#include "oracles.hpp"
#include "ringlaser/hilbert.hpp"

// Oracle matrix (mask order) rearranged into the library's basis order.
inline Eigen::MatrixXcd to_library_order(const oracle::DenseModel& m, const Eigen::MatrixXcd& x,
                                         const ringlaser::Basis& basis) {
    const auto d = static_cast<Eigen::Index>(basis.dimension());
    std::vector<Eigen::Index> pos(basis.dimension());
    for (std::size_t k = 0; k < basis.dimension(); ++k) {
        for (Eigen::Index o = 0; o < m.dim(); ++o) {
            if (m.masks[o] == basis.state(k)) pos[k] = o;
        }
    }
    Eigen::MatrixXcd out(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) out(a, b) = x(pos[a], pos[b]);
    }
    return out;
}
