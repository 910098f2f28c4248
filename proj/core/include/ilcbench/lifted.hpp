#pragma once

#include "ilcbench/noncausal_filter.hpp"
#include "ilcbench/signal.hpp"
#include "ilcbench/transfer_function.hpp"

#include <Eigen/Dense>

#include <cstddef>

namespace ilcbench {

/// Finite-time (lifted) matrix form of an LTI operator on N samples.
struct LiftedOperator {
    Eigen::MatrixXd matrix;
    double ts;

    Eigen::Index size() const noexcept { return matrix.rows(); }
    Signal apply(const Signal& x) const;
};

/// Column k is the impulse response shifted to sample k and truncated to the
/// window: lower-triangular Toeplitz for a causal system, banded Toeplitz for
/// a noncausal filter.
LiftedOperator lifted_matrix(const TransferFunction& sys, std::size_t n);
LiftedOperator lifted_matrix(const NoncausalFilter& filter, std::size_t n);

} // namespace ilcbench
