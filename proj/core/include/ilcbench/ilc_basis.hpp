#pragma once

#include "ilcbench/ilc_frequency.hpp"
#include "ilcbench/lifted.hpp"
#include "ilcbench/noncausal_filter.hpp"
#include "ilcbench/plant_lab.hpp"
#include "ilcbench/signal.hpp"
#include "ilcbench/trajectory.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ilcbench {

enum class BasisGenerator { Position, Velocity, Acceleration, Jerk, Snap };

const char* to_string(BasisGenerator g) noexcept;
/// Throws ErrorCode::InvalidParameter on unknown names.
BasisGenerator basis_generator_from_string(const std::string& name);

struct BasisSpec {
    std::vector<BasisGenerator> generators;
};

/// N x p matrix Psi(r). Derivatives by repeated central differences with
/// one-sided end points.
Eigen::MatrixXd build_basis(const Signal& r, const BasisSpec& spec);
/// Same, using the exact derivative signals of a generated profile.
Eigen::MatrixXd build_basis(const MotionProfile& r, const BasisSpec& spec);

struct BasisWeights {
    double error = 1.0;  ///< w_e > 0
    double step = 0.0;   ///< w_dtheta >= 0
};

/// theta + argmin_d  w_e ||e - J Psi d||^2 + w_d ||d||^2.
/// Throws ErrorCode::SingularUpdate when the normal matrix is rank deficient
/// and w_d = 0.
Eigen::VectorXd update_params(const Eigen::VectorXd& theta, const Signal& e,
                              const Eigen::MatrixXd& psi, const LiftedOperator& model_j,
                              const BasisWeights& weights = {});
Eigen::VectorXd update_params(const Eigen::VectorXd& theta, const Signal& e, const Signal& r,
                              const BasisSpec& spec, const LiftedOperator& model_j,
                              const BasisWeights& weights = {});

Signal feedforward_from_params(const Eigen::VectorXd& theta, const Eigen::MatrixXd& psi, double ts);
Signal feedforward_from_params(const Eigen::VectorXd& theta, const Signal& r, const BasisSpec& spec);

struct BasisHistory {
    std::vector<Eigen::VectorXd> thetas;  ///< theta_j used in task j
    std::vector<double> error_norms;
    Signal e_final;
};

BasisHistory run_basis_ilc(const Scenario& sc, const Signal& r, const Eigen::MatrixXd& psi,
                           const LiftedOperator& model_j, std::size_t n_iter,
                           const BasisWeights& weights = {},
                           const Eigen::VectorXd& theta0 = {});

struct ReferenceChangeDesign {
    NoncausalFilter L;
    NoncausalFilter Q;
    double alpha = 1.0;
    std::optional<std::size_t> tail_margin;
    BasisSpec basis;
    BasisWeights weights;
    LiftedOperator model_j;
    std::size_t switch_task = 10;  ///< first task run on r_b
    std::size_t n_tasks = 15;
};

struct ReferenceChangeReport {
    std::size_t switch_task;
    std::vector<double> feedback_only;
    std::vector<double> signal_ilc;
    std::vector<double> basis_ilc;
    std::vector<Eigen::VectorXd> thetas;
};

/// Runs feedback only, signal ILC and basis ILC over n_tasks, replacing r_a
/// by r_b from `switch_task` on.
ReferenceChangeReport demonstrate_reference_change(const Scenario& sc, const MotionProfile& r_a,
                                                   const MotionProfile& r_b,
                                                   const ReferenceChangeDesign& design);
ReferenceChangeReport demonstrate_reference_change(const Scenario& sc, const Signal& r_a,
                                                   const Signal& r_b,
                                                   const ReferenceChangeDesign& design);

} // namespace ilcbench
