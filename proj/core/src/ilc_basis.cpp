#include "ilcbench/ilc_basis.hpp"

#include "ilcbench/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace ilcbench {

const char* to_string(BasisGenerator g) noexcept {
    switch (g) {
    case BasisGenerator::Position: return "position";
    case BasisGenerator::Velocity: return "velocity";
    case BasisGenerator::Acceleration: return "acceleration";
    case BasisGenerator::Jerk: return "jerk";
    case BasisGenerator::Snap: return "snap";
    }
    return "unknown";
}

BasisGenerator basis_generator_from_string(const std::string& name) {
    for (auto g : {BasisGenerator::Position, BasisGenerator::Velocity, BasisGenerator::Acceleration,
                   BasisGenerator::Jerk, BasisGenerator::Snap})
        if (name == to_string(g)) return g;
    throw Error(ErrorCode::InvalidParameter, "unknown basis generator '" + name + "'");
}

namespace {

int derivative_order(BasisGenerator g) { return static_cast<int>(g); }

std::vector<double> central_difference(const std::vector<double>& x, double h) {
    const std::size_t n = x.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    d[0] = (x[1] - x[0]) / h;
    d[n - 1] = (x[n - 1] - x[n - 2]) / h;
    for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (x[k + 1] - x[k - 1]) / (2.0 * h);
    return d;
}

void require_spec(const BasisSpec& spec) {
    if (spec.generators.empty()) throw Error(ErrorCode::InvalidParameter, "basis needs at least one generator");
}

Eigen::MatrixXd from_columns(const std::vector<std::vector<double>>& cols) {
    const auto n = static_cast<Eigen::Index>(cols.front().size());
    Eigen::MatrixXd m(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
        m.col(static_cast<Eigen::Index>(c)) = Eigen::Map<const Eigen::VectorXd>(cols[c].data(), n);
    return m;
}

} // namespace

Eigen::MatrixXd build_basis(const Signal& r, const BasisSpec& spec) {
    require_spec(spec);
    std::vector<std::vector<double>> derivs{r.values()};
    for (int k = 1; k <= 4; ++k) derivs.push_back(central_difference(derivs.back(), r.ts()));
    std::vector<std::vector<double>> cols;
    for (auto g : spec.generators) cols.push_back(derivs[static_cast<std::size_t>(derivative_order(g))]);
    return from_columns(cols);
}

Eigen::MatrixXd build_basis(const MotionProfile& r, const BasisSpec& spec) {
    require_spec(spec);
    std::vector<std::vector<double>> cols;
    for (auto g : spec.generators) {
        switch (g) {
        case BasisGenerator::Position: cols.push_back(r.position.values()); break;
        case BasisGenerator::Velocity: cols.push_back(r.velocity.values()); break;
        case BasisGenerator::Acceleration: cols.push_back(r.acceleration.values()); break;
        case BasisGenerator::Jerk: cols.push_back(r.jerk.values()); break;
        case BasisGenerator::Snap:
            cols.push_back(r.snap ? r.snap->values() : central_difference(r.jerk.values(), r.ts()));
            break;
        }
    }
    return from_columns(cols);
}

Eigen::VectorXd update_params(const Eigen::VectorXd& theta, const Signal& e, const Eigen::MatrixXd& psi,
                              const LiftedOperator& model_j, const BasisWeights& weights) {
    if (!(weights.error > 0.0) || !(weights.step >= 0.0))
        throw Error(ErrorCode::InvalidParameter, "weights need w_e > 0 and w_dtheta >= 0");
    const auto n = static_cast<Eigen::Index>(e.size());
    if (psi.rows() != n || model_j.size() != n || model_j.matrix.cols() != n || theta.size() != psi.cols())
        throw Error(ErrorCode::DimensionMismatch, "basis, model and parameter dimensions disagree");
    require_same_ts(e.ts(), model_j.ts, "update_params");

    const Eigen::MatrixXd a = model_j.matrix * psi;
    const Eigen::Map<const Eigen::VectorXd> ev(e.samples().data(), n);
    const auto p = psi.cols();

    if (weights.step == 0.0) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
        if (qr.rank() < p)
            throw Error(ErrorCode::SingularUpdate, "J Psi has rank " + std::to_string(qr.rank()) + " < " +
                                                       std::to_string(p) + " and no step penalty is set");
    }
    Eigen::MatrixXd normal = weights.error * (a.transpose() * a);
    normal.diagonal().array() += weights.step;
    normal.diagonal().array() += 1e-12 * normal.diagonal().cwiseAbs().maxCoeff();
    const Eigen::VectorXd rhs = weights.error * (a.transpose() * ev);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
    if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::SingularUpdate, "normal equations could not be factored");
    return theta + ldlt.solve(rhs);
}

Eigen::VectorXd update_params(const Eigen::VectorXd& theta, const Signal& e, const Signal& r, const BasisSpec& spec,
                              const LiftedOperator& model_j, const BasisWeights& weights) {
    return update_params(theta, e, build_basis(r, spec), model_j, weights);
}

Signal feedforward_from_params(const Eigen::VectorXd& theta, const Eigen::MatrixXd& psi, double ts) {
    if (theta.size() != psi.cols()) throw Error(ErrorCode::DimensionMismatch, "parameter count differs from basis size");
    const Eigen::VectorXd f = psi * theta;
    return Signal(std::vector<double>(f.data(), f.data() + f.size()), ts);
}

Signal feedforward_from_params(const Eigen::VectorXd& theta, const Signal& r, const BasisSpec& spec) {
    return feedforward_from_params(theta, build_basis(r, spec), r.ts());
}

BasisHistory run_basis_ilc(const Scenario& sc, const Signal& r, const Eigen::MatrixXd& psi,
                           const LiftedOperator& model_j, std::size_t n_iter, const BasisWeights& weights,
                           const Eigen::VectorXd& theta0) {
    Eigen::VectorXd theta = theta0.size() == 0 ? Eigen::VectorXd::Zero(psi.cols()) : theta0;
    BasisHistory h{{}, {}, Signal::zeros(r.size(), r.ts())};
    for (std::size_t j = 0; j <= n_iter; ++j) {
        const TaskResult res = run_task(sc, r, feedforward_from_params(theta, psi, r.ts()), j);
        h.thetas.push_back(theta);
        h.error_norms.push_back(res.e.norm2());
        h.e_final = res.e;
        if (j < n_iter) theta = update_params(theta, res.e, psi, model_j, weights);
    }
    return h;
}

namespace {

ReferenceChangeReport reference_change(const Scenario& sc, const Signal& r_a, const Signal& r_b,
                                       const Eigen::MatrixXd& psi_a, const Eigen::MatrixXd& psi_b,
                                       const ReferenceChangeDesign& d) {
    require_compatible(r_a, r_b, "reference change");
    if (d.switch_task >= d.n_tasks) throw Error(ErrorCode::InvalidParameter, "switch task must precede the last task");
    const std::size_t tail = d.tail_margin.value_or(default_tail_margin(d.L, d.Q));
    const Signal zero = Signal::zeros(r_a.size(), r_a.ts());

    ReferenceChangeReport rep{d.switch_task, {}, {}, {}, {}};
    Signal f = zero;
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(psi_a.cols());
    for (std::size_t j = 0; j < d.n_tasks; ++j) {
        const bool after = j >= d.switch_task;
        const Signal& r = after ? r_b : r_a;
        const Eigen::MatrixXd& psi = after ? psi_b : psi_a;

        rep.feedback_only.push_back(run_task(sc, r, zero, j).e.norm2());

        const TaskResult sig = run_task(sc, r, f, j);
        rep.signal_ilc.push_back(sig.e.norm2());
        f = apply_tail_window(ilc_update(f, sig.e, d.L, d.Q, d.alpha), tail);

        const TaskResult bas = run_task(sc, r, feedforward_from_params(theta, psi, r.ts()), j);
        rep.basis_ilc.push_back(bas.e.norm2());
        rep.thetas.push_back(theta);
        theta = update_params(theta, bas.e, psi, d.model_j, d.weights);
    }
    return rep;
}

} // namespace

ReferenceChangeReport demonstrate_reference_change(const Scenario& sc, const MotionProfile& r_a,
                                                   const MotionProfile& r_b, const ReferenceChangeDesign& design) {
    return reference_change(sc, r_a.position, r_b.position, build_basis(r_a, design.basis),
                            build_basis(r_b, design.basis), design);
}

ReferenceChangeReport demonstrate_reference_change(const Scenario& sc, const Signal& r_a, const Signal& r_b,
                                                   const ReferenceChangeDesign& design) {
    return reference_change(sc, r_a, r_b, build_basis(r_a, design.basis), build_basis(r_b, design.basis), design);
}

} // namespace ilcbench
