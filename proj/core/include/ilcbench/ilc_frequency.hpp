#pragma once

#include "ilcbench/frf.hpp"
#include "ilcbench/lifted.hpp"
#include "ilcbench/noncausal_filter.hpp"
#include "ilcbench/plant_lab.hpp"
#include "ilcbench/signal.hpp"
#include "ilcbench/transfer_function.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace ilcbench {

// ---------------------------------------------------------------------------
// Learning filter

struct InverseOptions {
    /// Taps of the causal and anticausal series are kept until they fall
    /// below tolerance * (largest tap).
    double tolerance = 1e-15;
    /// Zeros with ||z| - 1| below this are treated as lying on the circle.
    double unit_circle_tolerance = 1e-6;
    /// Hard cap on the length of either series.
    std::size_t max_series_length = 200000;
};

struct InverseDesign {
    NoncausalFilter filter;
    /// Upper estimate of the l1 norm of the discarded tail taps.
    double truncation_bound;
};

/// Two-sided FIR approximation of model^-1. Zeros inside the unit circle are
/// inverted causally, zeros outside anticausally, and the pure delay becomes
/// preview.
///
/// Throws ErrorCode::UnsupportedIntegrator for a pole or zero at z = 1,
/// ErrorCode::InversionSingularity for any other zero on the unit circle and
/// PreviewBudgetError when the preview needed exceeds `preview_budget`.
InverseDesign design_inverse_L(const TransferFunction& model, std::size_t preview_budget,
                               const InverseOptions& options = {});

/// Inverse of GS for a rigid body under FIR feedback K:
///     L = m (z - 2 + z^-1) / Ts^2 + K
/// The ZOH model of 1/(m s^2) has its zero at z = -1, so this is built from
/// the continuous inverse instead of by design_inverse_L.
NoncausalFilter rigid_body_learning_filter(double mass, const TransferFunction& controller);

// ---------------------------------------------------------------------------
// Robustness filter

struct QDesignOptions {
    /// Cutoff sits at the lowest masked frequency where |1 - GS L| reaches this.
    double cutoff_level = 0.9;
    /// Accept a candidate when max |Q| |1 - GS L| on the mask is below this.
    double target = 0.95;
    /// Each rejected candidate lowers the passband edge by this factor.
    double sweep_factor = 0.97;
    std::size_t max_candidates = 80;
};

struct QDesign {
    NoncausalFilter filter;     ///< Q = Qt* Qt, symmetric
    NoncausalFilter prototype;  ///< Qt
    /// Passband edge of the prototype [rad/s]; empty when Q is the identity.
    std::optional<double> passband_edge;
    double sup_rho;  ///< max |Q| |1 - GS L| on the mask
    double margin;   ///< 1 - sup_rho
};

/// Zero-phase robustness filter Qt* Qt. Qt is a Hamming-windowed sinc H
/// sharpened to H (2 - H), so the gain is exactly one at DC and never above it. Throws InfeasibleError if no candidate meets
/// the target before the passband edge drops below the lowest masked
/// frequency.
QDesign design_Q(const Frf& frf_gs, const NoncausalFilter& L, const FrequencyMask& mask,
                 const QDesignOptions& options = {});

/// Frequency response of Qt* Qt, i.e. |Qt|^2, on `grid`.
Frf zero_phase_magnitude(const NoncausalFilter& qt, const std::vector<double>& grid);

// ---------------------------------------------------------------------------
// Certification

struct ConvergenceReport {
    std::vector<double> grid;
    std::vector<double> rho;  ///< value per grid point, NaN outside the mask
    FrequencyMask mask;
    double sup_rho;
    double omega_at_sup;

    bool pass() const noexcept { return sup_rho < 1.0; }
};

/// rho(omega) = |Q| |1 - GS L| over the masked grid points.
ConvergenceReport check_convergence(const Frf& frf_gs, const NoncausalFilter& L,
                                    const NoncausalFilter& Q, const FrequencyMask& mask);

// ---------------------------------------------------------------------------
// Iteration

/// f_{j+1} = Q f_j + alpha (Q L) e_j. Q L is applied as one filter, so this
/// equals Q (f_j + alpha L e_j) away from the record edges.
Signal ilc_update(const Signal& f, const Signal& e, const NoncausalFilter& L,
                  const NoncausalFilter& Q, double alpha = 1.0);

struct IlcOptions {
    double alpha = 1.0;
    std::size_t n_iter = 10;
    /// Samples at the end of the record where f is held at zero; defaults
    /// to preview(L) + preview(Q). Feedforward there mostly acts on error
    /// after the record and the finite-record iteration is not contractive.
    std::optional<std::size_t> tail_margin;
    /// Stop once ||e_j|| exceeds this multiple of ||e_0||.
    double divergence_factor = 1e3;
    /// Keep every f_j and e_j; otherwise only the last ones are stored.
    bool keep_signals = true;
};

struct TrialHistory {
    std::vector<Signal> feedforward;   ///< f_j applied in task j
    std::vector<Signal> errors;        ///< e_j measured in task j
    std::vector<double> error_norms;
    std::vector<double> feedforward_norms;
    Signal f_final;                    ///< f after the last update
    std::size_t tail_margin = 0;
    bool diverged = false;
    std::optional<std::size_t> diverged_at;
    /// First task j with ||e_j|| > ||e_{j-1}||.
    std::optional<std::size_t> first_rising;

    std::size_t tasks() const noexcept { return error_norms.size(); }
};

std::size_t default_tail_margin(const NoncausalFilter& L, const NoncausalFilter& Q);

/// Holds f at zero on the last `margin` samples.
Signal apply_tail_window(Signal f, std::size_t margin);

/// Runs n_iter updates starting from f_0 = 0, i.e. n_iter + 1 tasks.
TrialHistory run_ilc(const Scenario& sc, const Signal& r, const NoncausalFilter& L,
                     const NoncausalFilter& Q, const IlcOptions& options = {});

// ---------------------------------------------------------------------------
// Fixed point

/// e_inf = (1 - Q) / (1 - Q (1 - GS L)) e_0, evaluated on a zero-padded DFT
/// of the record. Throws ErrorCode::FixedPointUndefined when |Q (1 - GS L)|
/// reaches 1 at any bin.
Signal asymptotic_error(const TransferFunction& gs, const NoncausalFilter& L,
                        const NoncausalFilter& Q, const Signal& e0);

/// f_inf = Q L / (1 - Q (1 - GS L)) e_0, same evaluation.
Signal asymptotic_feedforward(const TransferFunction& gs, const NoncausalFilter& L,
                              const NoncausalFilter& Q, const Signal& e0);

// ---------------------------------------------------------------------------
// Finite-time cross-check

/// Largest singular value of W Q_N (I - L_N J_N), the feedforward-domain
/// iteration run_ilc executes. J_N is the lifted process sensitivity of the
/// scenario and W zeroes the last `tail_margin` rows.
double lifted_contraction_oracle(const Scenario& sc, const NoncausalFilter& L,
                                 const NoncausalFilter& Q, std::size_t n,
                                 std::optional<std::size_t> tail_margin = std::nullopt);

/// Same quantity from explicit lifted matrices.
double lifted_contraction_oracle(const LiftedOperator& J, const LiftedOperator& L,
                                 const LiftedOperator& Q, std::size_t tail_margin = 0);

/// Largest singular value of a dense matrix by Lanczos on A^T A.
double largest_singular_value(const Eigen::MatrixXd& a, double tolerance = 1e-10,
                              std::size_t max_steps = 300);

} // namespace ilcbench
