#pragma once

// Dephasing master equation for the three-spin register. Delays evolve under
// the Lindblad generator; pulses act as instantaneous unitaries.
//
// Superoperators act on vec(rho), the column-major stacking of rho, so
// vec(A rho B) = (B^T (x) A) vec(rho).

#include "bakersim/nmr.hpp"
#include "bakersim/qstate.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>

namespace bakersim {

struct NoiseModel {
    double gamma_h = 0.0;
    double gamma_c1 = 0.0;
    double gamma_c2 = 0.0;

    /// Rates from 1/Gamma times in seconds; an infinite time means no dephasing.
    static NoiseModel from_times(double t_h, double t_c1, double t_c2);

    double gamma(SpinLabel s) const;
    /// Throws std::invalid_argument for negative or non-finite rates.
    void validate() const;

    bool operator==(const NoiseModel&) const = default;
};

/// sum_k Gamma_k (Z_k rho Z_k - rho)
CMatrix dissipator(const DensityMatrix& rho, const NoiseModel& noise);

/// 64x64 generator L with d vec(rho)/dt = L vec(rho).
CMatrix lindblad_generator(const HamiltonianModel& model, const NoiseModel& noise);

enum class IntegrationMethod { kSuperoperatorExpm, kRk4 };

class EvolutionEngine {
public:
    /// rk4_step <= 0 selects tau1/200 for the model.
    EvolutionEngine(HamiltonianModel model, NoiseModel noise,
                    IntegrationMethod method = IntegrationMethod::kSuperoperatorExpm, double rk4_step = 0.0);

    const HamiltonianModel& model() const { return model_; }
    const NoiseModel& noise() const { return noise_; }
    IntegrationMethod method() const { return method_; }
    double rk4_step() const { return rk4_step_; }
    const CMatrix& generator() const { return generator_; }

    /// Propagator for a delay of t seconds. Memoized per duration; the
    /// returned reference stays valid for the engine's lifetime.
    const CMatrix& delay_propagator(double t) const;

    std::size_t cache_size() const;

    /// Eigen-decomposition of H, shared by the trajectory unraveling.
    const Eigen::VectorXd& energies() const { return energies_; }
    const CMatrix& eigenvectors() const { return eigenvectors_; }

private:
    CMatrix compute_propagator(double t) const;

    HamiltonianModel model_;
    NoiseModel noise_;
    IntegrationMethod method_;
    double rk4_step_;
    CMatrix generator_;
    Eigen::VectorXd energies_;
    CMatrix eigenvectors_;

    mutable std::mutex cache_mutex_;
    mutable std::map<double, std::unique_ptr<const CMatrix>> cache_;
};

/// Applies a superoperator to rho without validating the result.
CMatrix apply_superoperator(const CMatrix& superop, const CMatrix& rho);

DensityMatrix unitary_conjugate(const UnitaryOperator& u, const DensityMatrix& rho);

/// Runs the sequence in execution order. Each intermediate state is checked
/// against the density-matrix invariants; PhysicsViolation on failure.
DensityMatrix run_sequence(const DensityMatrix& rho0, const PulseSequence& seq, const EvolutionEngine& engine);

/// exp(i pi Z_s / 2) = i Z_s
UnitaryOperator perturbation_unitary(SpinLabel spin);

/// (rho + Z_s rho Z_s) / 2
DensityMatrix apply_perturbation(const DensityMatrix& rho, SpinLabel spin);

struct TrajectoryEstimate {
    CMatrix mean;
    /// Standard error of the mean, separately for real and imaginary parts.
    Eigen::MatrixXd std_error_real;
    Eigen::MatrixXd std_error_imag;
};

/// Z-jump unraveling: each spin jumps as a Poisson process of rate Gamma_s
/// during delays. Trajectory i draws from its own generator seeded with
/// (seed, i), and sums are reduced over fixed blocks of kTrajectoryBlock
/// trajectories in block order, so the result does not depend on the
/// number of worker threads.
inline constexpr int kTrajectoryBlock = 256;

TrajectoryEstimate trajectory_estimate(const StateVector& psi0, const PulseSequence& seq,
                                       const EvolutionEngine& engine, int n_traj, std::uint64_t seed,
                                       int n_threads = 0);

DensityMatrix trajectory_run(const StateVector& psi0, const PulseSequence& seq, const EvolutionEngine& engine,
                             int n_traj, std::uint64_t seed, int n_threads = 0);

}  // namespace bakersim
