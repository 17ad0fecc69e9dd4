#pragma once

// Entropy-growth and hypersensitivity experiments on the noisy three-spin
// register.

#include "bakersim/lindblad.hpp"
#include "bakersim/nmr.hpp"
#include "bakersim/qstate.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bakersim {

enum class DynamicsMap { kChaotic, kRegular };
enum class ArtificialPerturbation { kNone, kSuperoperator };

std::string to_string(DynamicsMap m);
DynamicsMap parse_dynamics_map(std::string_view text);

struct ExperimentConfig {
    std::string preset = "custom";
    DynamicsMap map = DynamicsMap::kChaotic;
    HamiltonianModel hamiltonian{};
    // 1/Gamma in seconds for H, C1, C2.
    double t_h = 4.0;
    double t_c1 = 0.7;
    double t_c2 = 0.4;
    int steps = 6;
    ArtificialPerturbation perturbation = ArtificialPerturbation::kNone;
    std::uint64_t seed = 1;
    int threads = 0;  // 0: hardware concurrency

    NoiseModel noise() const { return NoiseModel::from_times(t_h, t_c1, t_c2); }
    /// Throws std::invalid_argument on an inconsistent configuration.
    void validate() const;

    /// fig2, fig3, fig4 (figure noise settings) and fig5 (fig2 noise, three
    /// steps, used for the hypersensitivity analysis).
    static ExperimentConfig preset_named(std::string_view name);
};

/// ((|0> + i|1>)/sqrt 2)^{(x)3}
StateVector initial_state();

/// Pulse sequence for step k (1-based) of the chosen map.
PulseSequence step_sequence(DynamicsMap map, int step, const HamiltonianModel& model);

/// Spin whose z rotation perturbs step k: H after odd chaotic steps, C2
/// after even ones, H for every regular step.
SpinLabel perturbed_spin(DynamicsMap map, int step);

/// S(n) in bits for n = 0..steps.
std::vector<double> entropy_experiment(const ExperimentConfig& config);

/// Bit k (1-based step) of history h for an n-step run: (h >> (n - k)) & 1.
inline int history_bit(unsigned h, int n, int k) { return static_cast<int>((h >> (n - k)) & 1u); }

/// All 2^n perturbation histories, in history-index order. With
/// apply_kicks = false the perturbation is replaced by the identity.
std::vector<DensityMatrix> history_ensemble(const ExperimentConfig& config, int n, bool apply_kicks = true);

DensityMatrix average_rho(const std::vector<DensityMatrix>& list);

/// assignment[i] is the 0-based group of list element i.
struct GroupingPartition {
    std::vector<int> assignment;

    int groups() const;
    /// Every index assigned, groups numbered 0..R-1 without gaps.
    void validate(std::size_t list_size) const;
};

struct GroupingStats {
    std::vector<double> probability;
    std::vector<DensityMatrix> rho;
    std::vector<double> entropy;
    double mean_entropy = 0.0;  // S-bar
    double information = 0.0;   // I
};

GroupingStats grouping_stats(const GroupingPartition& partition, const std::vector<DensityMatrix>& list);

/// S((a+b)/2) - (S(a) + S(b))/2 in bits.
double js_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Seeds R groups with distinct random operators, then adds the remaining
/// operators in list order to the group whose running average is closest.
GroupingPartition greedy_grouping(const std::vector<DensityMatrix>& list, int groups, std::uint64_t seed);

enum class Provenance { kGreedy, kExhaustive };
std::string to_string(Provenance p);

struct CurvePoint {
    double delta_s;
    double information;
};

struct HypersensitivityCurve {
    std::vector<CurvePoint> points;
    Provenance provenance = Provenance::kExhaustive;
};

/// (Delta S-bar, I) for every set partition, in restricted-growth order.
std::vector<CurvePoint> exhaustive_scan(const std::vector<DensityMatrix>& list, int n_threads = 0);

/// I_min(x) = min{I : Delta S-bar >= x} on the grid of achieved Delta S-bar values.
HypersensitivityCurve frontier_from_points(const std::vector<CurvePoint>& points);
HypersensitivityCurve exhaustive_imin(const std::vector<DensityMatrix>& list, int n_threads = 0);

/// Every greedy point over R = 1..N and `restarts` seeds per R.
std::vector<CurvePoint> greedy_points(const std::vector<DensityMatrix>& list, int restarts, std::uint64_t seed);

/// Best greedy point per R (largest Delta S-bar, ties to smaller I), ordered by R.
HypersensitivityCurve greedy_curve(const std::vector<DensityMatrix>& list, int restarts, std::uint64_t seed);

/// Least-squares slope of I_min against Delta S over the middle 20%..80% of
/// the achieved Delta S range.
double frontier_slope(const HypersensitivityCurve& curve);

inline constexpr int kGreedyRestarts = 64;

struct HypersensitivityResult {
    double s_max = 0.0;
    HypersensitivityCurve exhaustive;
    HypersensitivityCurve greedy;
    std::vector<CurvePoint> all_greedy_points;
    std::vector<CurvePoint> all_partition_points;
    double slope = 0.0;
};

/// Uses config.steps histories (3 for the fig5 preset).
HypersensitivityResult hypersensitivity_experiment(const ExperimentConfig& config);

}  // namespace bakersim
