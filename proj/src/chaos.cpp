#include "bakersim/chaos.hpp"

#include "bakersim/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

namespace bakersim {

namespace {

constexpr double kGridMerge = 1e-12;

int worker_count(int requested, std::size_t jobs) {
    int w = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    w = std::max(w, 1);
    return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(w), std::max<std::size_t>(jobs, 1)));
}

// Runs job(i) for i in [0, n) on up to `workers` threads, strided so the
// work assignment is fixed; every job writes only its own output slot.
template <class Job>
void parallel_for(std::size_t n, int workers, Job job) {
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) job(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = static_cast<std::size_t>(w); i < n; i += static_cast<std::size_t>(workers)) job(i);
        });
    }
    for (auto& t : pool) t.join();
}

struct MapSequences {
    PulseSequence odd;
    PulseSequence even;
    PulseSequence regular;

    const PulseSequence& for_step(DynamicsMap map, int step) const {
        if (map == DynamicsMap::kRegular) return regular;
        return step % 2 == 1 ? odd : even;
    }
};

MapSequences build_sequences(const HamiltonianModel& model) {
    return {t_odd(model), t_even(model), t_regular(model)};
}

double shannon_bits(const std::vector<double>& p) {
    double h = 0.0;
    for (double x : p) {
        if (x > 0.0) h -= x * std::log2(x);
    }
    return h;
}

}  // namespace

std::string to_string(DynamicsMap m) { return m == DynamicsMap::kRegular ? "regular" : "chaotic"; }

DynamicsMap parse_dynamics_map(std::string_view text) {
    if (text == "chaotic") return DynamicsMap::kChaotic;
    if (text == "regular") return DynamicsMap::kRegular;
    throw std::invalid_argument("unknown map '" + std::string(text) + "'");
}

void ExperimentConfig::validate() const {
    if (steps < 1) throw std::invalid_argument("ExperimentConfig: steps must be >= 1");
    hamiltonian.validate();
    noise().validate();
}

ExperimentConfig ExperimentConfig::preset_named(std::string_view name) {
    ExperimentConfig c;
    c.preset = std::string(name);
    if (name == "fig2") {
        c.t_h = 4.0, c.t_c1 = 0.7, c.t_c2 = 0.4;
    } else if (name == "fig3") {
        c.t_h = 10.0, c.t_c1 = 10.0, c.t_c2 = 0.2;
    } else if (name == "fig4") {
        c.t_h = 10.0, c.t_c1 = 10.0, c.t_c2 = 10.0;
        c.perturbation = ArtificialPerturbation::kSuperoperator;
    } else if (name == "fig5") {
        c.t_h = 4.0, c.t_c1 = 0.7, c.t_c2 = 0.4;
        c.steps = 3;
    } else if (name == "custom") {
    } else {
        throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
    }
    return c;
}

StateVector initial_state() {
    CVector one(2);
    one << 1.0, Complex(0.0, 1.0);
    return StateVector(kron(kron(one, one), one));
}

PulseSequence step_sequence(DynamicsMap map, int step, const HamiltonianModel& model) {
    if (step < 1) throw std::invalid_argument("step_sequence: steps are numbered from 1");
    if (map == DynamicsMap::kRegular) return t_regular(model);
    return step % 2 == 1 ? t_odd(model) : t_even(model);
}

SpinLabel perturbed_spin(DynamicsMap map, int step) {
    if (map == DynamicsMap::kRegular) return SpinLabel::kH;
    return step % 2 == 1 ? SpinLabel::kH : SpinLabel::kC2;
}

std::vector<double> entropy_experiment(const ExperimentConfig& config) {
    config.validate();
    const EvolutionEngine engine(config.hamiltonian, config.noise());
    const MapSequences seqs = build_sequences(config.hamiltonian);

    DensityMatrix rho = DensityMatrix::from_pure(initial_state());
    std::vector<double> s{von_neumann_entropy_bits(rho)};
    for (int n = 1; n <= config.steps; ++n) {
        rho = run_sequence(rho, seqs.for_step(config.map, n), engine);
        if (config.perturbation == ArtificialPerturbation::kSuperoperator) {
            rho = apply_perturbation(rho, perturbed_spin(config.map, n));
        }
        s.push_back(von_neumann_entropy_bits(rho));
    }
    return s;
}

std::vector<DensityMatrix> history_ensemble(const ExperimentConfig& config, int n, bool apply_kicks) {
    config.validate();
    if (n < 1 || n > 10) throw std::invalid_argument("history_ensemble: n must be in 1..10");
    const EvolutionEngine engine(config.hamiltonian, config.noise());
    const MapSequences seqs = build_sequences(config.hamiltonian);
    const DensityMatrix rho0 = DensityMatrix::from_pure(initial_state());

    const std::size_t count = std::size_t{1} << n;
    std::vector<DensityMatrix> out(count, rho0);
    parallel_for(count, worker_count(config.threads, count), [&](std::size_t h) {
        DensityMatrix rho = rho0;
        for (int k = 1; k <= n; ++k) {
            rho = run_sequence(rho, seqs.for_step(config.map, k), engine);
            if (apply_kicks && history_bit(static_cast<unsigned>(h), n, k)) {
                rho = unitary_conjugate(perturbation_unitary(perturbed_spin(config.map, k)), rho);
            }
        }
        out[h] = std::move(rho);
    });
    return out;
}

DensityMatrix average_rho(const std::vector<DensityMatrix>& list) {
    if (list.empty()) throw std::invalid_argument("average_rho: empty list");
    CMatrix sum = CMatrix::Zero(list.front().dim(), list.front().dim());
    for (const auto& r : list) {
        if (r.dim() != list.front().dim()) throw std::invalid_argument("average_rho: dimension mismatch");
        sum += r.matrix();
    }
    return DensityMatrix(sum / static_cast<double>(list.size()));
}

int GroupingPartition::groups() const {
    if (assignment.empty()) return 0;
    return *std::max_element(assignment.begin(), assignment.end()) + 1;
}

void GroupingPartition::validate(std::size_t list_size) const {
    if (assignment.size() != list_size) throw std::invalid_argument("partition: size does not match the list");
    const int r = groups();
    std::vector<int> count(static_cast<std::size_t>(std::max(r, 0)), 0);
    for (int g : assignment) {
        if (g < 0) throw std::invalid_argument("partition: negative group index");
        ++count[static_cast<std::size_t>(g)];
    }
    for (int c : count) {
        if (c == 0) throw std::invalid_argument("partition: empty group");
    }
}

GroupingStats grouping_stats(const GroupingPartition& partition, const std::vector<DensityMatrix>& list) {
    if (list.empty()) throw std::invalid_argument("grouping_stats: empty list");
    partition.validate(list.size());
    const int r = partition.groups();
    const int dim = list.front().dim();
    std::vector<CMatrix> sums(static_cast<std::size_t>(r), CMatrix::Zero(dim, dim));
    std::vector<int> counts(static_cast<std::size_t>(r), 0);
    for (std::size_t i = 0; i < list.size(); ++i) {
        const auto g = static_cast<std::size_t>(partition.assignment[i]);
        sums[g] += list[i].matrix();
        ++counts[g];
    }
    GroupingStats st;
    const double n = static_cast<double>(list.size());
    for (int g = 0; g < r; ++g) {
        const auto gi = static_cast<std::size_t>(g);
        const double p = counts[gi] / n;
        DensityMatrix rho(sums[gi] / static_cast<double>(counts[gi]));
        const double s = von_neumann_entropy_bits(rho);
        st.probability.push_back(p);
        st.rho.push_back(std::move(rho));
        st.entropy.push_back(s);
        st.mean_entropy += p * s;
    }
    st.information = shannon_bits(st.probability);
    return st;
}

double js_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("js_distance: dimension mismatch");
    const DensityMatrix mid(0.5 * (a.matrix() + b.matrix()));
    return von_neumann_entropy_bits(mid) - 0.5 * (von_neumann_entropy_bits(a) + von_neumann_entropy_bits(b));
}

GroupingPartition greedy_grouping(const std::vector<DensityMatrix>& list, int groups, std::uint64_t seed) {
    const int n = static_cast<int>(list.size());
    if (groups < 1 || groups > n) throw std::invalid_argument("greedy_grouping: R must be in 1..list size");

    std::seed_seq sseq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(groups)};
    std::mt19937_64 rng(sseq);
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    // Partial Fisher-Yates: the first R entries are the seeds.
    for (int i = 0; i < groups; ++i) {
        std::uniform_int_distribution<int> pick(i, n - 1);
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(pick(rng))]);
    }

    GroupingPartition part;
    part.assignment.assign(static_cast<std::size_t>(n), -1);
    std::vector<CMatrix> sums;
    std::vector<int> counts;
    for (int g = 0; g < groups; ++g) {
        const int idx = order[static_cast<std::size_t>(g)];
        part.assignment[static_cast<std::size_t>(idx)] = g;
        sums.push_back(list[static_cast<std::size_t>(idx)].matrix());
        counts.push_back(1);
    }
    for (int i = 0; i < n; ++i) {
        if (part.assignment[static_cast<std::size_t>(i)] >= 0) continue;
        const DensityMatrix& cand = list[static_cast<std::size_t>(i)];
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int g = 0; g < groups; ++g) {
            const auto gi = static_cast<std::size_t>(g);
            const DensityMatrix avg(sums[gi] / static_cast<double>(counts[gi]));
            const double d = js_distance(avg, cand);
            if (d < best_d) {
                best_d = d;
                best = g;
            }
        }
        part.assignment[static_cast<std::size_t>(i)] = best;
        sums[static_cast<std::size_t>(best)] += cand.matrix();
        ++counts[static_cast<std::size_t>(best)];
    }
    return part;
}

std::string to_string(Provenance p) { return p == Provenance::kGreedy ? "greedy" : "exhaustive"; }

std::vector<CurvePoint> exhaustive_scan(const std::vector<DensityMatrix>& list, int n_threads) {
    const int n = static_cast<int>(list.size());
    if (n < 1) throw std::invalid_argument("exhaustive_scan: empty list");
    if (n > 10) throw std::invalid_argument("exhaustive_scan: list too long (at most 10 operators)");
    const int dim = list.front().dim();

    // Entropy of the average over every non-empty subset, keyed by bitmask.
    const std::size_t n_masks = std::size_t{1} << n;
    std::vector<double> subset_entropy(n_masks, 0.0);
    parallel_for(n_masks - 1, worker_count(n_threads, n_masks), [&](std::size_t k) {
        const std::size_t mask = k + 1;
        CMatrix sum = CMatrix::Zero(dim, dim);
        int count = 0;
        for (int i = 0; i < n; ++i) {
            if (mask & (std::size_t{1} << i)) {
                sum += list[static_cast<std::size_t>(i)].matrix();
                ++count;
            }
        }
        subset_entropy[mask] = von_neumann_entropy_bits(DensityMatrix(sum / static_cast<double>(count)));
    });
    const double s_max = subset_entropy[n_masks - 1];

    const auto partitions = all_set_partitions(n);
    std::vector<CurvePoint> points(partitions.size());
    parallel_for(partitions.size(), worker_count(n_threads, partitions.size()), [&](std::size_t k) {
        const auto& a = partitions[k];
        const int r = *std::max_element(a.begin(), a.end()) + 1;
        std::vector<std::size_t> masks(static_cast<std::size_t>(r), 0);
        std::vector<int> counts(static_cast<std::size_t>(r), 0);
        for (int i = 0; i < n; ++i) {
            masks[static_cast<std::size_t>(a[static_cast<std::size_t>(i)])] |= std::size_t{1} << i;
            ++counts[static_cast<std::size_t>(a[static_cast<std::size_t>(i)])];
        }
        double s_bar = 0.0;
        std::vector<double> p;
        for (int g = 0; g < r; ++g) {
            const double pg = counts[static_cast<std::size_t>(g)] / static_cast<double>(n);
            p.push_back(pg);
            s_bar += pg * subset_entropy[masks[static_cast<std::size_t>(g)]];
        }
        points[k] = {s_max - s_bar, shannon_bits(p)};
    });
    return points;
}

HypersensitivityCurve frontier_from_points(const std::vector<CurvePoint>& points) {
    if (points.empty()) throw std::invalid_argument("frontier: no points");
    std::vector<CurvePoint> sorted = points;
    std::sort(sorted.begin(), sorted.end(), [](const CurvePoint& a, const CurvePoint& b) {
        if (a.delta_s != b.delta_s) return a.delta_s < b.delta_s;
        return a.information < b.information;
    });
    // suffix_min[i] = min I over sorted[i..].
    std::vector<double> suffix_min(sorted.size());
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = sorted.size(); i-- > 0;) {
        m = std::min(m, sorted[i].information);
        suffix_min[i] = m;
    }
    HypersensitivityCurve curve;
    curve.provenance = Provenance::kExhaustive;
    std::size_t i = 0;
    while (i < sorted.size()) {
        // Values within kGridMerge of the first one form one grid point.
        const double x = sorted[i].delta_s;
        curve.points.push_back({x, suffix_min[i]});
        while (i < sorted.size() && sorted[i].delta_s <= x + kGridMerge) ++i;
    }
    return curve;
}

HypersensitivityCurve exhaustive_imin(const std::vector<DensityMatrix>& list, int n_threads) {
    return frontier_from_points(exhaustive_scan(list, n_threads));
}

std::vector<CurvePoint> greedy_points(const std::vector<DensityMatrix>& list, int restarts, std::uint64_t seed) {
    if (restarts < 1) throw std::invalid_argument("greedy_points: restarts must be >= 1");
    const DensityMatrix avg = average_rho(list);
    const double s_max = von_neumann_entropy_bits(avg);
    std::vector<CurvePoint> out;
    const int n = static_cast<int>(list.size());
    for (int r = 1; r <= n; ++r) {
        for (int k = 0; k < restarts; ++k) {
            // Restart k of every R draws from its own stream.
            const std::uint64_t s = seed * 1000003ull + static_cast<std::uint64_t>(k);
            const GroupingStats st = grouping_stats(greedy_grouping(list, r, s), list);
            out.push_back({s_max - st.mean_entropy, st.information});
        }
    }
    return out;
}

namespace {

HypersensitivityCurve best_per_group_count(const std::vector<CurvePoint>& pts, int restarts) {
    HypersensitivityCurve curve;
    curve.provenance = Provenance::kGreedy;
    const std::size_t per_r = static_cast<std::size_t>(restarts);
    for (std::size_t start = 0; start < pts.size(); start += per_r) {
        CurvePoint best = pts[start];
        for (std::size_t i = start + 1; i < start + per_r; ++i) {
            const CurvePoint& p = pts[i];
            if (p.delta_s > best.delta_s || (p.delta_s == best.delta_s && p.information < best.information)) best = p;
        }
        curve.points.push_back(best);
    }
    return curve;
}

}  // namespace

HypersensitivityCurve greedy_curve(const std::vector<DensityMatrix>& list, int restarts, std::uint64_t seed) {
    return best_per_group_count(greedy_points(list, restarts, seed), restarts);
}

double frontier_slope(const HypersensitivityCurve& curve) {
    if (curve.points.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double lo = curve.points.front().delta_s;
    double hi = curve.points.front().delta_s;
    for (const auto& p : curve.points) {
        lo = std::min(lo, p.delta_s);
        hi = std::max(hi, p.delta_s);
    }
    const double a = lo + 0.2 * (hi - lo);
    const double b = lo + 0.8 * (hi - lo);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (const auto& p : curve.points) {
        if (p.delta_s < a || p.delta_s > b) continue;
        sx += p.delta_s;
        sy += p.information;
        sxx += p.delta_s * p.delta_s;
        sxy += p.delta_s * p.information;
        ++count;
    }
    const double den = count * sxx - sx * sx;
    if (count < 2 || den <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (count * sxy - sx * sy) / den;
}

HypersensitivityResult hypersensitivity_experiment(const ExperimentConfig& config) {
    const auto list = history_ensemble(config, config.steps);
    HypersensitivityResult res;
    res.s_max = von_neumann_entropy_bits(average_rho(list));
    res.all_partition_points = exhaustive_scan(list, config.threads);
    res.exhaustive = frontier_from_points(res.all_partition_points);
    res.all_greedy_points = greedy_points(list, kGreedyRestarts, config.seed);
    res.greedy = best_per_group_count(res.all_greedy_points, kGreedyRestarts);
    res.slope = frontier_slope(res.exhaustive);
    return res;
}

}  // namespace bakersim
