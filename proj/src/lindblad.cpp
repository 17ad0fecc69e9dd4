#include "bakersim/lindblad.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace bakersim {

namespace {

constexpr int kDim = 8;

const CMatrix& z_on(SpinLabel s) {
    static const CMatrix zh = embed_spin(pauli::z(), SpinLabel::kH);
    static const CMatrix zc1 = embed_spin(pauli::z(), SpinLabel::kC1);
    static const CMatrix zc2 = embed_spin(pauli::z(), SpinLabel::kC2);
    switch (s) {
        case SpinLabel::kH: return zh;
        case SpinLabel::kC1: return zc1;
        case SpinLabel::kC2: return zc2;
    }
    throw std::invalid_argument("unknown spin label");
}

// Each Z_k is diagonal with entries +-1, so Z rho Z flips the sign of the
// elements connecting opposite eigenspaces of spin k.
CMatrix conjugate_by_z(const CMatrix& rho, SpinLabel s) {
    const CMatrix& z = z_on(s);
    CMatrix out = rho;
    for (int c = 0; c < kDim; ++c) {
        for (int r = 0; r < kDim; ++r) out(r, c) *= z(r, r).real() * z(c, c).real();
    }
    return out;
}

void check_density(const CMatrix& rho, const char* where) {
    const double herm = hermiticity_error(rho);
    if (herm > tolerance::kHermitian) {
        throw PhysicsViolation(std::string(where) + ": Hermiticity lost");
    }
    // DensityMatrix checks trace and positivity.
    (void)DensityMatrix(rho);
}

}  // namespace

NoiseModel NoiseModel::from_times(double t_h, double t_c1, double t_c2) {
    auto rate = [](double t) {
        if (std::isnan(t) || t <= 0.0) throw std::invalid_argument("NoiseModel: 1/Gamma times must be positive");
        return std::isinf(t) ? 0.0 : 1.0 / t;
    };
    return {rate(t_h), rate(t_c1), rate(t_c2)};
}

double NoiseModel::gamma(SpinLabel s) const {
    switch (s) {
        case SpinLabel::kH: return gamma_h;
        case SpinLabel::kC1: return gamma_c1;
        case SpinLabel::kC2: return gamma_c2;
    }
    throw std::invalid_argument("unknown spin label");
}

void NoiseModel::validate() const {
    for (double g : {gamma_h, gamma_c1, gamma_c2}) {
        if (!std::isfinite(g) || g < 0.0) throw std::invalid_argument("NoiseModel: rates must be finite and >= 0");
    }
}

CMatrix dissipator(const DensityMatrix& rho, const NoiseModel& noise) {
    noise.validate();
    CMatrix out = CMatrix::Zero(rho.dim(), rho.dim());
    for (SpinLabel s : kRegisterOrder) {
        const double g = noise.gamma(s);
        if (g == 0.0) continue;
        out += g * (conjugate_by_z(rho.matrix(), s) - rho.matrix());
    }
    return out;
}

CMatrix lindblad_generator(const HamiltonianModel& model, const NoiseModel& noise) {
    noise.validate();
    const CMatrix h = hamiltonian_matrix(model).matrix();
    const CMatrix id = CMatrix::Identity(kDim, kDim);
    CMatrix l = Complex(0.0, -1.0) * (kron(id, h) - kron(h.transpose(), id));
    const CMatrix id64 = CMatrix::Identity(kDim * kDim, kDim * kDim);
    for (SpinLabel s : kRegisterOrder) {
        const double g = noise.gamma(s);
        if (g == 0.0) continue;
        const CMatrix& z = z_on(s);
        l += g * (kron(z.transpose(), z) - id64);
    }
    return l;
}

EvolutionEngine::EvolutionEngine(HamiltonianModel model, NoiseModel noise, IntegrationMethod method,
                                 double rk4_step)
    : model_(model), noise_(noise), method_(method), rk4_step_(rk4_step) {
    model_.validate();
    noise_.validate();
    if (!(rk4_step_ > 0.0)) rk4_step_ = timescales(model_).tau1 / 200;
    generator_ = lindblad_generator(model_, noise_);
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hamiltonian_matrix(model_).matrix());
    energies_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
}

CMatrix EvolutionEngine::compute_propagator(double t) const {
    const int n2 = kDim * kDim;
    if (t == 0.0) return CMatrix::Identity(n2, n2);
    if (method_ == IntegrationMethod::kSuperoperatorExpm) {
        const CMatrix lt = generator_ * t;
        return lt.exp();
    }
    // Classic RK4 on a linear ODE is multiplication by the degree-4 Taylor
    // polynomial of h L once per step.
    const int steps = std::max(1, static_cast<int>(std::ceil(t / rk4_step_ - 1e-9)));
    const double h = t / steps;
    const CMatrix hl = generator_ * h;
    const CMatrix id = CMatrix::Identity(n2, n2);
    const CMatrix hl2 = hl * hl;
    const CMatrix step = id + hl + hl2 / 2.0 + hl2 * hl / 6.0 + hl2 * hl2 / 24.0;
    CMatrix p = id;
    for (int k = 0; k < steps; ++k) p = step * p;
    return p;
}

const CMatrix& EvolutionEngine::delay_propagator(double t) const {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("delay_propagator: t must be finite and >= 0");
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.find(t);
        if (it != cache_.end()) return *it->second;
    }
    auto p = std::make_unique<const CMatrix>(compute_propagator(t));
    std::lock_guard<std::mutex> lock(cache_mutex_);
    // If another thread got here first, keep its entry so every caller sees
    // the same object.
    auto [it, inserted] = cache_.emplace(t, std::move(p));
    return *it->second;
}

std::size_t EvolutionEngine::cache_size() const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    return cache_.size();
}

CMatrix apply_superoperator(const CMatrix& superop, const CMatrix& rho) {
    const auto n = rho.rows();
    if (superop.rows() != n * n || superop.cols() != n * n) {
        throw std::invalid_argument("apply_superoperator: dimension mismatch");
    }
    const CVector v = superop * Eigen::Map<const CVector>(rho.data(), n * n);
    return Eigen::Map<const CMatrix>(v.data(), n, n);
}

DensityMatrix unitary_conjugate(const UnitaryOperator& u, const DensityMatrix& rho) {
    return DensityMatrix(u.matrix() * rho.matrix() * u.matrix().adjoint());
}

DensityMatrix run_sequence(const DensityMatrix& rho0, const PulseSequence& seq, const EvolutionEngine& engine) {
    if (rho0.dim() != kDim) throw std::invalid_argument("run_sequence: expected an 8x8 density matrix");
    CMatrix rho = rho0.matrix();
    for (const auto& p : seq.instructions()) {
        if (const auto* d = std::get_if<Delay>(&p)) {
            rho = apply_superoperator(engine.delay_propagator(d->duration), rho);
        } else {
            const CMatrix u = pulse_unitary(p, engine.model()).matrix();
            rho = u * rho * u.adjoint();
        }
        check_density(rho, "run_sequence");
    }
    return DensityMatrix(std::move(rho));
}

UnitaryOperator perturbation_unitary(SpinLabel spin) {
    return UnitaryOperator(Complex(0.0, 1.0) * z_on(spin));
}

DensityMatrix apply_perturbation(const DensityMatrix& rho, SpinLabel spin) {
    if (rho.dim() != kDim) throw std::invalid_argument("apply_perturbation: expected an 8x8 density matrix");
    // Zero the blocks that connect opposite Z_s eigenspaces.
    const CMatrix& z = z_on(spin);
    CMatrix out = rho.matrix();
    for (int c = 0; c < kDim; ++c) {
        for (int r = 0; r < kDim; ++r) {
            if (z(r, r).real() != z(c, c).real()) out(r, c) = 0.0;
        }
    }
    return DensityMatrix(std::move(out));
}

namespace {

struct Accumulator {
    CMatrix sum = CMatrix::Zero(kDim, kDim);
    Eigen::MatrixXd sq_real = Eigen::MatrixXd::Zero(kDim, kDim);
    Eigen::MatrixXd sq_imag = Eigen::MatrixXd::Zero(kDim, kDim);
};

CVector evolve_free(const EvolutionEngine& engine, const CVector& psi, double t) {
    const CMatrix& v = engine.eigenvectors();
    const Eigen::VectorXd& w = engine.energies();
    CVector c = v.adjoint() * psi;
    for (int i = 0; i < kDim; ++i) c(i) *= std::exp(Complex(0.0, -w(i) * t));
    return v * c;
}

CVector flip_z(const CVector& psi, SpinLabel s) {
    const CMatrix& z = z_on(s);
    CVector out = psi;
    for (int i = 0; i < kDim; ++i) out(i) *= z(i, i).real();
    return out;
}

CVector single_trajectory(const CVector& psi0, const PulseSequence& seq, const EvolutionEngine& engine,
                          std::mt19937_64& rng) {
    const NoiseModel& noise = engine.noise();
    const double total_rate = noise.gamma_h + noise.gamma_c1 + noise.gamma_c2;
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    CVector psi = psi0;
    for (const auto& p : seq.instructions()) {
        const auto* d = std::get_if<Delay>(&p);
        if (!d) {
            psi = pulse_unitary(p, engine.model()).matrix() * psi;
            continue;
        }
        double remaining = d->duration;
        if (total_rate > 0.0) {
            // Superposed Poisson processes: exponential waiting times at the
            // total rate, each jump assigned to a spin in proportion to its rate.
            while (true) {
                const double wait = -std::log1p(-uniform(rng)) / total_rate;
                if (wait >= remaining) break;
                psi = evolve_free(engine, psi, wait);
                remaining -= wait;
                const double pick = uniform(rng) * total_rate;
                SpinLabel s = SpinLabel::kC2;
                if (pick < noise.gamma_h) {
                    s = SpinLabel::kH;
                } else if (pick < noise.gamma_h + noise.gamma_c1) {
                    s = SpinLabel::kC1;
                }
                psi = flip_z(psi, s);
            }
        }
        psi = evolve_free(engine, psi, remaining);
    }
    return psi;
}

}  // namespace

TrajectoryEstimate trajectory_estimate(const StateVector& psi0, const PulseSequence& seq,
                                       const EvolutionEngine& engine, int n_traj, std::uint64_t seed,
                                       int n_threads) {
    if (n_traj < 1) throw std::invalid_argument("trajectory_run: n_traj must be >= 1");
    if (psi0.dim() != kDim) throw std::invalid_argument("trajectory_run: expected a 3-qubit state");

    const int n_blocks = (n_traj + kTrajectoryBlock - 1) / kTrajectoryBlock;
    std::vector<Accumulator> blocks(static_cast<std::size_t>(n_blocks));

    auto run_block = [&](int b) {
        Accumulator& acc = blocks[static_cast<std::size_t>(b)];
        const int begin = b * kTrajectoryBlock;
        const int end = std::min(n_traj, begin + kTrajectoryBlock);
        for (int i = begin; i < end; ++i) {
            std::seed_seq sseq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                               static_cast<std::uint32_t>(i)};
            std::mt19937_64 rng(sseq);
            const CVector psi = single_trajectory(psi0.amplitudes(), seq, engine, rng);
            const CMatrix proj = psi * psi.adjoint();
            acc.sum += proj;
            acc.sq_real += proj.real().cwiseAbs2();
            acc.sq_imag += proj.imag().cwiseAbs2();
        }
    };

    int workers = n_threads > 0 ? n_threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, n_blocks);
    if (workers == 1) {
        for (int b = 0; b < n_blocks; ++b) run_block(b);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (int b = w; b < n_blocks; b += workers) run_block(b);
            });
        }
        for (auto& t : pool) t.join();
    }

    Accumulator total;
    for (const auto& acc : blocks) {
        total.sum += acc.sum;
        total.sq_real += acc.sq_real;
        total.sq_imag += acc.sq_imag;
    }
    const double n = n_traj;
    TrajectoryEstimate est;
    est.mean = total.sum / n;
    auto se = [n](const Eigen::MatrixXd& sq, const Eigen::MatrixXd& mean) {
        if (n < 2) return Eigen::MatrixXd(Eigen::MatrixXd::Zero(mean.rows(), mean.cols()));
        Eigen::MatrixXd var = (sq / n - mean.cwiseAbs2()) * (n / (n - 1));
        return Eigen::MatrixXd((var.cwiseMax(0.0) / n).cwiseSqrt());
    };
    est.std_error_real = se(total.sq_real, est.mean.real());
    est.std_error_imag = se(total.sq_imag, est.mean.imag());
    return est;
}

DensityMatrix trajectory_run(const StateVector& psi0, const PulseSequence& seq, const EvolutionEngine& engine,
                             int n_traj, std::uint64_t seed, int n_threads) {
    return DensityMatrix(trajectory_estimate(psi0, seq, engine, n_traj, seed, n_threads).mean);
}

}  // namespace bakersim
