#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lagrangeflow/sde_engine.hpp"

namespace lagrangeflow {

/// Read-only view of one path up to time index k. Test functions receive only
/// this view, so every dictionary entry is adapted by construction.
class History {
public:
    History(const PathEnsemble& ens, const ProcessSample& proc, std::size_t n, std::size_t k)
        : ens_(ens), proc_(proc), n_(n), k_(k) {}

    std::size_t now() const { return k_; }
    double time() const { return ens_.grid().t(k_); }
    const Vec3& position(std::size_t j) const;
    const Vec3& position() const { return position(k_); }
    double process(std::size_t j) const;
    double process() const { return process(k_); }

private:
    const PathEnsemble& ens_;
    const ProcessSample& proc_;
    std::size_t n_, k_;
};

struct TestFunction {
    std::string name;
    std::function<double(const History&)> eval;
};

/// {1, X^1, X^2, X^3, P, min(|X|^2, 10)}.
std::vector<TestFunction> default_test_dictionary();

/// Two-sided Gaussian critical value at level alpha / cells.
double bonferroni_threshold(double alpha, std::size_t cells);

struct MartingaleCell {
    double statistic = 0.0;  // mean_n dP[n,k] psi_j[n,k]
    double std_error = 0.0;
    double z = 0.0;
};

struct BiasProbe {
    std::size_t steps_coarse = 0;
    std::string cell;  // component and test function with the largest coarse z
    double bias_coarse = 0.0, se_coarse = 0.0;
    double bias_fine = 0.0, se_fine = 0.0;
    double ratio = 0.0;  // |bias_coarse| / |bias_fine|
    bool noise_dominated = false;
};

struct MartingaleTestReport {
    std::string label;
    std::vector<std::string> functions;
    std::size_t J = 0;
    std::size_t M_used = 0;
    std::vector<MartingaleCell> cells;  // index k * J + j
    double max_abs_z = 0.0;
    std::size_t argmax_k = 0, argmax_j = 0;
    /// max |z| over the last increment only, reported apart from the verdict.
    double final_cell_max_abs_z = 0.0;
    double threshold = 0.0;
    double alpha = 0.01;
    bool pass = false;
    std::optional<BiasProbe> bias_probe;

    const MartingaleCell& cell(std::size_t j, std::size_t k) const { return cells[k * J + j]; }
};

/// Tests E[(P_{k+1} - P_k) psi_j(history_k)] = 0 for every (j, k). Zero-variance
/// cells get z = 0 when |mean| < 1e-14 and a signed infinity otherwise.
MartingaleTestReport martingale_test(const ProcessSample& p, const PathEnsemble& ens,
                                     const std::vector<TestFunction>& dictionary, double alpha = 0.01);
/// Same statistics computed on one thread.
MartingaleTestReport martingale_test_serial(const ProcessSample& p, const PathEnsemble& ens,
                                            const std::vector<TestFunction>& dictionary, double alpha = 0.01);

/// [A,B][n,k] = sum_{j<k} (A[n,j+1]-A[n,j]) (B[n,j+1]-B[n,j]), componentwise.
ProcessSample covariation(const ProcessSample& a, const ProcessSample& b);

/// Builds the process under test from a freshly simulated ensemble.
using EnsembleFactory = std::function<PathEnsemble(std::size_t steps, std::uint64_t seed)>;
using ProcessBuilder = std::function<ProcessSample(const PathEnsemble&)>;

/// Accumulated drift B_j = E[sum_k dP_k psi_j] at M and 2M on independent
/// ensembles. A discretization bias halves between the two; a genuine drift
/// does not. Components of vector processes are scanned as separate cells.
BiasProbe richardson_bias_probe(const EnsembleFactory& simulate, const ProcessBuilder& build,
                                const std::vector<TestFunction>& dictionary, std::size_t steps,
                                std::uint64_t seed_coarse, std::uint64_t seed_fine);

}  // namespace lagrangeflow
