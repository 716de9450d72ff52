#include "lagrangeflow/martingale_lab.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "lagrangeflow/errors.hpp"
#include "lagrangeflow/parallel.hpp"
#include "lagrangeflow/reduce.hpp"

namespace lagrangeflow {

const Vec3& History::position(std::size_t j) const {
    if (j > k_) throw ContractViolation("test function read the future of a path");
    return ens_.position(n_, j);
}

double History::process(std::size_t j) const {
    if (j > k_) throw ContractViolation("test function read the future of a process");
    return proc_(n_, j);
}

std::vector<TestFunction> default_test_dictionary() {
    return {
        {"1", [](const History&) { return 1.0; }},
        {"X1", [](const History& h) { return h.position()[0]; }},
        {"X2", [](const History& h) { return h.position()[1]; }},
        {"X3", [](const History& h) { return h.position()[2]; }},
        {"P", [](const History& h) { return h.process(); }},
        {"clip|X|^2", [](const History& h) { return std::min(dot(h.position(), h.position()), 10.0); }},
    };
}

double bonferroni_threshold(double alpha, std::size_t cells) {
    if (!(alpha > 0.0 && alpha < 1.0) || cells == 0) throw ContractViolation("bonferroni_threshold: bad arguments");
    const boost::math::normal_distribution<double> gauss;
    return boost::math::quantile(boost::math::complement(gauss, alpha / (2.0 * static_cast<double>(cells))));
}

namespace {

double cell_z(double mean, double se) {
    if (se > 0.0) return mean / se;
    if (std::fabs(mean) < 1e-14) return 0.0;
    return std::copysign(std::numeric_limits<double>::infinity(), mean);
}

void require_compatible(const ProcessSample& p, const PathEnsemble& ens) {
    if (!(p.grid() == ens.grid()) || p.paths() != ens.paths()) {
        throw ContractViolation("process " + p.label() + " does not live on this ensemble");
    }
}

MartingaleTestReport run_test(const ProcessSample& p, const PathEnsemble& ens,
                              const std::vector<TestFunction>& dictionary, double alpha, bool parallel) {
    require_compatible(p, ens);
    if (p.dim() != 1) throw ContractViolation("martingale_test: process must be scalar; test components separately");
    if (dictionary.empty()) throw ContractViolation("martingale_test: empty dictionary");

    MartingaleTestReport rep;
    rep.label = p.label();
    rep.alpha = alpha;
    rep.J = dictionary.size();
    rep.M_used = p.grid().steps();
    for (const auto& f : dictionary) rep.functions.push_back(f.name);
    rep.threshold = bonferroni_threshold(alpha, rep.J * rep.M_used);
    rep.cells.resize(rep.J * rep.M_used);

    const std::size_t paths = p.paths();
    const std::size_t J = rep.J;
    const auto steps = static_cast<long long>(rep.M_used);
    ExceptionRelay relay;
#pragma omp parallel if (parallel)
    {
        std::vector<std::vector<double>> prod(J, std::vector<double>(paths));
#pragma omp for schedule(static)
        for (long long kk = 0; kk < steps; ++kk) {
            relay.run([&] {
                const auto k = static_cast<std::size_t>(kk);
                for (std::size_t n = 0; n < paths; ++n) {
                    const History h(ens, p, n, k);
                    const double dp = p(n, k + 1) - p(n, k);
                    for (std::size_t j = 0; j < J; ++j) prod[j][n] = dp * dictionary[j].eval(h);
                }
                for (std::size_t j = 0; j < J; ++j) {
                    const auto e = estimate_mean_serial(prod[j]);
                    rep.cells[k * J + j] = {e.value, e.std_error, cell_z(e.value, e.std_error)};
                }
            });
        }
    }
    relay.rethrow();

    for (std::size_t k = 0; k < rep.M_used; ++k) {
        for (std::size_t j = 0; j < J; ++j) {
            const double az = std::fabs(rep.cells[k * J + j].z);
            if (az > rep.max_abs_z) {
                rep.max_abs_z = az;
                rep.argmax_k = k;
                rep.argmax_j = j;
            }
            if (k + 1 == rep.M_used) rep.final_cell_max_abs_z = std::max(rep.final_cell_max_abs_z, az);
        }
    }
    rep.pass = rep.max_abs_z < rep.threshold;
    return rep;
}

struct Accumulated {
    std::string cell;
    EstimateWithError est;
};

std::vector<Accumulated> accumulated_drifts(const ProcessSample& p, const PathEnsemble& ens,
                                            const std::vector<TestFunction>& dictionary) {
    std::vector<Accumulated> out;
    for (std::size_t d = 0; d < p.dim(); ++d) {
        const ProcessSample pd = p.dim() == 1 ? p : component(p, d);
        for (const auto& f : dictionary) {
            std::vector<double> sums(p.paths());
            const auto np = static_cast<long long>(p.paths());
            ExceptionRelay relay;
#pragma omp parallel for schedule(static)
            for (long long i = 0; i < np; ++i) {
                relay.run([&] {
                    const auto n = static_cast<std::size_t>(i);
                    double s = 0.0;
                    for (std::size_t k = 0; k < p.grid().steps(); ++k) {
                        s += (pd(n, k + 1) - pd(n, k)) * f.eval(History(ens, pd, n, k));
                    }
                    sums[n] = s;
                });
            }
            relay.rethrow();
            out.push_back({"component " + std::to_string(d) + " / " + f.name, estimate_mean(sums)});
        }
    }
    return out;
}

}  // namespace

MartingaleTestReport martingale_test(const ProcessSample& p, const PathEnsemble& ens,
                                     const std::vector<TestFunction>& dictionary, double alpha) {
    return run_test(p, ens, dictionary, alpha, true);
}

MartingaleTestReport martingale_test_serial(const ProcessSample& p, const PathEnsemble& ens,
                                            const std::vector<TestFunction>& dictionary, double alpha) {
    return run_test(p, ens, dictionary, alpha, false);
}

ProcessSample covariation(const ProcessSample& a, const ProcessSample& b) {
    if (!(a.grid() == b.grid()) || a.paths() != b.paths() || a.dim() != b.dim()) {
        throw ContractViolation("covariation: processes live on different grids");
    }
    ProcessSample out(a.grid(), a.paths(), a.dim(), "[" + a.label() + "," + b.label() + "]");
    const std::size_t dim = a.dim();
    const auto np = static_cast<long long>(a.paths());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < np; ++i) {
        const auto n = static_cast<std::size_t>(i);
        for (std::size_t d = 0; d < dim; ++d) {
            double acc = 0.0;
            out.at(n, 0, d) = 0.0;
            for (std::size_t k = 0; k < a.grid().steps(); ++k) {
                acc += (a(n, k + 1, d) - a(n, k, d)) * (b(n, k + 1, d) - b(n, k, d));
                out.at(n, k + 1, d) = acc;
            }
        }
    }
    return out;
}

BiasProbe richardson_bias_probe(const EnsembleFactory& simulate, const ProcessBuilder& build,
                                const std::vector<TestFunction>& dictionary, std::size_t steps,
                                std::uint64_t seed_coarse, std::uint64_t seed_fine) {
    BiasProbe probe;
    probe.steps_coarse = steps;

    std::vector<Accumulated> coarse, fine;
    {
        const auto ens = simulate(steps, seed_coarse);
        coarse = accumulated_drifts(build(ens), ens, dictionary);
    }
    {
        const auto ens = simulate(2 * steps, seed_fine);
        fine = accumulated_drifts(build(ens), ens, dictionary);
    }

    std::size_t best = 0;
    double best_z = -1.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        const double z = std::fabs(cell_z(coarse[i].est.value, coarse[i].est.std_error));
        if (z > best_z) {
            best_z = z;
            best = i;
        }
    }
    probe.cell = coarse[best].cell;
    probe.bias_coarse = coarse[best].est.value;
    probe.se_coarse = coarse[best].est.std_error;
    probe.bias_fine = fine[best].est.value;
    probe.se_fine = fine[best].est.std_error;
    probe.ratio = std::fabs(probe.bias_fine) > 0.0 ? std::fabs(probe.bias_coarse) / std::fabs(probe.bias_fine)
                                                    : std::numeric_limits<double>::infinity();
    probe.noise_dominated = std::fabs(probe.bias_coarse) <= 3.0 * probe.se_coarse ||
                            std::fabs(probe.bias_fine) <= 3.0 * probe.se_fine;
    return probe;
}

}  // namespace lagrangeflow
