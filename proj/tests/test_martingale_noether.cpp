#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "lagrangeflow/errors.hpp"
#include "lagrangeflow/martingale_lab.hpp"
#include "lagrangeflow/noether.hpp"
#include "lagrangeflow/reduce.hpp"
#include "lagrangeflow/parallel.hpp"

namespace lagrangeflow {
namespace {

ProcessSample from_positions(const PathEnsemble& ens, std::size_t d) {
    ProcessSample p(ens.grid(), ens.paths(), 1, "X");
    for (std::size_t n = 0; n < ens.paths(); ++n)
        for (std::size_t k = 0; k < ens.grid().points(); ++k) p.at(n, k) = ens.position(n, k)[d];
    return p;
}

ProcessSample deterministic(const PathEnsemble& ens, double slope) {
    ProcessSample p(ens.grid(), ens.paths(), 1, "t");
    for (std::size_t n = 0; n < ens.paths(); ++n)
        for (std::size_t k = 0; k < ens.grid().points(); ++k) p.at(n, k) = slope * ens.grid().t(k);
    return p;
}

// Two-sided critical value by bisection on the Gaussian tail.
double tail_quantile(double level) {
    double lo = 0.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (std::erfc(mid / std::sqrt(2.0)) > level ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// ============================================================================
// Martingale test
// ============================================================================

TEST(MartingaleTest, BonferroniMatchesBisection) {
    EXPECT_NEAR(bonferroni_threshold(0.01, 1), 2.5758293035489004, 1e-12);
    for (std::size_t cells : {6u, 1200u, 100000u}) {
        EXPECT_NEAR(bonferroni_threshold(0.01, cells), tail_quantile(0.01 / cells), 1e-9) << cells;
    }
    EXPECT_THROW(bonferroni_threshold(0.0, 3), ContractViolation);
}

TEST(MartingaleTest, CellsMatchNaiveOracle) {
    const auto ens = simulate_pu(make_taylor_green(), 500, 6, 2);
    const auto p = from_positions(ens, 1);
    const auto dict = default_test_dictionary();
    const auto rep = martingale_test(p, ens, dict, 0.01);
    ASSERT_EQ(rep.cells.size(), 6u * dict.size());
    for (std::size_t k = 0; k < 6; ++k) {
        for (std::size_t j = 0; j < dict.size(); ++j) {
            long double s = 0, s2 = 0;
            std::vector<long double> v(500);
            for (std::size_t n = 0; n < 500; ++n) {
                const Vec3& x = ens.position(n, k);
                const double psi = j == 0 ? 1.0 : j <= 3 ? x[j - 1] : j == 4 ? p(n, k) : std::min(dot(x, x), 10.0);
                v[n] = static_cast<long double>(p(n, k + 1) - p(n, k)) * psi;
                s += v[n];
            }
            const long double mean = s / 500;
            for (auto x : v) s2 += (x - mean) * (x - mean);
            const double se = std::sqrt(static_cast<double>(s2 / 499)) / std::sqrt(500.0);
            EXPECT_NEAR(rep.cell(j, k).statistic, static_cast<double>(mean), 1e-14);
            if (se == 0.0) {
                EXPECT_EQ(rep.cell(j, k).z, 0.0);
            } else {
                EXPECT_NEAR(rep.cell(j, k).z, static_cast<double>(mean) / se, 1e-9);
            }
        }
    }
}

TEST(MartingaleTest, BrownianComponentPasses) {
    const auto ens = simulate_wiener(20000, 50, 3);
    const auto rep = martingale_test(from_positions(ens, 0), ens, default_test_dictionary());
    EXPECT_TRUE(rep.pass) << rep.max_abs_z;
    EXPECT_EQ(rep.M_used, 50u);
    EXPECT_EQ(rep.J, 6u);
}

TEST(MartingaleTest, DeterministicDriftGetsInfiniteSentinel) {
    const auto ens = simulate_wiener(2000, 20, 3);
    const auto rep = martingale_test(deterministic(ens, 1.0), ens, default_test_dictionary());
    EXPECT_FALSE(rep.pass);
    EXPECT_EQ(rep.cell(0, 3).z, std::numeric_limits<double>::infinity());
    const auto down = martingale_test(deterministic(ens, -1.0), ens, default_test_dictionary());
    EXPECT_EQ(down.cell(0, 3).z, -std::numeric_limits<double>::infinity());
}

TEST(MartingaleTest, ConstantProcessHasZeroCells) {
    const auto ens = simulate_wiener(100, 10, 3);
    const auto rep = martingale_test(deterministic(ens, 0.0), ens, default_test_dictionary());
    EXPECT_TRUE(rep.pass);
    EXPECT_EQ(rep.max_abs_z, 0.0);
}

TEST(MartingaleTest, ProductOfIndependentIncrementsPasses) {
    const auto ens = simulate_wiener(20000, 40, 17);
    ProcessSample p(ens.grid(), ens.paths(), 1, "area");
    for (std::size_t n = 0; n < ens.paths(); ++n) {
        double acc = 0.0;
        p.at(n, 0) = 0.0;
        for (std::size_t k = 0; k < 40; ++k) {
            acc += ens.noise(n, k)[0] * ens.noise(n, k)[1];
            p.at(n, k + 1) = acc;
        }
    }
    EXPECT_TRUE(martingale_test(p, ens, default_test_dictionary()).pass);
}

TEST(MartingaleTest, SerialAndParallelAgreeBitwise) {
    const auto ens = simulate_pu(make_lamb_oseen(), 3000, 30, 1);
    const auto p = from_positions(ens, 0);
    const auto ref = martingale_test_serial(p, ens, default_test_dictionary());
    const ScopedWorkers scope(8);
    const auto par = martingale_test(p, ens, default_test_dictionary());
    ASSERT_EQ(ref.cells.size(), par.cells.size());
    for (std::size_t i = 0; i < ref.cells.size(); ++i) EXPECT_EQ(ref.cells[i].z, par.cells[i].z);
    EXPECT_EQ(ref.max_abs_z, par.max_abs_z);
}

TEST(MartingaleTest, FutureReadsAreRefused) {
    const auto ens = simulate_wiener(10, 5, 1);
    const std::vector<TestFunction> peek{{"peek", [](const History& h) { return h.position(h.now() + 1)[0]; }}};
    EXPECT_THROW(martingale_test_serial(from_positions(ens, 0), ens, peek), ContractViolation);
}

TEST(MartingaleTest, RejectsVectorProcess) {
    const auto fc = make_taylor_green();
    const auto ens = simulate_pu(fc, 10, 4, 1);
    EXPECT_THROW(martingale_test(drift_process(fc, ens), ens, default_test_dictionary()), ContractViolation);
}

TEST(MartingaleTest, FinalCellReportedSeparately) {
    const auto ens = simulate_wiener(200, 5, 3);
    auto p = deterministic(ens, 0.0);
    for (std::size_t n = 0; n < ens.paths(); ++n) p.at(n, 5) = 1.0;
    const auto rep = martingale_test(p, ens, default_test_dictionary());
    EXPECT_FALSE(rep.pass);
    EXPECT_EQ(rep.argmax_k, 4u);
    EXPECT_EQ(rep.final_cell_max_abs_z, std::numeric_limits<double>::infinity());
}

// ============================================================================
// Covariation
// ============================================================================

TEST(Covariation, SymmetricAndScalesBitwise) {
    const auto ens = simulate_wiener(300, 20, 5);
    const auto a = from_positions(ens, 0), b = from_positions(ens, 1);
    const auto ab = covariation(a, b), ba = covariation(b, a);
    ProcessSample a2(ens.grid(), ens.paths(), 1, "2a");
    for (std::size_t n = 0; n < ens.paths(); ++n)
        for (std::size_t k = 0; k <= 20; ++k) a2.at(n, k) = 2.0 * a(n, k);
    const auto a2b = covariation(a2, b);
    for (std::size_t n = 0; n < ens.paths(); ++n) {
        for (std::size_t k = 0; k <= 20; ++k) {
            EXPECT_EQ(ab(n, k), ba(n, k));
            EXPECT_EQ(a2b(n, k), 2.0 * ab(n, k));
        }
    }
}

TEST(Covariation, BilinearUpToRounding) {
    const auto ens = simulate_wiener(200, 10, 6);
    const auto a = from_positions(ens, 0), b = from_positions(ens, 1), c = from_positions(ens, 2);
    ProcessSample bc(ens.grid(), ens.paths(), 1, "b+c");
    for (std::size_t n = 0; n < ens.paths(); ++n)
        for (std::size_t k = 0; k <= 10; ++k) bc.at(n, k) = b(n, k) + c(n, k);
    const auto lhs = covariation(a, bc), ab = covariation(a, b), ac = covariation(a, c);
    for (std::size_t n = 0; n < ens.paths(); ++n) EXPECT_NEAR(lhs(n, 10), ab(n, 10) + ac(n, 10), 1e-14);
}

TEST(Covariation, BrownianBrackets) {
    const auto ens = simulate_wiener(20000, 50, 7);
    const auto a = from_positions(ens, 0), b = from_positions(ens, 1);
    const auto aa = covariation(a, a), ab = covariation(a, b), ta = covariation(deterministic(ens, 1.0), a);
    std::vector<double> qa(ens.paths()), qab(ens.paths()), qta(ens.paths());
    for (std::size_t n = 0; n < ens.paths(); ++n) {
        qa[n] = aa(n, 50);
        qab[n] = ab(n, 50);
        qta[n] = ta(n, 50);
    }
    const auto e_aa = estimate_mean(qa), e_ab = estimate_mean(qab), e_ta = estimate_mean(qta);
    EXPECT_NEAR(e_aa.value, 1.0, 3.0 * e_aa.std_error);
    EXPECT_NEAR(e_ab.value, 0.0, 3.0 * e_ab.std_error);
    EXPECT_LE(std::fabs(e_ta.value), 3.0 * e_ta.std_error + ens.grid().dt());
}

TEST(Covariation, GridMismatch) {
    const auto a = simulate_wiener(10, 4, 1), b = simulate_wiener(10, 8, 1);
    EXPECT_THROW(covariation(from_positions(a, 0), from_positions(b, 0)), ContractViolation);
}

// ============================================================================
// Richardson probe
// ============================================================================

TEST(BiasProbe, BrownianIsNoiseDominated) {
    const auto probe = richardson_bias_probe(
        [](std::size_t steps, std::uint64_t seed) { return simulate_wiener(5000, steps, seed); },
        [](const PathEnsemble& e) { return from_positions(e, 0); }, default_test_dictionary(), 20, 1, 2);
    EXPECT_TRUE(probe.noise_dominated);
    EXPECT_EQ(probe.steps_coarse, 20u);
}

TEST(BiasProbe, GenuineDriftDoesNotHalve) {
    const auto fc = make_frozen_taylor_green();
    const auto probe = richardson_bias_probe(
        [&](std::size_t steps, std::uint64_t seed) { return simulate_pu(fc, 20000, steps, seed); },
        [&](const PathEnsemble& e) { return el_process(fc, e); }, default_test_dictionary(), 50, 3, 4);
    EXPECT_FALSE(probe.noise_dominated);
    EXPECT_NEAR(probe.ratio, 1.0, 0.3);
}

// ============================================================================
// Noether processes
// ============================================================================

TEST(Noether, TranslationProcessIsThirdDriftComponent) {
    const auto fc = make_lamb_oseen();
    const auto ens = simulate_pu(fc, 50, 10, 1);
    const auto p = noether_process_general(fc, ens, GeneratorField::translation_e3());
    const auto v = drift_process(fc, ens);
    for (std::size_t n = 0; n < 50; ++n)
        for (std::size_t k = 0; k <= 10; ++k) EXPECT_EQ(p(n, k), v(n, k, 2));
}

TEST(Noether, RotationGeneralTracksClosedForm) {
    const auto fc = make_lamb_oseen();
    const auto ens = simulate_pu(fc, 4000, 100, 2);
    const auto gap = mean_sup_gap(noether_process_general(fc, ens, GeneratorField::rotation_e3()),
                                  noether_rotation_closed_form(fc, ens));
    EXPECT_LE(gap.sup, 5.0 / 100.0);
}

TEST(Noether, ClosedFormStartsAtPairing) {
    const auto fc = make_lamb_oseen();
    const auto ens = simulate_pu(fc, 20, 10, 3);
    const auto closed = noether_rotation_closed_form(fc, ens);
    const auto plain = noether_rotation_closed_form(fc, ens, false);
    const auto pairing = noether_process_general(fc, ens, GeneratorField::rotation_e3(), false);
    for (std::size_t n = 0; n < 20; ++n) {
        EXPECT_EQ(closed(n, 0), 0.0);
        for (std::size_t k = 0; k <= 10; ++k) EXPECT_NEAR(plain(n, k), pairing(n, k), 1e-15);
    }
}

TEST(Noether, RotationCompensatorIsNeeded) {
    const auto fc = make_lamb_oseen();
    const auto ens = simulate_pu(fc, 20000, 50, 4);
    const auto dict = default_test_dictionary();
    EXPECT_TRUE(martingale_test(noether_rotation_closed_form(fc, ens), ens, dict).pass);
    EXPECT_GE(martingale_test(noether_rotation_closed_form(fc, ens, false), ens, dict).max_abs_z, 5.0);
}

TEST(Noether, EulerLagrangeProcessStartsAtDrift) {
    const auto fc = make_taylor_green();
    const auto ens = simulate_pu(fc, 10, 8, 5);
    const auto el = el_process(fc, ens);
    const auto v = drift_process(fc, ens);
    ASSERT_EQ(el.dim(), 3u);
    for (std::size_t n = 0; n < 10; ++n)
        for (std::size_t d = 0; d < 3; ++d) EXPECT_EQ(el(n, 0, d), v(n, 0, d));
}

TEST(Noether, KappaOfRigidMotionsVanishes) {
    const Vec3 x{0.3, -1.2, 2.0};
    EXPECT_EQ(kappa(GeneratorField::translation_e3(), 0.2, x), Mat3{});
    EXPECT_EQ(kappa(GeneratorField::rotation_e3(), 0.2, x), Mat3{});
    const GeneratorField stretch{"stretch", [](double, const Vec3& y) { return Vec3{y[0], 0.0, 0.0}; },
                                 [](double, const Vec3&) {
                                     Mat3 m;
                                     m(0, 0) = 1.0;
                                     return m;
                                 }};
    EXPECT_EQ(kappa(stretch, 0.0, x)(0, 0), 2.0);
}

TEST(Noether, GeneratorLookup) {
    EXPECT_EQ(make_generator("rotation_e3").name, "rotation_e3");
    EXPECT_THROW(make_generator("boost_e1"), UnknownName);
}

// ============================================================================
// Symmetry checks
// ============================================================================

TEST(SymmetryCheck, Verdicts) {
    EXPECT_LE(symmetry_check(make_lamb_oseen(), Symmetry::rotation_e3).max_violation(), 1e-12);
    EXPECT_LE(symmetry_check(make_taylor_green(), Symmetry::translation_e3).max_violation(), 0.0);
    EXPECT_GE(symmetry_check(make_taylor_green(), Symmetry::rotation_e3).max_pressure_violation, 0.1);
    EXPECT_GE(symmetry_check(make_taylor_green_xz(), Symmetry::translation_e3).max_violation(), 0.1);
    EXPECT_THROW(symmetry_check(make_taylor_green(), "scaling"), UnknownName);
}

}  // namespace
}  // namespace lagrangeflow
