#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "lagrangeflow/ensemble_io.hpp"
#include "lagrangeflow/errors.hpp"
#include "lagrangeflow/parallel.hpp"
#include "lagrangeflow/reduce.hpp"
#include "lagrangeflow/rng.hpp"
#include "lagrangeflow/sde_engine.hpp"

namespace lagrangeflow {
namespace {

bool same_bits(const PathEnsemble& a, const PathEnsemble& b) {
    if (a.paths() != b.paths() || !(a.grid() == b.grid()) || a.tag() != b.tag()) return false;
    for (std::size_t i = 0; i < a.positions().size(); ++i) {
        if (a.positions()[i] != b.positions()[i]) return false;
    }
    for (std::size_t i = 0; i < a.noise().size(); ++i) {
        if (a.noise()[i] != b.noise()[i]) return false;
    }
    return true;
}

// ============================================================================
// Philox known answers
// ============================================================================

TEST(Philox, KnownAnswerZero) {
    const PhiloxCounter want{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8};
    EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}), want);
}

TEST(Philox, KnownAnswerAllOnes) {
    const PhiloxCounter want{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd};
    EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}), want);
}

TEST(Philox, KnownAnswerPiDigits) {
    const PhiloxCounter want{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1};
    EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}), want);
}

TEST(Philox, UniformNeverZero) {
    EXPECT_GT(uniform_open_closed(0), 0.0);
    EXPECT_EQ(uniform_open_closed(~std::uint64_t{0}), 1.0);
}

TEST(Philox, GaussianTripleIsAddressable) {
    EXPECT_EQ(gaussian_triple(7, 3, 11), gaussian_triple(7, 3, 11));
    EXPECT_NE(gaussian_triple(7, 3, 11), gaussian_triple(7, 3, 12));
    EXPECT_NE(gaussian_triple(7, 3, 11), gaussian_triple(8, 3, 11));
    EXPECT_NE(gaussian_triple(7, 3, 11), gaussian_triple(7, 4, 11));
}

TEST(Philox, GaussianMoments) {
    const int n = 200000;
    double s1 = 0, s2 = 0, s4 = 0;
    for (int i = 0; i < n; ++i) {
        const Vec3 g = gaussian_triple(1, static_cast<std::uint64_t>(i), 0);
        for (int d = 0; d < 3; ++d) {
            s1 += g[d];
            s2 += g[d] * g[d];
            s4 += g[d] * g[d] * g[d] * g[d];
        }
    }
    const double m = 3.0 * n;
    EXPECT_NEAR(s1 / m, 0.0, 4.0 / std::sqrt(m));
    EXPECT_NEAR(s2 / m, 1.0, 4.0 * std::sqrt(2.0 / m));
    EXPECT_NEAR(s4 / m, 3.0, 4.0 * std::sqrt(96.0 / m));
}

// ============================================================================
// Deterministic reduction
// ============================================================================

TEST(Reduce, TreeSumIndependentOfWorkers) {
    std::vector<double> xs(100003);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = std::sin(static_cast<double>(i)) * 1e3 + 1e-7;
    const double serial = tree_sum_serial(xs);
    for (int w : {1, 2, 3, 8}) {
        const ScopedWorkers scope(w);
        EXPECT_EQ(tree_sum(xs), serial);
    }
}

TEST(Reduce, EstimateMatchesLongDoubleOracle) {
    std::vector<double> xs(5000);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = std::cos(0.37 * static_cast<double>(i)) + 2.0;
    long double s = 0, s2 = 0;
    for (double x : xs) s += x;
    const long double mean = s / xs.size();
    for (double x : xs) s2 += (x - mean) * (x - mean);
    const double se = std::sqrt(static_cast<double>(s2 / (xs.size() - 1))) / std::sqrt(5000.0);
    const auto e = estimate_mean(xs);
    EXPECT_NEAR(e.value, static_cast<double>(mean), 1e-13);
    EXPECT_NEAR(e.std_error, se, 1e-15);
    EXPECT_EQ(e.n_samples, 5000u);
    const auto s_ref = estimate_mean_serial(xs);
    EXPECT_EQ(e.value, s_ref.value);
    EXPECT_EQ(e.std_error, s_ref.std_error);
}

TEST(Reduce, SmallInputs) {
    EXPECT_EQ(tree_sum(std::vector<double>{}), 0.0);
    const auto one = estimate_mean(std::vector<double>{4.0});
    EXPECT_EQ(one.value, 4.0);
    EXPECT_EQ(one.std_error, 0.0);
}

// ============================================================================
// Simulation
// ============================================================================

TEST(Simulate, ZeroFlowIsBrownianMotion) {
    const auto ens = simulate_pu(make_zero_flow(), 20000, 10, 3);
    for (std::size_t n = 0; n < 50; ++n) {
        Vec3 x{};
        for (std::size_t k = 0; k < 10; ++k) {
            x += ens.noise(n, k);
            EXPECT_EQ(ens.position(n, k + 1), x);
        }
    }
    double c[3][3] = {};
    for (std::size_t n = 0; n < ens.paths(); ++n) {
        const Vec3& x = ens.position(n, 10);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) c[i][j] += x[i] * x[j];
    }
    const double tol = 3.0 * std::sqrt(2.0 / 20000.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(c[i][j] / 20000.0, i == j ? 1.0 : 0.0, tol);
}

TEST(Simulate, WienerHalfTimeVariance) {
    const auto ens = simulate_wiener(40000, 20, 5);
    std::vector<double> sq(ens.paths());
    for (std::size_t n = 0; n < ens.paths(); ++n) sq[n] = ens.position(n, 10)[0] * ens.position(n, 10)[0];
    const auto e = estimate_mean(sq);
    EXPECT_NEAR(e.value, 0.5, 3.0 * e.std_error);
    EXPECT_EQ(ens.tag().kind, MeasureTag::Kind::wiener);
}

TEST(Simulate, DriftFollowsReversedVelocity) {
    const auto fc = make_taylor_green();
    const auto ens = simulate_pu(fc, 4, 8, 1);
    const double dt = ens.grid().dt();
    for (std::size_t n = 0; n < 4; ++n) {
        for (std::size_t k = 0; k < 8; ++k) {
            const Vec3& x = ens.position(n, k);
            Vec3 want = x;
            want += fc.velocity->eval(1.0 - ens.grid().t(k), x) * (-dt);
            want += ens.noise(n, k);
            EXPECT_EQ(ens.position(n, k + 1), want);
        }
    }
    EXPECT_EQ(ens.tag(), MeasureTag::pu("taylor_green"));
}

TEST(Simulate, ParallelMatchesSerialReference) {
    const auto fc = make_lamb_oseen();
    const auto ref = reference::simulate_pu(fc, 300, 30, 11);
    for (int w : {1, 8}) {
        const ScopedWorkers scope(w);
        EXPECT_TRUE(same_bits(simulate_pu(fc, 300, 30, 11), ref));
    }
    EXPECT_TRUE(same_bits(simulate_wiener(300, 30, 11, 2), reference::simulate_wiener(300, 30, 11, 2)));
}

TEST(Simulate, RefinementSharesBrownianPath) {
    const auto fine = simulate_wiener(50, 20, 9);
    const auto coarse = simulate_wiener(50, 10, 9, 2);
    for (std::size_t n = 0; n < 50; ++n) {
        for (std::size_t k = 0; k <= 10; ++k) {
            const Vec3 d = coarse.position(n, k) - fine.position(n, 2 * k);
            EXPECT_LE(max_abs(d), 1e-14);
        }
    }
}

TEST(Simulate, WeakErrorIsFirstOrder) {
    const auto fc = make_taylor_green();
    auto second_moment = [&](std::size_t steps, std::size_t refine) {
        const auto ens = simulate_pu(fc, 40000, steps, 21, refine);
        std::vector<double> v(ens.paths());
        for (std::size_t n = 0; n < ens.paths(); ++n) v[n] = dot(ens.position(n, steps), ens.position(n, steps));
        return v;
    };
    const auto m100 = second_moment(100, 4), m200 = second_moment(200, 2), m400 = second_moment(400, 1);
    std::vector<double> d1(m100.size()), d2(m100.size());
    for (std::size_t n = 0; n < m100.size(); ++n) {
        d1[n] = m100[n] - m200[n];
        d2[n] = m200[n] - m400[n];
    }
    const auto e1 = estimate_mean(d1), e2 = estimate_mean(d2);
    ASSERT_GT(std::fabs(e2.value), 3.0 * e2.std_error);
    const double ratio = e1.value / e2.value;
    EXPECT_GE(ratio, 1.5);
    EXPECT_LE(ratio, 3.0);
}

TEST(Simulate, RejectsBadSizes) {
    EXPECT_THROW(simulate_wiener(0, 10, 1), ContractViolation);
    EXPECT_THROW(simulate_wiener(10, 1, 1), ContractViolation);
    EXPECT_THROW(simulate_wiener(10, 10, 1, 0), ContractViolation);
}

TEST(Simulate, CapacityErrorBeforeAllocation) {
    EXPECT_THROW(check_capacity(std::size_t{1} << 62, 64), CapacityError);
    EXPECT_THROW(simulate_wiener(1'000'000'000, 1'000'000, 1), CapacityError);
    EXPECT_NO_THROW(check_capacity(1000, 24));
}

TEST(Simulate, MeasureTagGuards) {
    const auto w = simulate_wiener(10, 4, 1);
    EXPECT_THROW(require_pu(make_taylor_green(), w, "test"), ContractViolation);
    const auto p = simulate_pu(make_taylor_green(), 10, 4, 1);
    EXPECT_THROW(require_wiener(p, "test"), ContractViolation);
    EXPECT_THROW(require_pu(make_lamb_oseen(), p, "test"), ContractViolation);
    EXPECT_NO_THROW(require_pu(make_taylor_green(), p, "test"));
}

TEST(Simulate, ProcessSampleValidatesBuffer) {
    EXPECT_THROW(ProcessSample(TimeGrid(4), 3, 1, "x", std::vector<double>(7)), ContractViolation);
    const ProcessSample p(TimeGrid(4), 3, 2, "x", std::vector<double>(30, 1.5));
    EXPECT_EQ(component(p, 1)(2, 4), 1.5);
    EXPECT_THROW(component(p, 2), ContractViolation);
}

// ============================================================================
// Binary layout
// ============================================================================

TEST(EnsembleIo, RoundTripKeepsBitsAndTag) {
    const auto ens = simulate_pu(make_lamb_oseen(), 17, 9, 4);
    std::stringstream buf;
    write_ensemble(buf, ens);
    EXPECT_EQ(buf.str().size(), 4 + 4 * 8 + (17 * 10 + 17 * 9) * 3 * 8u);
    EXPECT_EQ(buf.str().substr(0, 4), "LGF1");
    const auto back = read_ensemble(buf);
    EXPECT_TRUE(same_bits(ens, back));
    EXPECT_EQ(back.seed(), 4u);
    EXPECT_EQ(measure_tag_code(MeasureTag::wiener()), 0u);
}

TEST(EnsembleIo, RejectsMalformedInput) {
    std::stringstream bad("LGF2xxxxxxxx");
    EXPECT_THROW(read_ensemble(bad), std::runtime_error);

    const auto ens = simulate_wiener(3, 4, 1);
    std::stringstream buf;
    write_ensemble(buf, ens);
    std::string truncated = buf.str();
    truncated.resize(truncated.size() - 8);
    std::stringstream cut(truncated);
    EXPECT_THROW(read_ensemble(cut), std::runtime_error);
}

TEST(EnsembleIo, UnknownTagIsReported) {
    const auto ens = simulate_wiener(2, 2, 1);
    std::stringstream buf;
    write_ensemble(buf, ens);
    std::string bytes = buf.str();
    bytes[4 + 16] = '\x5a';
    std::stringstream in(bytes);
    EXPECT_THROW(read_ensemble(in), UnknownName);
}

TEST(EnsembleIo, ProcessCsvMean) {
    const ProcessSample p(TimeGrid(2), 2, 1, "x", {0.0, 1.0, 2.0, 0.0, 3.0, 4.0});
    std::ostringstream os;
    write_process_csv(os, p, false);
    EXPECT_EQ(os.str(), "t,mean_0\n0,0\n0.5,2\n1,3\n");
}

}  // namespace
}  // namespace lagrangeflow
