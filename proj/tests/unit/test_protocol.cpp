#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fixtures.hpp"
#include "scmra/analytics.hpp"
#include "scmra/channel.hpp"
#include "scmra/error.hpp"
#include "scmra/protocol.hpp"
#include "scmra/units.hpp"

using namespace scmra;
using cd = std::complex<double>;

namespace {

ProtocolThresholds table_thresholds() { return ProtocolThresholds::from_db(30.0, 5.0, 5.0, -5.0, 10.0); }

ScoutingState scout_on(const ComplexVector& x0) {
    ScoutingState s;
    s.x0 = x0;
    s.needs_reinit = false;
    return s;
}

CommTaskState task_on(const ComplexVector& b, TaskId id) {
    CommTaskState t;
    t.id = id;
    t.b = b;
    return t;
}

}  // namespace

TEST(Thresholds, FromDb) {
    const auto t = table_thresholds();
    EXPECT_NEAR(t.gamma_dec, 1000.0, 1e-9);
    EXPECT_NEAR(t.gamma_drop, std::sqrt(10.0), 1e-12);
    EXPECT_NEAR(t.p_tx, std::pow(10.0, -0.5) * 1e-3, 1e-18);
    EXPECT_NEAR(t.p_scout, std::pow(10.0, 0.5) * 1e-3, 1e-18);
    EXPECT_NO_THROW(validate(t));
    auto bad = t;
    bad.gamma_drop = 2000.0;
    EXPECT_THROW(validate(bad), Error);
}

TEST(ComposeTransmit, ScoutOnly) {
    ProtocolThresholds t;
    t.p_scout = 10.0;
    const auto x = compose_transmit(scout_on(ComplexVector::Unit(3, 0)), {}, t);
    EXPECT_NEAR(x.squaredNorm(), 10.0, 1e-12);
}

TEST(ComposeTransmit, PowersAddOnOrthogonalBeams) {
    ProtocolThresholds t;
    t.p_tx = 1.0;
    t.p_scout = 10.0;
    const std::vector<CommTaskState> tasks{task_on(ComplexVector::Unit(3, 0), 1), task_on(ComplexVector::Unit(3, 1), 2)};
    EXPECT_NEAR(compose_transmit(scout_on(ComplexVector::Unit(3, 2)), tasks, t).squaredNorm(), 12.0, 1e-12);
}

TEST(ComposeTransmit, ReferencePowersWithThreeTasks) {
    const auto t = table_thresholds();
    RandomStream rng(2);
    const ComplexMatrix q = fixture::random_orthonormal(16, 4, rng);
    std::vector<CommTaskState> tasks;
    for (int i = 0; i < 3; ++i) tasks.push_back(task_on(q.col(i), i));
    const double expected = std::pow(10.0, 0.5) * 1e-3 + 3 * std::pow(10.0, -0.5) * 1e-3;
    EXPECT_NEAR(compose_transmit(scout_on(q.col(3)), tasks, t).squaredNorm(), expected, 1e-12 * expected);
}

TEST(Orthogonalize, EmptyDatabaseIsIdentity) {
    SharedDatabase db(4);
    RandomStream rng(1);
    const ComplexVector y = rng.complex_normal_vector(4);
    EXPECT_EQ(orthogonalize(y, db), y);
}

TEST(Orthogonalize, CoordinateProjection) {
    SharedDatabase db(2);
    db.add(ComplexVector::Unit(2, 0), 1);
    ComplexVector y(2);
    y << cd(3, 0), cd(0, 4);
    const auto out = orthogonalize(y, db);
    EXPECT_LT(std::abs(out(0)), 1e-15);
    EXPECT_LT(std::abs(out(1) - cd(0, 4)), 1e-15);
}

TEST(Orthogonalize, PythagorasOnRandomDatabase) {
    RandomStream rng(7);
    const ComplexMatrix q = fixture::random_orthonormal(64, 5, rng);
    SharedDatabase db(64);
    for (int i = 0; i < 5; ++i) db.add(q.col(i), i);
    const ComplexVector y = rng.complex_normal_vector(64);
    const auto out = orthogonalize(y, db);
    for (const auto& b : db.vectors()) EXPECT_LT(std::abs(b.dot(out)), 1e-12 * y.norm());
    EXPECT_NEAR(out.squaredNorm() + (y - out).squaredNorm(), y.squaredNorm(), 1e-10 * y.squaredNorm());
}

TEST(ScoutingUpdate, RankOneConvergesInOneStep) {
    RandomStream rng(3);
    const ComplexMatrix v = fixture::random_orthonormal(16, 1, rng);
    const ComplexMatrix a = 5.0 * v * v.adjoint();
    const auto x0 = random_unit_vector(rng, 16);
    // y = (A x0)^*: what the BS receives through a conjugating reflector.
    const ComplexVector y = (a * x0).conjugate();
    SharedDatabase db(16);
    const auto upd = scouting_update(scout_on(x0), y, db, 1.0);
    EXPECT_NEAR(std::abs(upd.state.x0.dot(v.col(0))), 1.0, 1e-12);
    EXPECT_NEAR(upd.gamma, (a * x0).squaredNorm(), 1e-12);
    EXPECT_EQ(upd.state.gamma_prev, upd.gamma);
}

TEST(ScoutingUpdate, RankTwoPowerIteration) {
    RandomStream rng(4);
    const ComplexMatrix v = fixture::random_orthonormal(32, 2, rng);
    const double eig[] = {2.0, 1.0};
    const auto h = channel_from_eigenpairs(v, eig, 100.0);
    const auto run = fixture::scouting_loop(h, 100.0, 1.0, 0.0, 0.0, 1.0, 20, rng);
    const auto oracle = hermitian_eigendecomposition(modified_round_trip(h.dense(), 100.0).a);
    EXPECT_GT(std::abs(run.beams.back().dot(oracle.eigenvectors.col(0))), 1.0 - 1e-6);
}

TEST(ScoutingUpdate, PowerMethodRate) {
    // tan^2 of the beam error shrinks at least like (lambda2/lambda1)^(2k)
    RandomStream rng(6);
    const ComplexMatrix v = fixture::random_orthonormal(24, 3, rng);
    const double eig[] = {1.0, 0.7, 0.3};
    const auto h = channel_from_eigenpairs(v, eig, 100.0);
    const auto run = fixture::scouting_loop(h, 100.0, 1.0, 0.0, 0.0, 1.0, 30, rng);
    auto tan2 = [&](int k) {
        const double c2 = std::norm(run.beams[k].dot(v.col(0)));
        return (1.0 - c2) / c2;
    };
    for (int k = 1; k < 30; ++k) EXPECT_LE(tan2(k), 1.0001 * tan2(0) * std::pow(0.49, k) + 1e-20) << k;
    EXPECT_LT(tan2(29), 1e-8);
}

TEST(ScoutingUpdate, ResultStaysOrthogonalToDatabase) {
    RandomStream rng(8);
    const ComplexMatrix q = fixture::random_orthonormal(20, 4, rng);
    SharedDatabase db(20);
    for (int i = 0; i < 4; ++i) db.add(q.col(i), i);
    const auto upd = scouting_update(scout_on(random_unit_vector(rng, 20, db.vectors())),
                                     rng.complex_normal_vector(20), db, 1.0);
    for (const auto& b : db.vectors()) EXPECT_LT(std::abs(b.dot(upd.state.x0)), 1e-14);
}

TEST(ScoutingUpdate, EmptySubspaceKeepsBeamAndReportsZero) {
    SharedDatabase db(2);
    db.add(ComplexVector::Unit(2, 0), 1);
    const auto s = scout_on(ComplexVector::Unit(2, 1));
    const auto upd = scouting_update(s, 3.0 * ComplexVector::Unit(2, 0), db, 1.0);
    EXPECT_EQ(upd.gamma, 0.0);
    EXPECT_EQ(upd.state.x0, s.x0);
    EXPECT_EQ(upd.state.gamma_prev, 0.0);
}

TEST(DetectionRule, ReferenceThresholds) {
    const auto t = table_thresholds();
    EXPECT_TRUE(detection_rule(db_to_linear(35), db_to_linear(34), t));
    EXPECT_FALSE(detection_rule(db_to_linear(35), db_to_linear(20), t));
    EXPECT_FALSE(detection_rule(db_to_linear(20), db_to_linear(19.9), t));
    EXPECT_FALSE(detection_rule(db_to_linear(35), 0.0, t));
}

TEST(CommCorrelate, ConjugatesReceivedVector) {
    ComplexVector y(2);
    y << std::polar(2.0, -std::numbers::pi / 3), cd(5, 0);
    const auto u = comm_correlate(ComplexVector::Unit(2, 0), y);
    EXPECT_LT(std::abs(u - std::polar(2.0, std::numbers::pi / 3)), 1e-15);
}

TEST(CommCorrelate, SingleUserSignalModel) {
    RandomStream rng(10);
    const ComplexMatrix v = fixture::random_orthonormal(16, 2, rng);
    const double lambda = 4.0, p = 0.25, phi = 2.0;
    const ComplexMatrix a = lambda * v.col(0) * v.col(0).adjoint();
    // y = e^{j phi} (A x)^*, x = sqrt(P) v1
    const ComplexVector y = std::polar(1.0, phi) * (a * (std::sqrt(p) * v.col(0))).conjugate();
    const auto u = comm_correlate(v.col(0), y);
    EXPECT_LT(std::abs(u - std::sqrt(p) * lambda * std::polar(1.0, -phi)), 1e-14);
    EXPECT_LT(std::abs(comm_correlate(v.col(1), y)), 1e-14);
}

TEST(BpskDemodulate, Decisions) {
    EXPECT_EQ(bpsk_demodulate(cd(3, 0.1)), 0);
    EXPECT_EQ(bpsk_demodulate(cd(-2, -1)), 1);
    EXPECT_EQ(bpsk_demodulate(2.0 * std::polar(1.0, -std::numbers::pi)), 1);
    EXPECT_EQ(bpsk_demodulate(cd(0, 0)), 0);
}

TEST(DropRule, Threshold) {
    const auto t = table_thresholds();
    EXPECT_TRUE(drop_rule(std::sqrt(db_to_linear(4.0)), 1.0, t));
    EXPECT_FALSE(drop_rule(std::sqrt(db_to_linear(20.0)), 1.0, t));
    EXPECT_TRUE(drop_rule(cd(0, 0), 1.0, t));
}

TEST(SharedDatabase, AddRemove) {
    SharedDatabase db(4);
    db = db_add(db, ComplexVector::Unit(4, 0), 7);
    EXPECT_EQ(db.size(), 1u);
    EXPECT_TRUE(db.contains(7));
    db = db_remove(db, 7);
    EXPECT_TRUE(db.empty());
    EXPECT_THROW(db_remove(db, 7), Error);
}

TEST(SharedDatabase, ReorthonormalizesNearlyOrthogonalVector) {
    SharedDatabase db(8);
    RandomStream rng(2);
    const ComplexVector b1 = random_unit_vector(rng, 8);
    db.add(b1, 1);
    ComplexVector b = random_unit_vector(rng, 8, db.vectors());
    b = (b + 1e-7 * b1).normalized();
    ASSERT_GT(std::abs(b1.dot(b)), 0.5e-7);
    const auto& stored = db.add(b, 2);
    EXPECT_LT(std::abs(b1.dot(stored)), 1e-10);
    EXPECT_NEAR(stored.norm(), 1.0, 1e-12);
    EXPECT_LT(db.max_cross_correlation(), 1e-10);
}

TEST(SharedDatabase, CapacityIsNMinusOne) {
    SharedDatabase db(3);
    db.add(ComplexVector::Unit(3, 0), 1);
    db.add(ComplexVector::Unit(3, 1), 2);
    try {
        db.add(ComplexVector::Unit(3, 2), 3);
        FAIL() << "expected throw";
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "subspace exhausted");
    }
}

namespace {

ProtocolThresholds unit_thresholds() {
    ProtocolThresholds t;
    t.gamma_dec = 100.0;
    t.gamma_drop = 2.0;
    t.gamma_delta = 3.0;
    t.p_tx = 1.0;
    t.p_scout = 10.0;
    return t;
}

}  // namespace

TEST(BaseStation, DetectThenDropSetsReinitEachTime) {
    BaseStation bs(4, unit_thresholds(), 1.0, RandomStream(1));
    const ComplexVector y = 20.0 * ComplexVector::Unit(4, 0);

    bs.transmit();
    auto r = bs.receive(y, 0);
    EXPECT_FALSE(r.detected);  // first sample after reinit never detects
    bs.transmit();
    r = bs.receive(y, 1);
    ASSERT_TRUE(r.detected);
    EXPECT_TRUE(bs.scouting().needs_reinit);
    ASSERT_EQ(bs.tasks().size(), 1u);
    EXPECT_EQ(bs.tasks()[0].start_symbol, 1);
    EXPECT_EQ(bs.tasks()[0].first_bit_symbol, 2);
    EXPECT_NEAR(std::abs(bs.tasks()[0].b(0)), 1.0, 1e-14);

    const auto x = bs.transmit();
    EXPECT_FALSE(bs.scouting().needs_reinit);
    EXPECT_LT(std::abs(bs.scouting().x0(0)), 1e-14);  // new scout beam avoids the task
    EXPECT_NEAR(x.squaredNorm(), 11.0, 1e-12);

    r = bs.receive(-y, 2);  // phase pi on the task's direction
    ASSERT_EQ(r.samples.size(), 1u);
    EXPECT_EQ(r.samples[0].bit, 1);

    bs.transmit();
    r = bs.receive(ComplexVector::Zero(4), 3);
    ASSERT_EQ(r.retired.size(), 1u);
    EXPECT_TRUE(bs.database().empty());
    EXPECT_TRUE(bs.scouting().needs_reinit);
    EXPECT_EQ(r.retired[0].decoded_bits, Bits{1});
}

TEST(BaseStation, SaturationWhenDatabaseFull) {
    BaseStation bs(2, unit_thresholds(), 1.0, RandomStream(1));
    const ComplexVector y1 = 20.0 * ComplexVector::Unit(2, 0);
    bs.transmit();
    bs.receive(y1, 0);
    bs.transmit();
    ASSERT_TRUE(bs.receive(y1, 1).detected);

    const ComplexVector y2 = y1 + 20.0 * ComplexVector::Unit(2, 1);
    bs.transmit();
    bs.receive(y2, 2);
    bs.transmit();
    const auto r = bs.receive(y2, 3);
    EXPECT_FALSE(r.detected);
    EXPECT_TRUE(r.saturated);
    EXPECT_EQ(bs.database().size(), 1u);
}

TEST(BaseStation, TerminateAllClearsDatabase) {
    BaseStation bs(4, unit_thresholds(), 1.0, RandomStream(1));
    const ComplexVector y = 20.0 * ComplexVector::Unit(4, 2);
    for (int k = 0; k < 2; ++k) {
        bs.transmit();
        bs.receive(y, k);
    }
    ASSERT_EQ(bs.tasks().size(), 1u);
    const auto ended = bs.terminate_all();
    EXPECT_EQ(ended.size(), 1u);
    EXPECT_FALSE(ended[0].active);
    EXPECT_TRUE(bs.database().empty());
}

TEST(BaseStation, RejectsBadInputs) {
    EXPECT_THROW(BaseStation(4, unit_thresholds(), 0.0, RandomStream(1)), Error);
    BaseStation bs(4, unit_thresholds(), 1.0, RandomStream(1));
    bs.transmit();
    EXPECT_THROW(bs.receive(ComplexVector::Zero(3), 0), Error);
}

TEST(BaseStation, DetectionLatencyInReferenceRegime) {
    // Rank-1 channel, SNR_max 35 dB at N = 900: bootstrap 5.46 dB.
    const int n = 900;
    const double sigma_sq = noise_variance(3.0, 10e6);
    const auto thr = table_thresholds();
    const double g = 100.0;
    const double lambda = std::sqrt(db_to_linear(35.0) * sigma_sq / thr.p_scout);
    int fast = 0;
    const int seeds = 60;
    for (int s = 0; s < seeds; ++s) {
        RandomStream rng(static_cast<std::uint64_t>(s), 1);
        const ComplexMatrix v = random_unit_vector(rng, n);
        const double eig[] = {lambda};
        const auto h = channel_from_eigenpairs(v, eig, g);
        BaseStation bs(n, thr, sigma_sq, RandomStream(static_cast<std::uint64_t>(s), 2));
        for (int k = 0; k < 10; ++k) {
            const ComplexVector x = bs.transmit();
            ComplexVector y = h.apply_transpose(scm_reflect(h.apply(x), 0.0, ScmParameters{g, 0.0, 1}, rng));
            y += rng.complex_normal_vector(n, sigma_sq);
            if (bs.receive(y, k).detected) {
                ++fast;
                break;
            }
        }
    }
    EXPECT_GE(fast, static_cast<int>(0.95 * seeds));
}

TEST(BaseStation, SeedDeterministic) {
    auto run = [] {
        BaseStation bs(6, unit_thresholds(), 1.0, RandomStream(5));
        RandomStream noise(9);
        std::vector<ComplexVector> xs;
        for (int k = 0; k < 8; ++k) {
            xs.push_back(bs.transmit());
            bs.receive(noise.complex_normal_vector(6, 50.0), k);
        }
        return xs;
    };
    EXPECT_EQ(run(), run());
}
