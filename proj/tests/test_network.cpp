#include "topnet/network.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace topnet;

namespace {

RealVector eigenvalues(const RealMatrix& h) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

NetworkSpec random_ssh(int L, std::uint64_t seed, double delta = 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.1, 1.5);
    NetworkSpec s = NetworkSpec::ssh(L, 0.0, 0.0, delta);
    for (auto& w : s.w) w = u(rng);
    for (auto& t : s.t) t = u(rng);
    return s;
}

}  // namespace

TEST(Network, BsshLayout) {
    NetworkSpec s = NetworkSpec::ssh(3, 0.0, 0.0, 0.5);
    s.w = {0.1, 0.2, 0.3};
    s.t = {1.1, 1.2};
    const auto m = build(s);
    ASSERT_EQ(m.dim(), 6);
    EXPECT_EQ(m.basis_labels, (std::vector<std::string>{"1", "1bar", "2", "2bar", "3", "3bar"}));
    const double expect[6][6] = {{0.5, 0.1, 0, 0, 0, 0},   {0.1, 0.5, 1.1, 0, 0, 0}, {0, 1.1, 0.5, 0.2, 0, 0},
                                 {0, 0, 0.2, 0.5, 1.2, 0}, {0, 0, 0, 1.2, 0.5, 0.3}, {0, 0, 0, 0, 0.3, 0.5}};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) EXPECT_DOUBLE_EQ(m.entries(i, j), expect[i][j]) << i << "," << j;
    EXPECT_TRUE(m.claims_sublattice);
    EXPECT_DOUBLE_EQ(m.reference_energy, 0.5);
}

TEST(Network, SingleCell) {
    const auto m = build(NetworkSpec::ssh(1, 0.4, 1.0));
    ASSERT_EQ(m.dim(), 2);
    const RealVector ev = eigenvalues(m.entries);
    EXPECT_NEAR(ev(0), -0.4, 1e-14);
    EXPECT_NEAR(ev(1), 0.4, 1e-14);
}

TEST(Network, SublatticeSymmetryForRandomCouplings) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto s = random_ssh(7, seed, 0.3);
        const auto m = build(s);
        EXPECT_LT(sublattice_defect(m.entries, m.parity, 0.3), 1e-15);
        const RealVector ev = eigenvalues(m.entries);
        for (Eigen::Index k = 0; k < ev.size(); ++k) EXPECT_NEAR(ev(k) - 0.3, -(ev(ev.size() - 1 - k) - 0.3), 1e-12);
    }
}

TEST(Network, OnsiteDisorderBreaksSymmetry) {
    auto s = random_ssh(4, 11);
    s.omega.assign(8, 0.0);
    s.omega[2] = 0.2;
    const auto m = build(s);
    EXPECT_FALSE(m.claims_sublattice);
    EXPECT_GT(sublattice_defect(m.entries, m.parity, 0.0), 0.1);
}

TEST(Network, MajoranaLadderIsospectralToSsh) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        auto s = random_ssh(6, seed, 0.2);
        const RealVector a = eigenvalues(build(s).entries);
        s.kind = ModelKind::bMC;
        const auto mc = build(s);
        EXPECT_FALSE(mc.claims_sublattice);
        EXPECT_LT(symmetry_defect(mc.entries), 1e-15);
        const RealVector b = eigenvalues(mc.entries);
        EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Network, MajoranaCellEnergies) {
    const auto m = build(NetworkSpec::majorana(2, 0.6, 1.0, 0.0));
    EXPECT_DOUBLE_EQ(m.entries(0, 0), -0.3);
    EXPECT_DOUBLE_EQ(m.entries(1, 1), 0.3);
    EXPECT_DOUBLE_EQ(std::abs(m.entries(1, 2)), 0.5);
}

TEST(Network, BarrierDiagonal) {
    const auto m = build(NetworkSpec::barrier(4, 1.0, 0.1, 3.0));
    EXPECT_DOUBLE_EQ(m.entries(0, 0), 0.1);
    EXPECT_DOUBLE_EQ(m.entries(7, 7), 0.1);
    for (int k = 1; k < 7; ++k) EXPECT_DOUBLE_EQ(m.entries(k, k), 3.0);
    EXPECT_DOUBLE_EQ(m.reference_energy, 0.1);
    EXPECT_TRUE(m.warnings.empty());
    EXPECT_FALSE(build(NetworkSpec::barrier(4, 1.0, 3.0, 1.0)).warnings.empty());
}

TEST(Network, PropagationChainIsUniform) {
    const auto m = build(NetworkSpec::propagation(3, 0.7, 0.2));
    for (int k = 0; k + 1 < 6; ++k) EXPECT_DOUBLE_EQ(m.entries(k, k + 1), 0.7);
    for (int k = 0; k < 6; ++k) EXPECT_DOUBLE_EQ(m.entries(k, k), 0.2);
}

TEST(Network, ValidationErrors) {
    auto s = NetworkSpec::ssh(3, 0.1, 1.0);
    s.t.pop_back();
    EXPECT_THROW(build(s), SpecError);
    s = NetworkSpec::ssh(3, 0.1, 1.0);
    s.omega = {0, 0, 0};
    EXPECT_THROW(build(s), SpecError);
    s = NetworkSpec::ssh(3, 0.1, 1.0);
    s.w[1] = std::nan("");
    EXPECT_THROW(build(s), SpecError);
    EXPECT_THROW(build(NetworkSpec::ssh(0, 0.1, 1.0)), SpecError);
    EXPECT_THROW(build(NetworkSpec::ssh(2, 0.1, 1.0, -1.0)), SpecError);
    EXPECT_THROW(build(NetworkSpec::barrier(1, 1.0, 0.0, 1.0)), SpecError);
    auto b = NetworkSpec::barrier(3, 1.0, 0.0, 2.0);
    b.w[0] = 0.5;
    EXPECT_THROW(build(b), SpecError);
    EXPECT_THROW(build_bssh(NetworkSpec::propagation(2, 1.0)), SpecError);
}

TEST(Network, ModelNames) {
    for (auto k : {ModelKind::bSSH, ModelKind::bMC, ModelKind::bBarrier, ModelKind::bProp})
        EXPECT_EQ(model_kind_from_string(to_string(k)), k);
    EXPECT_THROW(model_kind_from_string("bXYZ"), SpecError);
}

TEST(Network, SweetSpotEdgeStates) {
    const auto l = edge_state(ModelKind::bSSH, 4, Edge::left);
    const auto r = edge_state(ModelKind::bSSH, 4, Edge::right);
    EXPECT_EQ(l(0), Complex(1.0));
    EXPECT_EQ(r(7), Complex(1.0));
    // Eigenvectors of the w = 0 chain at zero energy.
    const auto m = build(NetworkSpec::ssh(4, 0.0, 1.0));
    EXPECT_LT((m.entries.cast<Complex>() * l).norm(), 1e-15);
    EXPECT_LT((m.entries.cast<Complex>() * r).norm(), 1e-15);
    const auto mc = build(NetworkSpec::majorana(4, 0.0, 1.0));
    const auto lm = edge_state(ModelKind::bMC, 4, Edge::left);
    const auto rm = edge_state(ModelKind::bMC, 4, Edge::right);
    EXPECT_LT((mc.entries.cast<Complex>() * lm).norm(), 1e-15);
    EXPECT_LT((mc.entries.cast<Complex>() * rm).norm(), 1e-15);
}
