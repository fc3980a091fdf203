#include <cmath>
#include <random>

#include "doctest.h"
#include "lagflow/errors.hpp"
#include "lagflow/flow.hpp"
#include "testing.hpp"

using namespace lagflow;
using lagflow::testing::random_admissible_affine;
using lagflow::testing::random_hermitian;
using lagflow::testing::random_unitary;

namespace {

const Tolerance kTol;
const double kPi = std::acos(-1.0);

HermitianMatrix diag(std::initializer_list<double> d) {
    std::vector<cplx> v(d.begin(), d.end());
    return HermitianMatrix(Matrix::diagonal(v));
}

HermitianMatrix scalar(double x) { return diag({x}); }

}  // namespace

TEST_CASE("scalar path through zero has flow +1") {
    const HermitianPath p = HermitianPath::affine(scalar(-0.5), scalar(1.0));
    const FlowResult c = spectral_flow_crossing(p, kTol);
    CHECK(c.flow == 1);
    REQUIRE(c.crossings.size() == 1);
    CHECK(c.crossings[0].t == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(spectral_flow_tracking(p).flow == 1);
}

TEST_CASE("constant invertible path has flow 0") {
    const HermitianPath p = HermitianPath::affine(diag({1.0, -2.0}), HermitianMatrix::zero(2));
    CHECK(spectral_flow_crossing(p, kTol).flow == 0);
    CHECK(spectral_flow_tracking(p).flow == 0);
}

TEST_CASE("opposite branches through zero cancel") {
    // Both eigenvalues vanish at t = 1/2; the negative count never moves.
    const HermitianPath p = HermitianPath::affine(diag({-0.5, 0.5}), diag({1.0, -1.0}));
    CHECK(spectral_flow_crossing(p, kTol).flow == 0);
    CHECK(spectral_flow_tracking(p).flow == 0);
}

TEST_CASE("diagonal paths: crossings at -a_i / b_i with sign of b_i") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + trial % 5;
        std::vector<cplx> a(n), b(n);
        int expected = 0;
        std::vector<double> roots;
        for (std::size_t i = 0; i < n; ++i) {
            const double root = testing::uniform(rng, -0.5, 1.5);
            const double slope = testing::uniform(rng, 0.5, 3.0) * (testing::uniform(rng, -1, 1) < 0 ? -1 : 1);
            a[i] = -root * slope;
            b[i] = slope;
            if (root > 0.0 && root < 1.0) {
                expected += slope > 0 ? 1 : -1;
                roots.push_back(root);
            }
        }
        // Conjugating by a unitary hides the diagonal structure.
        const Matrix v = random_unitary(rng, n);
        const HermitianMatrix a0(v * Matrix::diagonal(a) * v.adjoint());
        const HermitianMatrix a1(v * Matrix::diagonal(b) * v.adjoint());
        const HermitianPath p = HermitianPath::affine(a0, a1);
        const FlowResult c = spectral_flow_crossing(p, kTol);
        CHECK(c.flow == expected);
        REQUIRE(c.crossings.size() == roots.size());
        std::sort(roots.begin(), roots.end());
        std::vector<double> found;
        for (const auto& x : c.crossings) found.push_back(x.t);
        std::sort(found.begin(), found.end());
        for (std::size_t i = 0; i < roots.size(); ++i) CHECK(std::abs(found[i] - roots[i]) < 1e-10);
        CHECK(spectral_flow_tracking(p).flow == expected);
    }
}

TEST_CASE("crossing and tracking agree on random affine paths") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + trial % 6;
        const auto [a0, a1] = random_admissible_affine(rng, n);
        const HermitianPath p = HermitianPath::affine(a0, a1);
        const FlowResult c = spectral_flow_crossing(p, kTol);
        const FlowResult t = spectral_flow_tracking(p);
        CHECK(c.flow == t.flow);
        CHECK(c.crossings.size() == t.crossings.size());
        // The flow of an affine path equals the change in the negative count.
        auto neg = [](const HermitianMatrix& m) {
            int k = 0;
            for (double x : linalg::hermitian_eigvals(m)) k += x < 0;
            return k;
        };
        CHECK(c.flow == neg(a0) - neg(a0 + a1));
    }
}

TEST_CASE("finite-difference and sampled derivatives give the same flow") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 4;
        const auto [a0, a1] = random_admissible_affine(rng, n);
        const HermitianMatrix a2 = random_hermitian(rng, n);
        auto f = [=](double t) { return a0 + a1 * t + a2 * (t * (1 - t)); };
        const HermitianPath fd = HermitianPath::from_function(f, {}, uniform_grid(kDefaultIntervals));
        const HermitianPath exact = HermitianPath::from_function(
            f, [=](double t) { return a1 + a2 * (1 - 2 * t); }, uniform_grid(kDefaultIntervals));
        const int reference = spectral_flow_crossing(exact, kTol).flow;
        CHECK(spectral_flow_crossing(fd, kTol).flow == reference);
        CHECK(spectral_flow_tracking(fd).flow == reference);

        std::vector<double> grid = uniform_grid(200);
        std::vector<HermitianMatrix> values, derivs;
        for (double t : grid) {
            values.push_back(f(t));
            derivs.push_back(exact.derivative(t));
        }
        CHECK(spectral_flow_crossing(HermitianPath::sampled(grid, values, derivs), kTol).flow == reference);
        CHECK(spectral_flow_crossing(HermitianPath::sampled(grid, values), kTol).flow == reference);
    }
}

TEST_CASE("flow is additive under subdivision") {
    std::mt19937_64 rng(17);
    int checked = 0;
    while (checked < 30) {
        const std::size_t n = 1 + checked % 6;
        const auto [a0, a1] = random_admissible_affine(rng, n);
        const HermitianPath p = HermitianPath::affine(a0, a1);
        const double split = testing::uniform(rng, 0.2, 0.8);
        bool invertible = true;
        for (double x : linalg::hermitian_eigvals(p.value(split))) invertible = invertible && std::abs(x) > 1e-6;
        if (!invertible) continue;
        ++checked;
        const int whole = spectral_flow_crossing(p, kTol).flow;
        CHECK(whole == spectral_flow_crossing(p.restricted(0, split), kTol).flow +
                           spectral_flow_crossing(p.restricted(split, 1), kTol).flow);
        CHECK(whole ==
              spectral_flow_tracking(p.restricted(0, split)).flow + spectral_flow_tracking(p.restricted(split, 1)).flow);
    }
}

TEST_CASE("small perturbation with fixed endpoints keeps the flow") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + trial % 5;
        const auto [a0, a1] = random_admissible_affine(rng, n, 0.2);
        const HermitianMatrix c = random_hermitian(rng, n);
        const double amp = 0.05 / std::max(1.0, c.matrix().frobenius());
        auto f = [=](double t) { return a0 + a1 * t + c * (amp * std::sin(2 * kPi * t) * std::sin(kPi * t)); };
        const HermitianPath bumped = HermitianPath::from_function(f, {}, uniform_grid(kDefaultIntervals));
        CHECK(spectral_flow_crossing(bumped, kTol).flow == spectral_flow_crossing(HermitianPath::affine(a0, a1), kTol).flow);
    }
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_WITH_AS(spectral_flow_crossing(HermitianPath::affine(scalar(0.0), scalar(1.0)), kTol),
                         "degenerate endpoint", PreconditionError);
    CHECK_THROWS_WITH_AS(spectral_flow_tracking(HermitianPath::affine(scalar(-1.0), scalar(1.0))),
                         "degenerate endpoint", PreconditionError);
    // Two-dimensional kernel at t = 1/2.
    CHECK_THROWS_WITH_AS(spectral_flow_crossing(HermitianPath::affine(diag({-0.5, -0.5}), diag({1, 1})), kTol),
                         "degenerate crossing", PreconditionError);
    // Cubic crossing: vanishing crossing form.
    auto cubic = [](double t) { return scalar(std::pow(t - 0.5, 3)); };
    CHECK_THROWS_WITH_AS(spectral_flow_crossing(HermitianPath::from_function(
                                                    cubic, [](double t) { return scalar(3 * (t - 0.5) * (t - 0.5)); },
                                                    uniform_grid(kDefaultIntervals)),
                                                kTol),
                         "degenerate crossing", PreconditionError);
    CHECK_THROWS_AS(HermitianPath::sampled({0.0, 0.5, 0.4, 1.0}, std::vector<HermitianMatrix>(4, scalar(1.0))),
                    InputError);
}

TEST_CASE("tangential touch contributes nothing") {
    auto f = [](double t) { return scalar((t - 0.5) * (t - 0.5) + 1e-13); };
    const HermitianPath p = HermitianPath::from_function(f, {}, uniform_grid(kDefaultIntervals));
    CHECK(spectral_flow_crossing(p, kTol).flow == 0);
    CHECK(spectral_flow_crossing(p, kTol).crossings.empty());
}

TEST_CASE("double crossing inside one interval is resolved") {
    // Two zeros 1e-3 apart, far below the 1/61 spacing.
    auto f = [](double t) { return scalar((t - 0.3) * (t - 0.301)); };
    const HermitianPath p = HermitianPath::from_function(f, {}, uniform_grid(kDefaultIntervals));
    const FlowResult c = spectral_flow_crossing(p, kTol);
    CHECK(c.flow == 0);
    CHECK(c.crossings.size() == 2);
}

TEST_CASE("maslov index of switched graphs of a scalar path is +1") {
    const LagrangianPath lp = LagrangianPath::switched_graphs(HermitianPath::affine(scalar(-0.5), scalar(1.0)));
    const FlowResult m = maslov_index(lp, kTol);
    CHECK(m.flow == 1);
    REQUIRE(m.crossings.size() == 1);
    CHECK(m.crossings[0].t == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("the loop of cayley graphs of e^{2 pi i t} has maslov index +1") {
    const LagrangianPath lp = LagrangianPath::from_function(
        [](double t) {
            Matrix u(1, 1);
            u(0, 0) = std::polar(1.0, 2 * kPi * t);
            return grassmann::cayley_graph(UnitaryMatrix(u));
        },
        uniform_grid(kDefaultIntervals));
    const FlowResult m = maslov_index(lp, kTol);
    CHECK(m.flow == 1);
    REQUIRE(m.crossings.size() == 1);
    CHECK(m.crossings[0].t == doctest::Approx(0.5).epsilon(1e-10));

    // Chart branch -cot(pi t) of the same loop, as a Hermitian path away
    // from its poles.
    const HermitianPath branch = HermitianPath::from_function(
        [](double t) { return scalar(-1.0 / std::tan(kPi * (0.25 + 0.5 * t))); }, {}, uniform_grid(kDefaultIntervals));
    CHECK(spectral_flow_crossing(branch, kTol).flow == 1);
}

TEST_CASE("constant lagrangian path has maslov index 0") {
    std::mt19937_64 rng(23);
    const LagrangianFrame l = grassmann::cayley_graph(UnitaryMatrix(random_unitary(rng, 3)));
    const LagrangianPath lp = LagrangianPath::sampled({0.0, 1.0}, {l, l});
    CHECK(maslov_index(lp, kTol).flow == 0);
}

TEST_CASE("maslov index of switched graphs equals spectral flow") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + trial % 6;
        const auto [a0, a1] = random_admissible_affine(rng, n);
        const HermitianPath p = HermitianPath::affine(a0, a1);
        const FlowResult sf = spectral_flow_crossing(p, kTol);
        const FlowResult m = maslov_index(LagrangianPath::switched_graphs(p), kTol);
        CHECK(m.flow == sf.flow);
        REQUIRE(m.crossings.size() == sf.crossings.size());
        for (std::size_t i = 0; i < m.crossings.size(); ++i) {
            CHECK(std::abs(m.crossings[i].t - sf.crossings[i].t) < 1e-9);
            CHECK(m.crossings[i].sign == sf.crossings[i].sign);
        }
    }
}

TEST_CASE("maslov index ignores the choice of frame at each node") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 1 + trial % 4;
        const auto [a0, a1] = random_admissible_affine(rng, n);
        const HermitianPath p = HermitianPath::affine(a0, a1);
        const std::vector<double> grid = uniform_grid(300);
        std::vector<LagrangianFrame> plain, gauged;
        for (double t : grid) {
            const LagrangianFrame l = grassmann::switched_graph(p.value(t));
            plain.push_back(l);
            gauged.emplace_back(l.frame() * random_unitary(rng, n));
        }
        const int expected = spectral_flow_crossing(p, kTol).flow;
        CHECK(maslov_index(LagrangianPath::sampled(grid, plain), kTol).flow == expected);
        CHECK(maslov_index(LagrangianPath::sampled(grid, gauged), kTol).flow == expected);
    }
}

TEST_CASE("lagrangian endpoint on H- is rejected") {
    const LagrangianPath lp = LagrangianPath::switched_graphs(HermitianPath::affine(scalar(0.0), scalar(1.0)));
    CHECK_THROWS_WITH_AS(maslov_index(lp, kTol), "degenerate endpoint", PreconditionError);
}

TEST_CASE("sampled lagrangian path rejects large steps") {
    const auto [hp, hm] = grassmann::standard_lagrangians(1);
    Matrix m(2, 1);
    m(0, 0) = 1;
    m(1, 0) = 1;
    const LagrangianFrame diagonal = LagrangianFrame::from_spanning(m);
    CHECK_THROWS_AS(LagrangianPath::sampled({0.0, 1.0}, {hp, diagonal}), InputError);
}
