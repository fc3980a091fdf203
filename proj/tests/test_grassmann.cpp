#include <cmath>
#include <random>

#include "doctest.h"
#include "lagflow/errors.hpp"
#include "lagflow/grassmann.hpp"
#include "testing.hpp"

using namespace lagflow;
using namespace lagflow::grassmann;
using lagflow::testing::random_hermitian;
using lagflow::testing::random_unitary;
using lagflow::testing::unitary_with_phases;

namespace {

const Tolerance kTol;
const cplx kI(0.0, 1.0);

LagrangianFrame col(std::initializer_list<cplx> v) {
    Matrix m(v.size(), 1);
    std::size_t i = 0;
    for (cplx x : v) m(i++, 0) = x;
    return LagrangianFrame::from_spanning(m);
}

LagrangianFrame random_lagrangian(std::mt19937_64& rng, std::size_t n) {
    return cayley_graph(UnitaryMatrix(random_unitary(rng, n)));
}

std::size_t dim_ker_one_plus(const Matrix& u) {
    return linalg::numeric_kernel(u + Matrix::identity(u.rows()), kTol).cols();
}

}  // namespace

TEST_CASE("standard lagrangians") {
    const auto [hp1, hm1] = standard_lagrangians(1);
    CHECK(std::abs(hp1.frame()(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(hm1.frame()(1, 0) - 1.0) < 1e-15);
    CHECK(linalg::subspace_intersection_dim(apply_j(hp1.frame()), hm1.frame(), kTol) == 1);
    const auto [hp2, hm2] = standard_lagrangians(2);
    CHECK(hp2.frame().rows() == 4);
    CHECK((hp2.frame() - Matrix{{1, 0}, {0, 1}, {0, 0}, {0, 0}}).max_abs() == 0.0);
    CHECK((hm2.frame() - Matrix{{0, 0}, {0, 0}, {1, 0}, {0, 1}}).max_abs() == 0.0);
    CHECK((complex_structure(2) * hp2.frame() - apply_j(hp2.frame())).max_abs() == 0.0);
}

TEST_CASE("LagrangianFrame rejects non-lagrangian frames") {
    CHECK_THROWS_AS(LagrangianFrame(Matrix{{1.0, 0.0}, {0.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}}), InputError);
    CHECK_THROWS_AS(LagrangianFrame(Matrix{{2.0}, {0.0}}), InputError);
}

TEST_CASE("cayley_graph examples") {
    const auto [hp, hm] = standard_lagrangians(1);
    CHECK(same_lagrangian(cayley_graph(UnitaryMatrix(Matrix{{1.0}})), hp));
    CHECK(same_lagrangian(cayley_graph(UnitaryMatrix(Matrix{{-1.0}})), hm));
    // U = i: A = i(1-U)(1+U)^{-1} = 1, the graph of J A over H+ is span(1, -1)
    const cplx a = kI * (1.0 - kI) / (1.0 + kI);
    CHECK(std::abs(a - 1.0) < 1e-15);
    const LagrangianFrame oracle = col({1.0, -a});
    CHECK(same_lagrangian(cayley_graph(UnitaryMatrix(Matrix{{kI}})), oracle));
}

TEST_CASE("lagrangian_to_unitary examples and roundtrip") {
    for (std::size_t n = 1; n <= 3; ++n) {
        const auto [hp, hm] = standard_lagrangians(n);
        CHECK((lagrangian_to_unitary(hp).matrix() - Matrix::identity(n)).max_abs() < 1e-14);
        CHECK((lagrangian_to_unitary(hm).matrix() + Matrix::identity(n)).max_abs() < 1e-14);
    }
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 8;
        const Matrix u = random_unitary(rng, n);
        const LagrangianFrame l = cayley_graph(UnitaryMatrix(u));
        CHECK((lagrangian_to_unitary(l).matrix() - u).max_abs() <= 1e-9);
        // frame gauge
        const LagrangianFrame g(l.frame() * random_unitary(rng, n));
        CHECK((lagrangian_to_unitary(g).matrix() - u).max_abs() <= 1e-9);
        CHECK((reflection_of(g) - reflection_of(l)).max_abs() <= 1e-9);
    }
}

TEST_CASE("Cayley graph meets H- in Ker(1+U)") {
    std::mt19937_64 rng(22);
    const double pi = std::acos(-1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const std::size_t m = trial % n;  // multiplicity of -1
        std::vector<double> ph;
        for (std::size_t j = 0; j < n; ++j) ph.push_back(j < m ? pi : testing::uniform(rng, -2.5, 2.5));
        const Matrix u = unitary_with_phases(rng, ph);
        const auto hm = standard_lagrangians(n).second;
        const LagrangianFrame l = cayley_graph(UnitaryMatrix(u, 1e-9));
        CHECK(dim_ker_one_plus(u) == m);
        CHECK(linalg::subspace_intersection_dim(l.frame(), hm.frame(), kTol) == m);
        // Ker(R_L + R_L0) = (L ∩ L0^⊥) ⊕ (L^⊥ ∩ L0); with L0 = H+ this is 2 dim Ker(1+U)
        const auto hp = standard_lagrangians(n).first;
        CHECK(linalg::numeric_kernel(reflection_of(l) + reflection_of(hp), kTol).cols() == 2 * m);
        CHECK(linalg::numeric_kernel(reflection_of(l) + reflection_of(hm), kTol).cols() == 0);
    }
}

TEST_CASE("reflection examples and algebra") {
    const auto [hp, hm] = standard_lagrangians(2);
    CHECK((reflection_of(hp) - Matrix::diagonal({1, 1, -1, -1})).max_abs() < 1e-15);
    CHECK((reflection_of(hm) - Matrix::diagonal({-1, -1, 1, 1})).max_abs() < 1e-15);
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + trial % 6;
        const Matrix r = reflection_of(random_lagrangian(rng, n));
        const Matrix j = complex_structure(n);
        CHECK((r * r - Matrix::identity(2 * n)).max_abs() < 1e-10);
        CHECK((r - r.adjoint()).max_abs() < 1e-10);
        CHECK((r * j + j * r).max_abs() < 1e-10);
    }
}

TEST_CASE("graph_projection examples and frame oracle") {
    const auto [hp, hm] = standard_lagrangians(1);
    const Matrix p0 = graph_projection(hp, HermitianMatrix::zero(1));
    CHECK((p0 - linalg::projector(hp.frame())).max_abs() < 1e-15);
    const Matrix p1 = graph_projection(hp, HermitianMatrix(Matrix{{1.0}}));
    CHECK((p1 - Matrix{{0.5, -0.5}, {-0.5, 0.5}}).max_abs() < 1e-15);

    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + trial % 6;
        const LagrangianFrame l0 = random_lagrangian(rng, n);
        const HermitianMatrix s = random_hermitian(rng, n);
        const Matrix p = graph_projection(l0, s);
        CHECK((p - linalg::projector(chart_point(l0, s).frame())).max_abs() < 1e-9);
        CHECK((p * p - p).max_abs() < 1e-10);
        CHECK((p - p.adjoint()).max_abs() < 1e-10);
    }
}

TEST_CASE("chart_point and chart_coordinates") {
    std::mt19937_64 rng(25);
    const auto [hp, hm] = standard_lagrangians(3);
    CHECK_THROWS_WITH_AS(chart_coordinates(hm, hp), "not in chart", PreconditionError);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + trial % 6;
        const LagrangianFrame l0 = random_lagrangian(rng, n);
        CHECK(same_lagrangian(chart_point(l0, HermitianMatrix::zero(n)), l0));
        CHECK(chart_coordinates(l0, l0).matrix().max_abs() < 1e-12);
        const HermitianMatrix s = random_hermitian(rng, n);
        const LagrangianFrame l = chart_point(l0, s);
        CHECK(linalg::subspace_intersection_dim(l.frame(), apply_j(l0.frame()), kTol) == 0);
        CHECK((chart_coordinates(l, l0).matrix() - s.matrix()).max_abs() < 1e-9);
        // gauge of both frames
        const LagrangianFrame lg(l.frame() * random_unitary(rng, n));
        const HermitianMatrix s2 = chart_coordinates(lg, l0);
        CHECK((s2.matrix() - s.matrix()).max_abs() < 1e-9);
        // chart_point after chart_coordinates is the identity on subspaces
        const LagrangianFrame l2 = random_lagrangian(rng, n);
        CHECK(same_lagrangian(chart_point(l0, chart_coordinates(l2, l0)), l2));
    }
}

TEST_CASE("chart around H+ matches the Cayley graph of (i-A)(i+A)^{-1}") {
    std::mt19937_64 rng(26);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + trial % 5;
        const HermitianMatrix a = random_hermitian(rng, n);
        const Matrix id = Matrix::identity(n);
        const Matrix u = (id * kI - a.matrix()) * linalg::inverse(id * kI + a.matrix());
        const auto hp = standard_lagrangians(n).first;
        CHECK(same_lagrangian(chart_point(hp, a), cayley_graph(UnitaryMatrix(u, 1e-9))));
    }
}

TEST_CASE("switched graphs and unitary_of_operator") {
    const auto [hp1, hm1] = standard_lagrangians(1);
    CHECK(same_lagrangian(switched_graph(HermitianMatrix::zero(1)), hm1));
    CHECK(same_lagrangian(switched_graph(HermitianMatrix(Matrix{{1.0}})), col({1.0, 1.0})));
    CHECK((unitary_of_operator(HermitianMatrix::zero(2)).matrix() + Matrix::identity(2)).max_abs() < 1e-15);
    const Matrix u1 = unitary_of_operator(HermitianMatrix(Matrix{{1.0}})).matrix();
    CHECK(std::abs(u1(0, 0) + kI) < 1e-15);
    CHECK(same_lagrangian(cayley_graph(UnitaryMatrix(u1)), col({1.0, 1.0})));

    std::mt19937_64 rng(27);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const std::size_t kdim = trial % n;
        // T = V diag(0..0, d) V* with known kernel
        const Matrix v = random_unitary(rng, n);
        std::vector<cplx> d;
        for (std::size_t j = 0; j < n; ++j) d.push_back(j < kdim ? 0.0 : testing::uniform(rng, 0.5, 2.0) * (j % 2 ? 1 : -1));
        const HermitianMatrix t(v * Matrix::diagonal(d) * v.adjoint());
        const LagrangianFrame g = switched_graph(t);
        const auto [hp, hm] = standard_lagrangians(n);
        CHECK(linalg::subspace_intersection_dim(g.frame(), hm.frame(), kTol) == kdim);
        CHECK(linalg::subspace_intersection_dim(g.frame(), hp.frame(), kTol) == 0);
        const UnitaryMatrix u = unitary_of_operator(t);
        CHECK(linalg::unitarity_residual(u.matrix()) < 1e-10);
        CHECK(same_lagrangian(cayley_graph(u), g, Tolerance{1e-9, 1e-9}));
    }
}

TEST_CASE("projection_derivative matches finite differences and -J Pdot is the identity on Sym(L)") {
    std::mt19937_64 rng(28);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + trial % 5;
        const LagrangianFrame l = random_lagrangian(rng, n);
        const HermitianMatrix s = random_hermitian(rng, n);
        const double h = 1e-5;
        const Matrix fd = (linalg::projector(chart_point(l, s * h).frame()) -
                           linalg::projector(chart_point(l, s * (-h)).frame())) *
                          cplx(1.0 / (2 * h));
        const Matrix pd = projection_derivative(l, s);
        CHECK((fd - pd).max_abs() < 1e-7);
        const Matrix z = l.frame();
        const Matrix compressed = adjoint_times(z, apply_j(pd) * cplx(-1.0) * z);
        CHECK((compressed - s.matrix()).max_abs() < 1e-10);
    }
}
