// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>

#include "jet_sampling.hpp"
#include "lagflow/errors.hpp"
#include "lagflow/flow.hpp"
#include "lagflow/intersect.hpp"
#include "lagflow/reduction.hpp"
#include "lagflow/schubert.hpp"
#include "lagflow/universal.hpp"
#include "schubert_sampling.hpp"
#include "testing.hpp"

using namespace lagflow;
using testing::random_hermitian;
using testing::random_unitary;

namespace {

const Tolerance kTol;
const double kPi = std::acos(-1.0);
const cplx kI(0.0, 1.0);

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

std::size_t dim_ker_one_plus(const Matrix& u) {
    return linalg::numeric_kernel(u + Matrix::identity(u.rows()), kTol).cols();
}

Outcome arnold_roundtrip() {
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 8;
        const UnitaryMatrix u(random_unitary(rng, n));
        const Matrix back = grassmann::lagrangian_to_unitary(grassmann::cayley_graph(u)).matrix();
        worst = std::max(worst, (back - u.matrix()).max_abs());
    }
    Outcome o;
    o.require(worst <= 1e-9, "roundtrip error " + fmt("%.3g", worst));
    o.detail = o.pass ? "max error " + fmt("%.3g", worst) : o.detail;
    return o;
}

Outcome projection_formula() {
    std::mt19937_64 rng(102);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 6;
        const LagrangianFrame l0 = grassmann::cayley_graph(UnitaryMatrix(random_unitary(rng, n)));
        const HermitianMatrix s = random_hermitian(rng, n);
        const Matrix by_frame = linalg::projector(grassmann::chart_point(l0, s).frame());
        worst = std::max(worst, (grassmann::graph_projection(l0, s) - by_frame).max_abs());
    }
    Outcome o;
    o.require(worst <= 1e-9, "projection mismatch " + fmt("%.3g", worst));
    o.detail = o.pass ? "max difference " + fmt("%.3g", worst) : o.detail;
    return o;
}

Outcome unitary_reduction() {
    std::mt19937_64 rng(103);
    Outcome o;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + trial % 7;
        const std::size_t p = 1 + trial % (n - 1);
        const std::size_t m = static_cast<std::size_t>(trial / 7) % (n - p + 1);
        std::vector<double> ph;
        for (std::size_t j = 0; j < n; ++j) ph.push_back(j < m ? kPi : testing::uniform(rng, -2.8, 2.8));
        const UnitaryMatrix u(testing::unitary_with_phases(rng, ph), 1e-9);
        std::vector<std::size_t> idx(p);
        std::iota(idx.begin(), idx.end(), 1);
        const UnitaryMatrix r = reduction::reduce_unitary(u, idx, 1.0, kTol);
        worst = std::max(worst, linalg::unitarity_residual(r.matrix()));
        o.require(dim_ker_one_plus(r.matrix()) == dim_ker_one_plus(u.matrix()), "kernel dimension changed");
    }
    o.require(worst <= 1e-10, "unitarity residual " + fmt("%.3g", worst));

    const cplx z(0.36, 0.48), w(0.64, -0.48);
    const UnitaryMatrix su2(Matrix{{z, -std::conj(w)}, {w, std::conj(z)}});
    const cplx got = reduction::reduce_unitary(su2, {1}, 1.0, kTol).matrix()(0, 0);
    const double err = std::abs(got - (1.0 + std::conj(z)) / (1.0 + z));
    o.require(err <= 1e-12, "SU(2) sample off by " + fmt("%.3g", err));
    if (o.pass) o.detail = "unitarity " + fmt("%.3g", worst) + ", SU(2) sample error " + fmt("%.3g", err);
    return o;
}

Outcome schubert_equivalence() {
    std::mt19937_64 rng(104);
    const std::size_t n = 5;
    const Flag flag(n);
    int disagreements = 0, members = 0, total = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<std::size_t> e;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) e.push_back(i + 1);
        const SchubertIndex index(e);
        const LagrangianFrame base = schubert::cell_base(index, flag);
        for (int s = 0; s < 200; ++s) {
            const HermitianMatrix a = testing::sample_cell_chart(rng, index, n, s % 3);
            const bool by_chart = schubert::chart_membership_equations(a, index, flag, kTol).member;
            bool by_incidence = false;
            try {
                by_incidence =
                    schubert::schubert_index_of(grassmann::chart_point(base, a), flag, kTol).entries() == e;
            } catch (const PreconditionError&) {
            }
            disagreements += by_chart != by_incidence;
            members += by_chart;
            ++total;
        }
    }
    Outcome o;
    o.require(disagreements == 0, std::to_string(disagreements) + " disagreements");
    if (o.pass) o.detail = std::to_string(total) + " samples, " + std::to_string(members) + " members";
    return o;
}

struct AffinePath {
    HermitianMatrix a0, a1;
    HermitianPath path;
};

std::vector<AffinePath> random_paths() {
    std::mt19937_64 rng(105);
    std::vector<AffinePath> out;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + trial % 6;
        auto [a0, a1] = testing::random_admissible_affine(rng, n);
        out.push_back({a0, a1, HermitianPath::affine(a0, a1)});
    }
    return out;
}

Outcome spectral_flow_agreement(const std::vector<AffinePath>& paths) {
    std::mt19937_64 rng(106);
    Outcome o;
    int disagreements = 0, additivity = 0, constant = 0, nonzero = 0;
    for (const AffinePath& p : paths) {
        const int crossing = spectral_flow_crossing(p.path, kTol).flow;
        disagreements += crossing != spectral_flow_tracking(p.path).flow;
        nonzero += crossing != 0;

        // Split at a point where A is safely invertible.
        double s = 0.5;
        for (;;) {
            s = testing::uniform(rng, 0.1, 0.9);
            const std::vector<double> ev = linalg::hermitian_eigvals(p.a0 + p.a1 * s);
            if (std::all_of(ev.begin(), ev.end(), [](double x) { return std::abs(x) > 1e-3; })) break;
        }
        const int left = spectral_flow_crossing(p.path.restricted(0.0, s), kTol).flow;
        const int right = spectral_flow_crossing(p.path.restricted(s, 1.0), kTol).flow;
        additivity += left + right != crossing;

        const HermitianPath flat = HermitianPath::affine(p.a0, HermitianMatrix::zero(p.a0.dim()));
        constant += spectral_flow_crossing(flat, kTol).flow != 0 || spectral_flow_tracking(flat).flow != 0;
    }
    o.require(disagreements == 0, std::to_string(disagreements) + " method disagreements");
    o.require(additivity == 0, std::to_string(additivity) + " additivity failures");
    o.require(constant == 0, std::to_string(constant) + " nonzero constant paths");
    if (o.pass) o.detail = "500 paths, " + std::to_string(nonzero) + " with nonzero flow";
    return o;
}

Outcome maslov_agreement(const std::vector<AffinePath>& paths) {
    int disagreements = 0;
    for (const AffinePath& p : paths) {
        const int sf = spectral_flow_crossing(p.path, kTol).flow;
        disagreements += maslov_index(LagrangianPath::switched_graphs(p.path), kTol).flow != sf;
    }
    Outcome o;
    o.require(disagreements == 0, std::to_string(disagreements) + " disagreements");
    if (o.pass) o.detail = "500 paths, 0 disagreements";
    return o;
}

// The k = 2 worked jets on C^2 with W = span e2.
FamilyJet worked_jet(const Matrix& t0) {
    FamilyJet jet;
    jet.k = 2;
    jet.t0 = HermitianMatrix(t0);
    jet.partials = {HermitianMatrix(Matrix{{0, 0}, {0, 1}}), HermitianMatrix(Matrix{{0, 1}, {1, 0}}),
                    HermitianMatrix(Matrix{{0, kI}, {-kI, 0}})};
    jet.w = Matrix{{0}, {1}};
    return jet;
}

// Rows [<A e2, e2>, Re <A e1, e2>, Im <A e1, e2>] of the worked jet,
// expanded by cofactors.
double worked_determinant(const FamilyJet& jet) {
    double a[3][3];
    for (int i = 0; i < 3; ++i) {
        a[i][0] = jet.partials[i](1, 1).real();
        a[i][1] = jet.partials[i](1, 0).real();
        a[i][2] = jet.partials[i](1, 0).imag();
    }
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

int parity_sign(const std::vector<std::size_t>& perm) {
    int s = 1;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) s = -s;
    return s;
}

Outcome intersection_determinants() {
    Outcome o;
    for (const Matrix& t0 : {Matrix(2, 2), Matrix{{1, 0}, {0, 0}}}) {
        const FamilyJet jet = worked_jet(t0);
        const int oracle = worked_determinant(jet) > 0 ? 1 : -1;
        o.require(oracle == -1, "worked determinant is not negative");
        o.require(intersection_number_operator(jet, kTol).epsilon == oracle, "worked jet, operator level");
        o.require(intersection_number_lagrangian(graph_jet(jet), kTol).epsilon == oracle,
                  "worked jet, lagrangian level");
    }

    std::mt19937_64 rng(107);
    int mismatches = 0, invariance = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t k = 1 + trial % 3;
        const std::size_t p = 1 + static_cast<std::size_t>(trial / 3) % k;
        const std::size_t n = std::max<std::size_t>(k, 2) + static_cast<std::size_t>(trial) % 3;
        const FamilyJet fj = testing::random_localized_jet(rng, n, k, p);
        const int eps = intersection_number_operator(fj, kTol).epsilon;
        const LagrangianJet lj = graph_jet(fj);
        mismatches += intersection_number_lagrangian(lj, kTol).epsilon != eps;

        // Phase of the W basis.
        FamilyJet rotated = fj;
        rotated.w = fj.w * random_unitary(rng, fj.w.cols());
        invariance += intersection_number_operator(rotated, kTol).epsilon != eps;

        // Lagrangian frame basis: tangents S become Q* S Q.
        const Matrix q = random_unitary(rng, n);
        LagrangianJet gauged = lj;
        gauged.l = LagrangianFrame(lj.l.frame() * q);
        gauged.tangents.clear();
        for (const auto& s : lj.tangents) gauged.tangents.emplace_back(q.adjoint() * s.matrix() * q);
        invariance += intersection_number_lagrangian(gauged, kTol).epsilon != eps;

        // Parameter parity.
        std::vector<std::size_t> perm(2 * k - 1);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        FamilyJet permuted = fj;
        for (std::size_t i = 0; i < perm.size(); ++i) permuted.partials[i] = fj.partials[perm[i]];
        invariance += intersection_number_operator(permuted, kTol).epsilon != eps * parity_sign(perm);
        FamilyJet flipped = fj;
        flipped.partials[0] = fj.partials[0] * -1.0;
        invariance += intersection_number_operator(flipped, kTol).epsilon != -eps;
    }
    o.require(mismatches == 0, std::to_string(mismatches) + " operator/lagrangian mismatches");
    o.require(invariance == 0, std::to_string(invariance) + " invariance failures");
    if (o.pass) o.detail = "worked jets -1, 100 random jets agree";
    return o;
}

Outcome su2_global() {
    const IsotropicSubspace w = IsotropicSubspace::from_indices(2, {2});
    const std::vector<MeshFamily> charts{testing::su2_chart(-1.0, 2.0, 17), testing::su2_chart(1.0, 2.0, 17)};
    const TotalIntersection t = total_intersection_number(charts, w, kTol);
    Outcome o;
    o.require(t.crossings.size() == 1, std::to_string(t.crossings.size()) + " located crossings");
    if (!o.pass) return o;
    const auto& c = t.crossings[0];
    const UnitaryMatrix u = grassmann::lagrangian_to_unitary(charts[c.chart].value(c.crossing.point));
    const double dist = (u.matrix() + Matrix::identity(2)).max_abs();
    o.require(dist <= 1e-6, "crossing is " + fmt("%.3g", dist) + " from -I");
    o.require(std::abs(c.result.epsilon) == 1, "|epsilon| != 1");
    if (o.pass) o.detail = "one crossing at -I, epsilon " + std::to_string(c.result.epsilon);
    return o;
}

Outcome universal_family() {
    std::mt19937_64 rng(109);
    Outcome o;
    double worst_err = 0.0, worst_order = INFINITY;
    for (std::size_t n = 1; n <= 3; ++n) {
        const UnitaryMatrix u(random_unitary(rng, n));
        worst_err = std::max(worst_err, universal::spectrum_error(u, 256, -kPi, kPi));
        worst_order = std::min(worst_order, universal::convergence_order(u, 128, -kPi, kPi));
    }
    o.require(worst_err <= 1e-2, "spectrum error " + fmt("%.3g", worst_err));
    o.require(worst_order >= 1.9, "convergence order " + fmt("%.3g", worst_order));

    const UnitaryLoop loop = UnitaryLoop::from_function(
        [](double t) { return UnitaryMatrix(Matrix{{std::polar(1.0, 2 * kPi * t + kPi)}}); },
        uniform_grid(kDefaultIntervals));
    const int flow = universal::universal_loop_flow(loop, kTol).flow;
    o.require(flow == 1, "twisted loop flow " + std::to_string(flow));

    double involution = 0.0, subspace = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const UnitaryMatrix u(random_unitary(rng, 1 + trial % 6));
        const UnitaryMatrix r = universal::universal_reduction(u);
        involution = std::max(involution, (universal::universal_reduction(r).matrix() - u.matrix()).max_abs());
        subspace = std::max(subspace, linalg::subspace_distance(universal::reduced_lagrangian(u).frame(),
                                                                grassmann::cayley_graph(r).frame()));
    }
    o.require(involution <= 1e-10, "involution residual " + fmt("%.3g", involution));
    o.require(subspace <= 1e-8, "reduced lagrangian distance " + fmt("%.3g", subspace));
    if (o.pass)
        o.detail = "error " + fmt("%.3g", worst_err) + ", order " + fmt("%.3f", worst_order) + ", flow +1, involution " +
                   fmt("%.3g", involution);
    return o;
}

Outcome maslov_generator() {
    const LagrangianPath path = LagrangianPath::from_function(
        [](double t) { return grassmann::cayley_graph(UnitaryMatrix(Matrix{{std::polar(1.0, 2 * kPi * t)}})); },
        uniform_grid(kDefaultIntervals));
    const int m = maslov_index(path, kTol).flow;
    Outcome o;
    o.require(m == 1, "Maslov index " + std::to_string(m));
    if (o.pass) o.detail = "Maslov index +1";
    return o;
}

}  // namespace

int main() {
    const std::vector<AffinePath> paths = random_paths();
    struct Criterion {
        int id;
        const char* name;
        double limit_s;  // 0 for no limit
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "Arnold roundtrip", 5.0, arnold_roundtrip},
        {2, "graph projection formula", 0.0, projection_formula},
        {3, "unitary reduction", 0.0, unitary_reduction},
        {4, "Schubert equivalence", 0.0, schubert_equivalence},
        {5, "spectral flow cross-validation", 30.0, [&] { return spectral_flow_agreement(paths); }},
        {6, "spectral flow = Maslov index", 0.0, [&] { return maslov_agreement(paths); }},
        {7, "intersection determinants", 0.0, intersection_determinants},
        {8, "SU(2) global check", 60.0, su2_global},
        {9, "universal family", 0.0, universal_family},
        {10, "Maslov generator", 0.0, maslov_generator},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_s > 0 && secs >= c.limit_s) {
            o.pass = false;
            o.detail = "runtime " + fmt("%.2f", secs) + " s over the " + fmt("%.0f", c.limit_s) + " s limit";
        }
        failures += !o.pass;
        std::printf("criterion %2d %-32s %s  (%s; %.2f s)\n", c.id, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                    secs);
    }
    std::fflush(stdout);
    return failures == 0 ? 0 : 1;
}
