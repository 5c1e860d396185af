#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mfglp/discretize.hpp"
#include "test_helpers.hpp"

using namespace mfglp;
using namespace mfglp::testing;

namespace {

MFGModel constant_model(const GridSpec& grid, double b, double sig2) {
    MFGModel model;
    model.name = "constant";
    model.drift = [b, d = grid.state_dim](double, const Vector&, const Vector&, const Vector&) {
        return Vector(Vector::Constant(d, b));
    };
    model.diffusion = [sig2, d = grid.state_dim](double, const Vector&, const Vector&,
                                                 const Vector&) {
        return Matrix(std::sqrt(sig2) * Matrix::Identity(d, d));
    };
    model.running_cost = [](double, const Vector&, const Vector&, const Vector&) { return 0.0; };
    model.terminal_cost = [](const Vector&, const Vector&) { return 0.0; };
    model.initial_distribution = uniform_distribution(grid);
    return model;
}

}  // namespace

TEST_CASE("pure drift upwinds to the right neighbor") {
    GridSpec grid = grid_1d(0.0, 1.0, 11, 0.5, 10, {0.0});  // h = 0.1, dt = 0.05
    MFGModel model = constant_model(grid, 1.0, 0.0);
    DiscreteGenerator gen = build_generator(model, grid, uniform_flow(grid));

    const auto& Q = gen.rates[0][0];
    int x = 5;
    CHECK(Q.coeff(x, x + 1) == doctest::Approx(10.0));
    CHECK(Q.coeff(x, x - 1) == 0.0);
    CHECK(Q.coeff(x, x) == doctest::Approx(-10.0));
}

TEST_CASE("pure diffusion uses the central stencil") {
    GridSpec grid = grid_1d(0.0, 1.0, 11, 0.04, 10, {0.0});  // dt = 0.004
    MFGModel model = constant_model(grid, 0.0, 2.0);
    DiscreteGenerator gen = build_generator(model, grid, uniform_flow(grid));

    const auto& Q = gen.rates[0][0];
    int x = 5;
    CHECK(Q.coeff(x, x + 1) == doctest::Approx(100.0));
    CHECK(Q.coeff(x, x - 1) == doctest::Approx(100.0));
    CHECK(Q.coeff(x, x) == doctest::Approx(-200.0));
}

TEST_CASE("every generator row sums to zero") {
    GridSpec grid = grid_1d(-1.0, 1.0, 15, 0.02, 8, {-1.0, 0.5});
    MFGModel model = constant_model(grid, 0.7, 1.3);
    DiscreteGenerator gen = build_generator(model, grid, uniform_flow(grid));
    for (const auto& per_action : gen.rates)
        for (const auto& Q : per_action)
            for (int x = 0; x < Q.rows(); ++x) {
                double sum = 0.0;
                for (SparseMatrixRM::InnerIterator it(Q, x); it; ++it) sum += it.value();
                CHECK(std::abs(sum) <= 1e-12);
            }
}

TEST_CASE("stability violation reports the admissible dt") {
    GridSpec grid = grid_1d(0.0, 1.0, 11, 10.0, 10, {0.0});  // dt = 1 way too large
    MFGModel model = constant_model(grid, 0.0, 2.0);
    CHECK_THROWS_WITH_AS(build_generator(model, grid, uniform_flow(grid)),
                         doctest::Contains("admissible maximum"), StabilityError);
}

TEST_CASE("transition kernels are row-stochastic") {
    GridSpec grid = grid_1d(-1.0, 1.0, 21, 0.05, 10, {-1.0, 1.0});
    MFGModel model = constant_model(grid, 0.9, 0.8);
    TransitionKernels kernels = transition_kernel(build_generator(model, grid, uniform_flow(grid)));
    for (const auto& per_action : kernels.P)
        for (const auto& P : per_action)
            for (int x = 0; x < P.rows(); ++x) {
                double sum = 0.0;
                for (SparseMatrixRM::InnerIterator it(P, x); it; ++it) {
                    CHECK(it.value() >= -1e-12);
                    sum += it.value();
                }
                CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
            }
}

TEST_CASE("zero generator gives the identity kernel") {
    GridSpec grid = grid_1d(0.0, 1.0, 5, 1.0, 2, {0.0});
    MFGModel model = constant_model(grid, 0.0, 0.0);
    TransitionKernels kernels = transition_kernel(build_generator(model, grid, uniform_flow(grid)));
    for (int x = 0; x < 5; ++x) CHECK(kernels.P[0][0].coeff(x, x) == doctest::Approx(1.0));
}

TEST_CASE("single off-diagonal rate 10 with dt 0.05 splits half and half") {
    GridSpec grid = grid_1d(0.0, 1.0, 11, 0.5, 10, {0.0});
    MFGModel model = constant_model(grid, 1.0, 0.0);
    TransitionKernels kernels = transition_kernel(build_generator(model, grid, uniform_flow(grid)));
    const auto& P = kernels.P[0][0];
    CHECK(P.coeff(5, 5) == doctest::Approx(0.5));
    CHECK(P.coeff(5, 6) == doctest::Approx(0.5));
}

TEST_CASE("generator is consistent on the quadratic test function") {
    // (Q psi)(x) with psi = |x|^2 should equal tr(Sigma) + 2 b.x up to C*h.
    GridSpec grid = grid_1d(-1.0, 1.0, 41, 0.002, 10, {0.0});
    const double b = 0.8, sig2 = 1.1;
    MFGModel model = constant_model(grid, b, sig2);
    DiscreteGenerator gen = build_generator(model, grid, uniform_flow(grid));
    const auto& Q = gen.rates[0][0];

    Vector psi(grid.num_states());
    for (int x = 0; x < grid.num_states(); ++x) psi[x] = grid.state_coord(x).squaredNorm();

    const double h = grid.h();
    for (int x = 2; x + 2 < grid.num_states(); ++x) {
        double qpsi = 0.0;
        for (SparseMatrixRM::InnerIterator it(Q, x); it; ++it) qpsi += it.value() * psi[it.col()];
        double exact = sig2 + 2.0 * b * grid.state_coord(x)[0];
        CHECK(std::abs(qpsi - exact) <= 2.0 * std::abs(b) * h + 1e-9);
    }
}

TEST_CASE("reflecting boundary conserves mass under propagation") {
    GridSpec grid = grid_1d(-1.0, 1.0, 9, 0.02, 10, {1.0});
    MFGModel model = constant_model(grid, 2.0, 0.5);  // strong outward drift
    TransitionKernels kernels = transition_kernel(build_generator(model, grid, uniform_flow(grid)));
    Vector m = uniform_distribution(grid);
    for (int k = 0; k < grid.n_time; ++k) {
        Vector next = Vector::Zero(grid.num_states());
        for (int x = 0; x < grid.num_states(); ++x)
            for (SparseMatrixRM::InnerIterator it(kernels.P[k][0], x); it; ++it)
                next[it.col()] += m[x] * it.value();
        m = next;
        CHECK(m.sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(m.minCoeff() >= 0.0);
    }
}

TEST_CASE("2-D stencil handles diagonally dominant cross terms") {
    GridSpec grid;
    grid.horizon = 0.001;
    grid.n_time = 5;
    grid.state_dim = 2;
    grid.state_box = {{{-1.0, 1.0}, {-1.0, 1.0}}};
    grid.n_state = {9, 9};
    Vector a0 = Vector::Zero(2);
    grid.actions = {a0};
    grid.validate();

    MFGModel model;
    model.name = "cross";
    model.drift = [](double, const Vector&, const Vector&, const Vector&) {
        return Vector(Vector::Zero(2));
    };
    Matrix cov(2, 2);
    cov << 1.0, 0.4, 0.4, 0.8;
    Eigen::LLT<Matrix> llt(cov);
    Matrix sigma = llt.matrixL();
    model.diffusion = [sigma](double, const Vector&, const Vector&, const Vector&) {
        return sigma;
    };
    model.running_cost = [](double, const Vector&, const Vector&, const Vector&) { return 0.0; };
    model.terminal_cost = [](const Vector&, const Vector&) { return 0.0; };
    model.initial_distribution = uniform_distribution(grid);

    DiscreteGenerator gen = build_generator(model, grid, uniform_flow(grid));
    const auto& Q = gen.rates[0][0];
    const double h = grid.h();
    int x = grid.flat_index(4, 4);
    // positive correlation: diagonal ++ and -- neighbors carry Sigma01/(2h^2)
    CHECK(Q.coeff(x, grid.flat_index(5, 5)) == doctest::Approx(0.4 / (2 * h * h)));
    CHECK(Q.coeff(x, grid.flat_index(3, 3)) == doctest::Approx(0.4 / (2 * h * h)));
    CHECK(Q.coeff(x, grid.flat_index(5, 3)) == 0.0);
    // axial rates shed the cross part: (Sigma00 - |Sigma01|)/(2h^2)
    CHECK(Q.coeff(x, grid.flat_index(5, 4)) == doctest::Approx(0.6 / (2 * h * h)));

    // row sums still vanish
    for (int r = 0; r < Q.rows(); ++r) {
        double sum = 0.0;
        for (SparseMatrixRM::InnerIterator it(Q, r); it; ++it) sum += it.value();
        CHECK(std::abs(sum) <= 1e-10);
    }
}

TEST_CASE("2-D stencil rejects non-dominant cross-diffusion") {
    GridSpec grid;
    grid.horizon = 0.001;
    grid.n_time = 5;
    grid.state_dim = 2;
    grid.state_box = {{{-1.0, 1.0}, {-1.0, 1.0}}};
    grid.n_state = {5, 5};
    grid.actions = {Vector(Vector::Zero(2))};
    grid.validate();

    MFGModel model;
    model.name = "bad-cross";
    model.drift = [](double, const Vector&, const Vector&, const Vector&) {
        return Vector(Vector::Zero(2));
    };
    model.diffusion = [](double, const Vector&, const Vector&, const Vector&) {
        Matrix cov(2, 2);  // |Sigma01| = 1.1 > min(Sigma00, Sigma11) = 1
        cov << 1.3, 1.1, 1.1, 1.0;
        return Matrix(cov.llt().matrixL());
    };
    model.running_cost = [](double, const Vector&, const Vector&, const Vector&) { return 0.0; };
    model.terminal_cost = [](const Vector&, const Vector&) { return 0.0; };
    model.initial_distribution = uniform_distribution(grid);

    CHECK_THROWS_AS(build_generator(model, grid, uniform_flow(grid)), DiscretizationError);
}
