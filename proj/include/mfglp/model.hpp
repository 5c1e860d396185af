#pragma once

#include <functional>
#include <map>
#include <string>

#include "mfglp/types.hpp"

namespace mfglp {

enum class CouplingKind { none, mean_moment, full_density };

/// A mean field game instance on a fixed grid: coefficient evaluators with
/// mean-field coupling plus the initial state distribution rho.
///
/// Evaluator arguments: time t, state x (state_dim), action a (state_dim),
/// and mu, a probability vector over the state grid. `diffusion` returns the
/// matrix sigma; the generator uses sigma*sigma^T.
struct MFGModel {
    using DriftFn = std::function<Vector(double, const Vector&, const Vector&, const Vector&)>;
    using DiffusionFn = std::function<Matrix(double, const Vector&, const Vector&, const Vector&)>;
    using RunningCostFn = std::function<double(double, const Vector&, const Vector&, const Vector&)>;
    using TerminalCostFn = std::function<double(const Vector&, const Vector&)>;

    std::string name;
    DriftFn drift;
    DiffusionFn diffusion;
    RunningCostFn running_cost;
    TerminalCostFn terminal_cost;
    Vector initial_distribution;
    CouplingKind coupling_kind = CouplingKind::none;

    void validate(const GridSpec& grid) const;
};

struct EvalResult {
    Vector drift;
    Matrix covariance;  // sigma * sigma^T
    double cost;
};

/// Evaluates all running coefficients at one point and checks the outputs:
/// finite everywhere, covariance symmetric PSD. Throws ModelError naming
/// (t, x, a) otherwise.
EvalResult evaluate(const MFGModel& model, const GridSpec& grid, double t,
                    const Vector& x, const Vector& a, const Vector& mu);

struct NondegeneracyReport {
    double min_eigenvalue = 0.0;
    double lambda_min = 0.0;
    bool passed = false;
    double at_time = 0.0;
    int at_state = 0;
    int at_action = 0;
};

/// Scans sigma*sigma^T over every (time node, state, action) against a
/// uniform reference flow and reports the smallest eigenvalue seen. Advisory
/// only: degenerate models stay solvable.
NondegeneracyReport check_nondegeneracy(const MFGModel& model, const GridSpec& grid,
                                        double lambda_min);

/// Mean of mu under the grid coordinates, one entry per state dimension.
Vector grid_mean(const GridSpec& grid, const Vector& mu);

// --- builtin models -------------------------------------------------------

/// Initial-distribution helpers. All return a normalized vector on the grid.
Vector delta_distribution(const GridSpec& grid, const Vector& at);
Vector uniform_distribution(const GridSpec& grid);
Vector gaussian_distribution(const GridSpec& grid, const Vector& mean, const Vector& stddev);

/// Builds a builtin model by name. Supported names:
///   "example1"  zero running and terminal cost, drift = a, sigma = sigma0*I
///               (params: sigma0, default 0). Every policy is an equilibrium.
///   "example2"  deterministic crowd-following game: drift = a on A = {-1,1},
///               sigma = 0, f = 1 + (x0 + t - mean(mu))^2, g = -|x|
///               (params: x0, default 0.5). rho defaults to a point mass at x0.
///   "lq_crowd"  drift = a, sigma = sigma0*I (default sqrt(2)),
///               f = action_weight*|a|^2 + crowd_weight*|x - mean(mu)|^2,
///               g = terminal_weight*|x|^2.
/// Unknown names or parameters throw ConfigError.
MFGModel make_builtin_model(const std::string& name, const GridSpec& grid,
                            const std::map<std::string, double>& params = {});

std::vector<std::string> builtin_model_names();

}  // namespace mfglp
