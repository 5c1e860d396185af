#include "mfglp/model.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace mfglp {

namespace {

std::string point_string(double t, const Vector& x, const Vector& a) {
    std::ostringstream os;
    os << "t=" << t << ", x=(";
    for (int i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
    os << "), a=(";
    for (int i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
    os << ")";
    return os.str();
}

double param_or(const std::map<std::string, double>& params, const std::string& key,
                double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

}  // namespace

Vector grid_mean(const GridSpec& grid, const Vector& mu) {
    Vector mean = Vector::Zero(grid.state_dim);
    for (int x = 0; x < grid.num_states(); ++x)
        if (mu[x] != 0.0) mean += mu[x] * grid.state_coord(x);
    return mean;
}

void MFGModel::validate(const GridSpec& grid) const {
    if (!drift || !diffusion || !running_cost || !terminal_cost)
        throw ModelError("MFGModel '" + name + "': missing coefficient evaluator");
    if (initial_distribution.size() != grid.num_states())
        throw ModelError("MFGModel '" + name + "': initial_distribution size mismatch");
    if (initial_distribution.minCoeff() < 0.0)
        throw ModelError("MFGModel '" + name + "': initial_distribution has negative mass");
    if (std::abs(initial_distribution.sum() - 1.0) > 1e-12)
        throw ModelError("MFGModel '" + name + "': initial_distribution does not sum to 1");
}

EvalResult evaluate(const MFGModel& model, const GridSpec& grid, double t,
                    const Vector& x, const Vector& a, const Vector& mu) {
    EvalResult out;
    out.drift = model.drift(t, x, a, mu);
    Matrix sigma = model.diffusion(t, x, a, mu);
    out.cost = model.running_cost(t, x, a, mu);

    const int d = grid.state_dim;
    if (out.drift.size() != d || sigma.rows() != d || sigma.cols() != d)
        throw ModelError("model '" + model.name + "': coefficient shape mismatch at " +
                         point_string(t, x, a));
    if (!out.drift.allFinite() || !sigma.allFinite() || !std::isfinite(out.cost))
        throw ModelError("model '" + model.name + "': non-finite coefficient at " +
                         point_string(t, x, a));
    double asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12)
        throw ModelError("model '" + model.name + "': diffusion not symmetric at " +
                         point_string(t, x, a));
    out.covariance = sigma * sigma.transpose();
    return out;
}

NondegeneracyReport check_nondegeneracy(const MFGModel& model, const GridSpec& grid,
                                        double lambda_min) {
    NondegeneracyReport report;
    report.lambda_min = lambda_min;
    report.min_eigenvalue = std::numeric_limits<double>::infinity();
    MeanFieldFlow ref = uniform_flow(grid);
    const double dt = grid.dt();
    for (int k = 0; k <= grid.n_time; ++k) {
        double t = std::min(k * dt, grid.horizon);
        Vector mu = ref.m.row(std::min(k, grid.n_time)).transpose();
        for (int x = 0; x < grid.num_states(); ++x) {
            Vector coord = grid.state_coord(x);
            for (int a = 0; a < grid.num_actions(); ++a) {
                EvalResult e = evaluate(model, grid, t, coord, grid.actions[a], mu);
                double lam;
                if (grid.state_dim == 1) {
                    lam = e.covariance(0, 0);
                } else {
                    Eigen::SelfAdjointEigenSolver<Matrix> es(e.covariance);
                    lam = es.eigenvalues().minCoeff();
                }
                if (lam < report.min_eigenvalue) {
                    report.min_eigenvalue = lam;
                    report.at_time = t;
                    report.at_state = x;
                    report.at_action = a;
                }
            }
        }
    }
    report.passed = report.min_eigenvalue >= lambda_min;
    return report;
}

Vector delta_distribution(const GridSpec& grid, const Vector& at) {
    Vector rho = Vector::Zero(grid.num_states());
    rho[grid.nearest_node(at)] = 1.0;
    return rho;
}

Vector uniform_distribution(const GridSpec& grid) {
    return Vector::Constant(grid.num_states(), 1.0 / grid.num_states());
}

Vector gaussian_distribution(const GridSpec& grid, const Vector& mean, const Vector& stddev) {
    Vector rho(grid.num_states());
    for (int x = 0; x < grid.num_states(); ++x) {
        Vector coord = grid.state_coord(x);
        double q = 0.0;
        for (int d = 0; d < grid.state_dim; ++d) {
            if (!(stddev[d] > 0.0)) throw ConfigError("gaussian_distribution: stddev must be > 0");
            double z = (coord[d] - mean[d]) / stddev[d];
            q += 0.5 * z * z;
        }
        rho[x] = std::exp(-q);
    }
    rho /= rho.sum();
    return rho;
}

std::vector<std::string> builtin_model_names() { return {"example1", "example2", "lq_crowd"}; }

MFGModel make_builtin_model(const std::string& name, const GridSpec& grid,
                            const std::map<std::string, double>& params) {
    grid.validate();
    MFGModel model;
    model.name = name;
    const int d = grid.state_dim;

    auto check_params = [&](std::initializer_list<std::string> allowed) {
        for (const auto& [key, value] : params) {
            (void)value;
            bool ok = false;
            for (const auto& k : allowed)
                if (key == k) ok = true;
            if (!ok)
                throw ConfigError("model '" + name + "': unknown parameter '" + key + "'");
        }
    };

    if (name == "example1") {
        check_params({"sigma0"});
        const double sigma0 = param_or(params, "sigma0", 0.0);
        model.coupling_kind = CouplingKind::none;
        model.drift = [](double, const Vector&, const Vector& a, const Vector&) { return a; };
        model.diffusion = [sigma0, d](double, const Vector&, const Vector&, const Vector&) {
            return Matrix(sigma0 * Matrix::Identity(d, d));
        };
        model.running_cost = [](double, const Vector&, const Vector&, const Vector&) {
            return 0.0;
        };
        model.terminal_cost = [](const Vector&, const Vector&) { return 0.0; };
        Vector center(d);
        for (int i = 0; i < d; ++i)
            center[i] = 0.5 * (grid.state_box[i][0] + grid.state_box[i][1]);
        model.initial_distribution = delta_distribution(grid, center);
    } else if (name == "example2") {
        check_params({"x0"});
        if (d != 1) throw ConfigError("model 'example2' is one-dimensional");
        const double x0 = param_or(params, "x0", 0.5);
        model.coupling_kind = CouplingKind::mean_moment;
        model.drift = [](double, const Vector&, const Vector& a, const Vector&) { return a; };
        model.diffusion = [](double, const Vector&, const Vector&, const Vector&) {
            return Matrix(Matrix::Zero(1, 1));
        };
        model.running_cost = [x0, grid](double t, const Vector&, const Vector&,
                                        const Vector& mu) {
            double dev = x0 + t - grid_mean(grid, mu)[0];
            return 1.0 + dev * dev;
        };
        model.terminal_cost = [](const Vector& x, const Vector&) { return -std::abs(x[0]); };
        Vector at(1);
        at[0] = x0;
        model.initial_distribution = delta_distribution(grid, at);
    } else if (name == "lq_crowd") {
        check_params({"sigma0", "action_weight", "crowd_weight", "terminal_weight"});
        const double sigma0 = param_or(params, "sigma0", std::sqrt(2.0));
        const double wa = param_or(params, "action_weight", 0.5);
        const double wc = param_or(params, "crowd_weight", 1.0);
        const double wg = param_or(params, "terminal_weight", 1.0);
        model.coupling_kind = CouplingKind::mean_moment;
        model.drift = [](double, const Vector&, const Vector& a, const Vector&) { return a; };
        model.diffusion = [sigma0, d](double, const Vector&, const Vector&, const Vector&) {
            return Matrix(sigma0 * Matrix::Identity(d, d));
        };
        model.running_cost = [wa, wc, grid](double, const Vector& x, const Vector& a,
                                            const Vector& mu) {
            return wa * a.squaredNorm() + wc * (x - grid_mean(grid, mu)).squaredNorm();
        };
        model.terminal_cost = [wg](const Vector& x, const Vector&) {
            return wg * x.squaredNorm();
        };
        model.initial_distribution = delta_distribution(grid, Vector::Zero(d));
    } else {
        throw ConfigError("unknown builtin model '" + name + "'");
    }
    model.validate(grid);
    return model;
}

}  // namespace mfglp
