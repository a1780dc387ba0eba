#include "riskonly/strategies.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>
#include <string>

#include "riskonly/errors.hpp"

namespace riskonly {

std::string_view to_string(StrategyId id) {
    switch (id) {
        case StrategyId::Balanced: return "balanced";
        case StrategyId::EqualWeight: return "equal_weight";
        case StrategyId::MinVariance: return "min_variance";
        case StrategyId::RiskParity: return "risk_parity";
        case StrategyId::LowBeta: return "low_beta";
    }
    return "unknown";
}

std::optional<StrategyId> strategy_from_string(std::string_view tag) {
    for (StrategyId id : kAllStrategies)
        if (tag == to_string(id)) return id;
    return std::nullopt;
}

namespace {

// Solves A x = b for symmetric A via eigendecomposition, rejecting matrices
// that are singular to working precision (relative eigenvalue cutoff 1e-12).
Eigen::VectorXd solve_symmetric(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    if (eig.info() != Eigen::Success)
        throw Error(Errc::SingularCovariance, "eigendecomposition failed");
    const auto& values = eig.eigenvalues();
    const double max_abs = values.cwiseAbs().maxCoeff();
    const double min_abs = values.cwiseAbs().minCoeff();
    if (!(max_abs > 0.0) || min_abs <= 1e-12 * max_abs)
        throw Error(Errc::SingularCovariance,
                    "covariance matrix singular to working precision");
    return eig.eigenvectors() *
           (eig.eigenvalues().cwiseInverse().asDiagonal() *
            (eig.eigenvectors().transpose() * b));
}

WeightVector make_allocation(Eigen::VectorXd w, int as_of, StrategyId id) {
    w /= w.sum();
    return WeightVector{std::move(w), as_of, std::string(to_string(id))};
}

}  // namespace

WeightVector min_variance_weights(const CovarianceEstimate& cov) {
    const Eigen::Index n = cov.matrix.rows();
    if (n < 1 || cov.matrix.cols() != n)
        throw Error(Errc::SingularCovariance, "covariance matrix is not square");

    std::vector<Eigen::Index> active(static_cast<size_t>(n));
    std::iota(active.begin(), active.end(), 0);

    Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
    while (true) {
        if (active.empty())
            throw Error(Errc::EmptyActiveSet, "long-only repair removed every asset");
        const auto k = static_cast<Eigen::Index>(active.size());
        Eigen::MatrixXd sub(k, k);
        for (Eigen::Index i = 0; i < k; ++i)
            for (Eigen::Index j = 0; j < k; ++j)
                sub(i, j) = cov.matrix(active[static_cast<size_t>(i)],
                                       active[static_cast<size_t>(j)]);
        const Eigen::VectorXd x = solve_symmetric(sub, Eigen::VectorXd::Ones(k));

        Eigen::Index worst = -1;
        double worst_value = 0.0;
        for (Eigen::Index i = 0; i < k; ++i) {
            if (x(i) < worst_value) {
                worst_value = x(i);
                worst = i;
            }
        }
        if (worst < 0) {
            full.setZero();
            for (Eigen::Index i = 0; i < k; ++i)
                full(active[static_cast<size_t>(i)]) = x(i);
            break;
        }
        active.erase(active.begin() + worst);
    }
    return make_allocation(std::move(full), cov.window_end, StrategyId::MinVariance);
}

WeightVector single_factor_min_variance(const SingleFactorModel& model) {
    const Eigen::Index n = model.betas.size();
    if (model.idio_vars.size() != n)
        throw Error(Errc::ConfigError, "beta and idiosyncratic-variance lengths differ");
    if (!(model.idio_vars.array() > 0.0).all())
        throw Error(Errc::ZeroVarianceAsset, "idiosyncratic variances must be positive");
    if (model.factor_var < 0.0)
        throw Error(Errc::ConfigError, "factor variance must be nonnegative");

    Eigen::MatrixXd sigma = model.factor_var * (model.betas * model.betas.transpose());
    sigma.diagonal() += model.idio_vars;
    return min_variance_weights(CovarianceEstimate{std::move(sigma), 0, 0});
}

WeightVector risk_parity_weights(const CovarianceEstimate& cov, RiskParityMode mode,
                                 const ErcOptions& options) {
    const Eigen::Index n = cov.matrix.rows();
    const Eigen::VectorXd variances = cov.matrix.diagonal();
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(variances(i) > 0.0))
            throw Error(Errc::ZeroVarianceAsset,
                        "asset " + std::to_string(i) + " has zero variance");

    if (mode == RiskParityMode::Naive) {
        Eigen::VectorXd w = variances.cwiseSqrt().cwiseInverse();
        return make_allocation(std::move(w), cov.window_end, StrategyId::RiskParity);
    }

    // Cyclical fixed point: holding the other coordinates, each x_i solves
    // x_i (Sigma x)_i = c with c the current average risk contribution,
    // i.e. the positive root of sigma_ii x^2 + beta_i x - c = 0.
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::VectorXd sx = cov.matrix * x;
            const double c = x.dot(sx) / static_cast<double>(n);
            const double beta = sx(i) - variances(i) * x(i);
            x(i) = (-beta + std::sqrt(beta * beta + 4.0 * variances(i) * c)) /
                   (2.0 * variances(i));
        }
        x /= x.sum();

        const Eigen::VectorXd sx = cov.matrix * x;
        const double total = x.dot(sx);
        const double target = 1.0 / static_cast<double>(n);
        const double deviation =
            ((x.cwiseProduct(sx) / total).array() - target).abs().maxCoeff();
        if (deviation < options.tolerance)
            return make_allocation(std::move(x), cov.window_end, StrategyId::RiskParity);
    }
    throw Error(Errc::NoConvergence,
                "equal-risk-contribution iteration did not converge in " +
                    std::to_string(options.max_sweeps) + " sweeps");
}

WeightVector low_beta_weights(const BetaEstimate& betas, double floor) {
    if (!(floor > 0.0))
        throw Error(Errc::ConfigError, "low-beta floor must be positive");
    Eigen::VectorXd w = betas.betas.cwiseMax(floor).cwiseInverse();
    return make_allocation(std::move(w), betas.window_end, StrategyId::LowBeta);
}

WeightVector equal_weights(int n) {
    if (n < 1) throw Error(Errc::TooFewAssets, "asset count must be >= 1");
    return WeightVector{Eigen::VectorXd::Constant(n, 1.0 / n), 0,
                        std::string(to_string(StrategyId::EqualWeight))};
}

WeightVector balanced_weights(const std::vector<std::string>& assets,
                              const std::map<std::string, double>& assignment) {
    Eigen::VectorXd w(static_cast<Eigen::Index>(assets.size()));
    double sum = 0.0;
    for (size_t i = 0; i < assets.size(); ++i) {
        const auto it = assignment.find(assets[i]);
        if (it == assignment.end())
            throw Error(Errc::UnassignedAsset,
                        "no fraction assigned to asset '" + assets[i] + "'");
        if (it->second < 0.0)
            throw Error(Errc::WeightSumMismatch,
                        "negative fraction for asset '" + assets[i] + "'");
        w(static_cast<Eigen::Index>(i)) = it->second;
        sum += it->second;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw Error(Errc::WeightSumMismatch,
                    "fractions sum to " + std::to_string(sum) + ", expected 1");
    return WeightVector{std::move(w), 0, std::string(to_string(StrategyId::Balanced))};
}

}  // namespace riskonly
