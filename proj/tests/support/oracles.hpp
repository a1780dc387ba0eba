// Independent reference implementations used as test oracles. Everything here
// is hand-rolled on plain vectors and deliberately shares no code with the
// library implementation.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;  // row-major

// --------------------------------------------------------------------------
// moment estimators
// --------------------------------------------------------------------------

// Textbook two-pass sample covariance with the T-1 divisor.
// data is T x N (rows are months).
inline Mat two_pass_covariance(const Mat& data) {
    const size_t T = data.size();
    const size_t N = data.front().size();
    Vec mean(N, 0.0);
    for (size_t t = 0; t < T; ++t)
        for (size_t i = 0; i < N; ++i) mean[i] += data[t][i];
    for (size_t i = 0; i < N; ++i) mean[i] /= static_cast<double>(T);

    Mat cov(N, Vec(N, 0.0));
    for (size_t t = 0; t < T; ++t)
        for (size_t i = 0; i < N; ++i)
            for (size_t j = 0; j < N; ++j)
                cov[i][j] += (data[t][i] - mean[i]) * (data[t][j] - mean[j]);
    for (size_t i = 0; i < N; ++i)
        for (size_t j = 0; j < N; ++j) cov[i][j] /= static_cast<double>(T - 1);
    return cov;
}

inline Vec two_pass_betas(const Mat& data, const Vec& bench) {
    const size_t T = data.size();
    const size_t N = data.front().size();
    double bench_mean = 0.0;
    for (size_t t = 0; t < T; ++t) bench_mean += bench[t];
    bench_mean /= static_cast<double>(T);

    double bench_var = 0.0;
    for (size_t t = 0; t < T; ++t)
        bench_var += (bench[t] - bench_mean) * (bench[t] - bench_mean);
    bench_var /= static_cast<double>(T - 1);

    Vec mean(N, 0.0);
    for (size_t t = 0; t < T; ++t)
        for (size_t i = 0; i < N; ++i) mean[i] += data[t][i];
    for (size_t i = 0; i < N; ++i) mean[i] /= static_cast<double>(T);

    Vec betas(N, 0.0);
    for (size_t i = 0; i < N; ++i) {
        double cov = 0.0;
        for (size_t t = 0; t < T; ++t)
            cov += (data[t][i] - mean[i]) * (bench[t] - bench_mean);
        cov /= static_cast<double>(T - 1);
        betas[i] = cov / bench_var;
    }
    return betas;
}

// --------------------------------------------------------------------------
// small dense solves
// --------------------------------------------------------------------------

// Gauss-Jordan with partial pivoting.
inline Vec gauss_solve(Mat a, Vec b) {
    const size_t n = a.size();
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (std::fabs(a[pivot][col]) < 1e-300)
            throw std::runtime_error("oracle: singular matrix");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        const double inv = 1.0 / a[col][col];
        for (size_t j = 0; j < n; ++j) a[col][j] *= inv;
        b[col] *= inv;
        for (size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col];
            if (f == 0.0) continue;
            for (size_t j = 0; j < n; ++j) a[r][j] -= f * a[col][j];
            b[r] -= f * b[col];
        }
    }
    return b;
}

// --------------------------------------------------------------------------
// strategy weight rules
// --------------------------------------------------------------------------

// Unconstrained weights proportional to the inverse-covariance row sums;
// most-negative asset removed and re-solved until long-only.
inline Vec ref_min_variance(const Mat& cov) {
    const size_t n = cov.size();
    std::vector<size_t> active(n);
    for (size_t i = 0; i < n; ++i) active[i] = i;

    Vec full(n, 0.0);
    while (true) {
        const size_t k = active.size();
        Mat sub(k, Vec(k));
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < k; ++j) sub[i][j] = cov[active[i]][active[j]];
        Vec x = gauss_solve(sub, Vec(k, 1.0));

        size_t worst = k;
        double worst_value = 0.0;
        for (size_t i = 0; i < k; ++i)
            if (x[i] < worst_value) { worst_value = x[i]; worst = i; }
        if (worst == k) {
            double sum = 0.0;
            for (double v : x) sum += v;
            for (size_t i = 0; i < k; ++i) full[active[i]] = x[i] / sum;
            return full;
        }
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(worst));
        if (active.empty()) throw std::runtime_error("oracle: empty active set");
    }
}

inline Vec ref_inverse_vol(const Mat& cov) {
    const size_t n = cov.size();
    Vec w(n);
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i) {
        w[i] = 1.0 / std::sqrt(cov[i][i]);
        sum += w[i];
    }
    for (double& v : w) v /= sum;
    return w;
}

inline Vec ref_low_beta(const Vec& betas, double floor) {
    Vec w(betas.size());
    double sum = 0.0;
    for (size_t i = 0; i < betas.size(); ++i) {
        w[i] = 1.0 / std::max(betas[i], floor);
        sum += w[i];
    }
    for (double& v : w) v /= sum;
    return w;
}

inline double portfolio_variance(const Mat& cov, const Vec& w) {
    double total = 0.0;
    for (size_t i = 0; i < w.size(); ++i)
        for (size_t j = 0; j < w.size(); ++j) total += w[i] * cov[i][j] * w[j];
    return total;
}

// --------------------------------------------------------------------------
// brute-force searches
// --------------------------------------------------------------------------

struct GridResult {
    Vec weights;
    double variance = 0.0;
};

// Exhaustive search over the simplex at the given step; N = 2 or 3.
inline GridResult grid_min_variance(const Mat& cov, double step) {
    const size_t n = cov.size();
    const int cells = static_cast<int>(std::lround(1.0 / step));
    GridResult best;
    best.variance = std::numeric_limits<double>::infinity();
    if (n == 2) {
        for (int i = 0; i <= cells; ++i) {
            const double w0 = i * step;
            const Vec w{w0, 1.0 - w0};
            const double v = portfolio_variance(cov, w);
            if (v < best.variance) best = {w, v};
        }
    } else if (n == 3) {
        for (int i = 0; i <= cells; ++i) {
            for (int j = 0; j <= cells - i; ++j) {
                const double w0 = i * step;
                const double w1 = j * step;
                const Vec w{w0, w1, 1.0 - w0 - w1};
                const double v = portfolio_variance(cov, w);
                if (v < best.variance) best = {w, v};
            }
        }
    } else {
        throw std::runtime_error("oracle: grid search supports N in {2,3}");
    }
    return best;
}

inline double max_rc_deviation(const Mat& cov, const Vec& w) {
    const size_t n = w.size();
    Vec sw(n, 0.0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) sw[i] += cov[i][j] * w[j];
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) total += w[i] * sw[i];
    double dev = 0.0;
    for (size_t i = 0; i < n; ++i)
        dev = std::max(dev, std::fabs(w[i] * sw[i] / total - 1.0 / static_cast<double>(n)));
    return dev;
}

// Scan w1 in [0,1] for the two-asset split equalizing risk contributions.
inline double scan_erc_two_assets(const Mat& cov, double step) {
    double best_w1 = 0.0;
    double best_gap = std::numeric_limits<double>::infinity();
    const long cells = std::lround(1.0 / step);
    for (long i = 0; i <= cells; ++i) {
        const double w1 = static_cast<double>(i) * step;
        const double w2 = 1.0 - w1;
        const double rc1 = w1 * (cov[0][0] * w1 + cov[0][1] * w2);
        const double rc2 = w2 * (cov[1][0] * w1 + cov[1][1] * w2);
        const double gap = std::fabs(rc1 - rc2);
        if (gap < best_gap) { best_gap = gap; best_w1 = w1; }
    }
    return best_w1;
}

// Simplex sweep (N=3) minimizing the worst risk-contribution deviation.
inline GridResult grid_erc_three_assets(const Mat& cov, double step) {
    const int cells = static_cast<int>(std::lround(1.0 / step));
    GridResult best;
    double best_dev = std::numeric_limits<double>::infinity();
    for (int i = 1; i < cells; ++i) {
        for (int j = 1; j < cells - i; ++j) {
            const Vec w{i * step, j * step, 1.0 - (i + j) * step};
            const double dev = max_rc_deviation(cov, w);
            if (dev < best_dev) {
                best_dev = dev;
                best = {w, dev};
            }
        }
    }
    best.variance = best_dev;
    return best;
}

// --------------------------------------------------------------------------
// straight-line backtest loop
// --------------------------------------------------------------------------

struct RefStrategySeries {
    std::vector<double> gross;
    std::vector<double> turnover;               // entry 0 is 0
    std::vector<std::vector<double>> net;       // [cost][month]
    std::vector<std::vector<double>> cum_index; // [cost][month]
    std::vector<Vec> weights;
};

enum class RefStrategy { Balanced, EqualWeight, MinVariance, NaiveRiskParity, LowBeta };

// Second implementation of the rebalancing loop: estimate over the trailing
// window, set targets, realize returns, drift, charge costs on
// min(buys, sells). The first month's purchase carries no cost.
inline RefStrategySeries reference_backtest(const Mat& returns, int window,
                                            const Vec& cost_rates, RefStrategy strategy,
                                            const Vec& balanced, double low_beta_floor) {
    const int T = static_cast<int>(returns.size());
    const size_t N = returns.front().size();
    const int M = T - window;

    RefStrategySeries out;
    out.gross.resize(static_cast<size_t>(M));
    out.turnover.assign(static_cast<size_t>(M), 0.0);
    out.weights.resize(static_cast<size_t>(M));

    Vec bench(static_cast<size_t>(T), 0.0);
    if (strategy == RefStrategy::LowBeta)
        for (int t = 0; t < T; ++t)
            for (size_t i = 0; i < N; ++i)
                bench[static_cast<size_t>(t)] += balanced[i] * returns[static_cast<size_t>(t)][i];

    Vec prev;
    for (int t = window; t < T; ++t) {
        Mat slice(returns.begin() + (t - window), returns.begin() + t);
        Vec target;
        switch (strategy) {
            case RefStrategy::Balanced: target = balanced; break;
            case RefStrategy::EqualWeight:
                target.assign(N, 1.0 / static_cast<double>(N));
                break;
            case RefStrategy::MinVariance:
                target = ref_min_variance(two_pass_covariance(slice));
                break;
            case RefStrategy::NaiveRiskParity:
                target = ref_inverse_vol(two_pass_covariance(slice));
                break;
            case RefStrategy::LowBeta: {
                Vec window_bench(bench.begin() + (t - window), bench.begin() + t);
                target = ref_low_beta(two_pass_betas(slice, window_bench), low_beta_floor);
                break;
            }
        }

        const int k = t - window;
        if (k > 0) {
            const auto& last_month = returns[static_cast<size_t>(t - 1)];
            double growth = 1.0;
            for (size_t i = 0; i < N; ++i) growth += prev[i] * last_month[i];
            Vec drifted(N);
            for (size_t i = 0; i < N; ++i) drifted[i] = prev[i] * (1.0 + last_month[i]) / growth;
            double buys = 0.0, sells = 0.0;
            for (size_t i = 0; i < N; ++i) {
                const double diff = target[i] - drifted[i];
                if (diff > 0.0) buys += diff;
                else sells -= diff;
            }
            out.turnover[static_cast<size_t>(k)] = std::min(buys, sells);
        }

        double gross = 0.0;
        for (size_t i = 0; i < N; ++i) gross += target[i] * returns[static_cast<size_t>(t)][i];
        out.gross[static_cast<size_t>(k)] = gross;
        out.weights[static_cast<size_t>(k)] = target;
        prev = target;
    }

    out.net.assign(cost_rates.size(), std::vector<double>(static_cast<size_t>(M)));
    out.cum_index.assign(cost_rates.size(), std::vector<double>(static_cast<size_t>(M)));
    for (size_t c = 0; c < cost_rates.size(); ++c) {
        double index = 1.0;
        for (int k = 0; k < M; ++k) {
            const double net = out.gross[static_cast<size_t>(k)] -
                               cost_rates[c] * out.turnover[static_cast<size_t>(k)];
            out.net[c][static_cast<size_t>(k)] = net;
            index *= 1.0 + net;
            out.cum_index[c][static_cast<size_t>(k)] = index;
        }
    }
    return out;
}

}  // namespace oracle
