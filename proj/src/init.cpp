#include "mianfis/init.hpp"

#include "mianfis/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace mianfis {

namespace {

std::size_t check_points(const PointSet& points) {
    if (points.empty()) throw DomainError("point set is empty");
    const std::size_t dim = points.front().size();
    if (dim == 0) throw DomainError("points have no features");
    for (const auto& p : points) {
        if (p.size() != dim) throw DomainError("points have inconsistent dimensionality");
    }
    return dim;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

void update_memberships(const PointSet& points, const PointSet& centers, double m, PointSet& u) {
    const std::size_t k = centers.size();
    const double power = 1.0 / (m - 1.0);
    std::vector<double> d2(k);
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::size_t zeros = 0;
        for (std::size_t c = 0; c < k; ++c) {
            d2[c] = sq_dist(points[i], centers[c]);
            if (d2[c] == 0.0) ++zeros;
        }
        auto& row = u[i];
        if (zeros > 0) {
            for (std::size_t c = 0; c < k; ++c) row[c] = d2[c] == 0.0 ? 1.0 / static_cast<double>(zeros) : 0.0;
            continue;
        }
        // u_ic = 1 / sum_l (d_ic^2 / d_il^2)^{1/(m-1)}
        for (std::size_t c = 0; c < k; ++c) {
            double denom = 0.0;
            for (std::size_t l = 0; l < k; ++l) denom += std::pow(d2[c] / d2[l], power);
            row[c] = 1.0 / denom;
        }
    }
}

}  // namespace

double fcm_objective(const PointSet& points, const PointSet& centers, const PointSet& memberships, double m) {
    double j = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t c = 0; c < centers.size(); ++c) {
            j += std::pow(memberships[i][c], m) * sq_dist(points[i], centers[c]);
        }
    }
    return j;
}

FcmResult fcm(const PointSet& points, std::size_t k, const FcmOptions& options) {
    if (k == 0) throw DomainError("FCM needs at least one cluster");
    if (points.size() < k) {
        throw DomainError("FCM needs at least as many points as clusters (" + std::to_string(points.size()) + " < " +
                          std::to_string(k) + ")");
    }
    const std::size_t dim = check_points(points);
    if (!(options.fuzzifier > 1.0)) throw DomainError("FCM fuzzifier must be > 1");
    if (options.max_iter < 1) throw DomainError("FCM max_iter must be >= 1");

    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(options.seed);
    std::shuffle(order.begin(), order.end(), rng);

    FcmResult res;
    for (std::size_t c = 0; c < k; ++c) res.centers.push_back(points[order[c]]);
    res.memberships.assign(points.size(), std::vector<double>(k, 0.0));

    const double m = options.fuzzifier;
    for (int it = 1; it <= options.max_iter; ++it) {
        update_memberships(points, res.centers, m, res.memberships);

        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            std::vector<double> num(dim, 0.0);
            double den = 0.0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                const double w = std::pow(res.memberships[i][c], m);
                den += w;
                for (std::size_t j = 0; j < dim; ++j) num[j] += w * points[i][j];
            }
            if (den > 0.0) {
                for (auto& v : num) v /= den;
                shift = std::max(shift, std::sqrt(sq_dist(num, res.centers[c])));
                res.centers[c] = std::move(num);
            }
        }
        res.iterations = it;
        res.objective.push_back(fcm_objective(points, res.centers, res.memberships, m));
        if (shift < options.tol) break;
    }
    return res;
}

std::string to_string(InitStrategy s) { return s == InitStrategy::fcm ? "fcm" : "random"; }

InitStrategy parse_init_strategy(const std::string& text) {
    if (text == "fcm") return InitStrategy::fcm;
    if (text == "random") return InitStrategy::random;
    throw DomainError("unknown init strategy '" + text + "' (expected fcm or random)");
}

MiAnfisModel init_model(const BagDataset& ds, std::size_t rules, const InitConfig& config) {
    require_valid(ds);
    if (rules == 0) throw DomainError("number of rules must be >= 1");
    if (!(config.sigma_init > 0.0) || !std::isfinite(config.sigma_init)) {
        throw DomainError("sigma_init must be positive and finite");
    }
    if (!std::isfinite(config.b_init)) throw DomainError("b_init must be finite");
    const std::size_t dim = ds.dim;

    PointSet centers;
    if (config.strategy == InitStrategy::fcm) {
        const auto positives = collect_positive_instances(ds);
        if (positives.empty()) throw DomainError("FCM initialization needs at least one positive bag");
        FcmOptions opts;
        opts.seed = config.seed;
        centers = fcm(positives, rules, opts).centers;
    } else {
        std::vector<double> lo(dim, std::numeric_limits<double>::infinity());
        std::vector<double> hi(dim, -std::numeric_limits<double>::infinity());
        for (const auto& bag : ds.bags) {
            for (std::size_t i = 0; i < bag.size(); ++i) {
                for (std::size_t j = 0; j < dim; ++j) {
                    lo[j] = std::min(lo[j], bag.instances(i, j));
                    hi[j] = std::max(hi[j], bag.instances(i, j));
                }
            }
        }
        std::mt19937_64 rng(config.seed);
        for (std::size_t r = 0; r < rules; ++r) {
            std::vector<double> c(dim);
            for (std::size_t j = 0; j < dim; ++j) {
                std::uniform_real_distribution<double> u(lo[j], hi[j]);
                c[j] = lo[j] < hi[j] ? u(rng) : lo[j];
            }
            centers.push_back(std::move(c));
        }
    }

    MiAnfisModel model;
    model.alpha_premise = config.alpha_premise;
    model.alpha_consequent = config.alpha_consequent;
    model.order = config.order;
    for (const auto& c : centers) {
        MiRule rule;
        for (std::size_t j = 0; j < dim; ++j) rule.premise.emplace_back(c[j], config.sigma_init);
        rule.consequent.assign(dim + 1, 0.0);
        rule.consequent[0] = config.b_init;
        model.rules.push_back(std::move(rule));
    }
    validate_model(model);
    return model;
}

std::vector<double> PcaMap::project(std::span<const double> x) const {
    if (x.size() != input_dim()) {
        throw DomainError("PCA expects " + std::to_string(input_dim()) + " features, got " + std::to_string(x.size()));
    }
    std::vector<double> out(output_dim(), 0.0);
    for (std::size_t j = 0; j < input_dim(); ++j) {
        const double centered = x[j] - mean[j];
        for (std::size_t c = 0; c < output_dim(); ++c) out[c] += centered * basis[j][c];
    }
    return out;
}

PcaMap pca_fit(const PointSet& points, std::size_t d) {
    const std::size_t dim = check_points(points);
    if (d == 0) throw DomainError("PCA target dimension must be >= 1");
    if (d > dim) {
        throw DomainError("PCA target dimension " + std::to_string(d) + " exceeds input dimension " +
                          std::to_string(dim));
    }
    if (points.size() < 2) throw DomainError("PCA needs at least two points");

    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd x(n, static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < dim; ++j) x(i, static_cast<Eigen::Index>(j)) = points[static_cast<std::size_t>(i)][j];
    }
    const Eigen::VectorXd mu = x.colwise().mean();
    x.rowwise() -= mu.transpose();
    const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) throw InternalError("covariance eigendecomposition failed");

    PcaMap map;
    map.mean.assign(mu.data(), mu.data() + mu.size());
    map.basis.assign(dim, std::vector<double>(d, 0.0));
    const auto& vecs = eig.eigenvectors();
    const auto& vals = eig.eigenvalues();  // ascending
    for (std::size_t c = 0; c < d; ++c) {
        const auto col = static_cast<Eigen::Index>(dim - 1 - c);
        Eigen::VectorXd v = vecs.col(col);
        Eigen::Index pivot = 0;
        v.cwiseAbs().maxCoeff(&pivot);
        if (v(pivot) < 0.0) v = -v;
        for (std::size_t j = 0; j < dim; ++j) map.basis[j][c] = v(static_cast<Eigen::Index>(j));
        map.explained.push_back(std::max(vals(col), 0.0));
    }
    return map;
}

BagDataset pca_apply(const PcaMap& map, const BagDataset& ds) {
    if (ds.dim != map.input_dim()) {
        throw DomainError("dataset has " + std::to_string(ds.dim) + " features, PCA map expects " +
                          std::to_string(map.input_dim()));
    }
    BagDataset out;
    out.dim = map.output_dim();
    out.bags.reserve(ds.bags.size());
    for (const auto& bag : ds.bags) {
        Bag b;
        b.id = bag.id;
        b.label = bag.label;
        for (std::size_t i = 0; i < bag.size(); ++i) b.instances.append_row(map.project(bag.instances.row(i)));
        out.bags.push_back(std::move(b));
    }
    return out;
}

}  // namespace mianfis
