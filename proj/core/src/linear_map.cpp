#include "orthomap/linear_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "orthomap/error.hpp"

namespace orthomap {

void LinearMap::validate() const {
    if (m.rows() < 1 || m.cols() < 1) throw DimensionError("linear map has an empty direction matrix");
    if (b.size() != m.cols())
        throw DimensionError("intercept length " + std::to_string(b.size()) + " != attribute count " +
                             std::to_string(m.cols()));
    if (schema.size() != static_cast<std::size_t>(m.cols()))
        throw DimensionError("schema names " + std::to_string(schema.size()) +
                             " attributes but the map has " + std::to_string(m.cols()));
    if (!m.allFinite() || !b.allFinite()) throw ValidationError("linear map has non-finite entries");
}

namespace {

void check_latent_dim(const LinearMap& map, Eigen::Index d) {
    if (d != map.m.rows())
        throw DimensionError("latent dimension mismatch: model expects D = " +
                             std::to_string(map.m.rows()) + ", got " + std::to_string(d));
}

void check_compatible(const LinearMap& map, const PairedDataset& ds) {
    check_latent_dim(map, ds.latents.cols());
    if (ds.labels.cols() != map.m.cols())
        throw DimensionError("attribute count mismatch: model has " + std::to_string(map.m.cols()) +
                             ", dataset has " + std::to_string(ds.labels.cols()));
    if (ds.labels.rows() != ds.latents.rows())
        throw DimensionError("dataset latents and labels have different row counts");
}

void check_lambda(double lambda) {
    if (!std::isfinite(lambda) || lambda < 0.0)
        throw ValidationError("lambda must be finite and >= 0");
}

Eigen::MatrixXd residuals(const LinearMap& map, const PairedDataset& ds) {
    Eigen::MatrixXd r = ds.latents * map.m;
    r.rowwise() += map.b.transpose();
    r -= ds.labels;
    return r;
}

}  // namespace

Eigen::MatrixXd predict(const LinearMap& map, const Eigen::MatrixXd& z) {
    check_latent_dim(map, z.cols());
    Eigen::MatrixXd y = z * map.m;
    y.rowwise() += map.b.transpose();
    return y;
}

Eigen::VectorXd predict_one(const LinearMap& map, const Eigen::VectorXd& z) {
    check_latent_dim(map, z.size());
    return map.m.transpose() * z + map.b;
}

double orthogonality_penalty(const Eigen::MatrixXd& m) {
    Eigen::MatrixXd g = m.transpose() * m;
    g.diagonal().array() -= 1.0;
    return g.squaredNorm();
}

LossBreakdown loss(const LinearMap& map, const PairedDataset& ds, double lambda) {
    check_compatible(map, ds);
    check_lambda(lambda);
    const double scale = static_cast<double>(ds.labels.rows()) * static_cast<double>(ds.labels.cols());
    LossBreakdown out;
    out.lambda = lambda;
    out.mse = residuals(map, ds).squaredNorm() / scale;
    out.penalty = orthogonality_penalty(map.m);
    out.total = out.mse + lambda * out.penalty;
    return out;
}

Gradient gradient(const LinearMap& map, const PairedDataset& ds, double lambda) {
    check_compatible(map, ds);
    check_lambda(lambda);
    const double scale = static_cast<double>(ds.labels.rows()) * static_cast<double>(ds.labels.cols());
    const Eigen::MatrixXd r = residuals(map, ds);

    Gradient g;
    g.dm = (2.0 / scale) * (ds.latents.transpose() * r);
    g.db = (2.0 / scale) * r.colwise().sum().transpose();
    if (lambda != 0.0) {
        Eigen::MatrixXd gram = map.m.transpose() * map.m;
        gram.diagonal().array() -= 1.0;
        g.dm.noalias() += (4.0 * lambda) * (map.m * gram);
    }
    return g;
}

LinearMap fit_closed_form(const PairedDataset& ds, double ridge_eps) {
    if (!std::isfinite(ridge_eps) || ridge_eps < 0.0)
        throw ValidationError("ridge_eps must be finite and >= 0");
    ds.validate();
    const Eigen::Index n = ds.latents.rows();
    const Eigen::Index d = ds.latents.cols();

    Eigen::MatrixXd x(n, d + 1);
    x.leftCols(d) = ds.latents;
    x.col(d).setOnes();

    Eigen::MatrixXd gram = x.transpose() * x;
    gram.diagonal().array() += ridge_eps;
    const Eigen::MatrixXd rhs = x.transpose() * ds.labels;

    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    const double tiny = std::numeric_limits<double>::epsilon() * static_cast<double>(d + 1);
    if (llt.info() != Eigen::Success || !(llt.rcond() > tiny)) {
        throw SolverError("normal equations are singular (N = " + std::to_string(n) +
                          ", D = " + std::to_string(d) +
                          "); use a positive ridge_eps or more samples");
    }
    const Eigen::MatrixXd sol = llt.solve(rhs);

    LinearMap map;
    map.m = sol.topRows(d);
    map.b = sol.row(d).transpose();
    map.schema = ds.schema;
    if (!map.m.allFinite() || !map.b.allFinite())
        throw SolverError("least-squares solution is not finite; use a positive ridge_eps");
    return map;
}

bool CosineReport::any_degenerate() const noexcept {
    return std::find(degenerate.begin(), degenerate.end(), true) != degenerate.end();
}

double CosineReport::mean_abs_off_diagonal() const {
    const Eigen::Index a = c.rows();
    if (a < 2) return 0.0;
    const double off = c.cwiseAbs().sum() - c.diagonal().cwiseAbs().sum();
    return off / static_cast<double>(a * (a - 1));
}

double CosineReport::max_abs_off_diagonal() const {
    double best = 0.0;
    for (Eigen::Index i = 0; i < c.rows(); ++i)
        for (Eigen::Index j = 0; j < c.cols(); ++j)
            if (i != j) best = std::max(best, std::abs(c(i, j)));
    return best;
}

CosineReport cosine_matrix(const LinearMap& map) {
    const Eigen::Index a = map.m.cols();
    const Eigen::MatrixXd gram = map.m.transpose() * map.m;
    Eigen::VectorXd norms = gram.diagonal().cwiseMax(0.0).cwiseSqrt();

    CosineReport rep;
    rep.schema = map.schema;
    rep.degenerate.assign(static_cast<std::size_t>(a), false);
    for (Eigen::Index i = 0; i < a; ++i)
        rep.degenerate[static_cast<std::size_t>(i)] = !(norms(i) > kDegenerateNorm);

    rep.c = Eigen::MatrixXd::Zero(a, a);
    for (Eigen::Index i = 0; i < a; ++i) {
        rep.c(i, i) = 1.0;
        if (rep.degenerate[static_cast<std::size_t>(i)]) continue;
        for (Eigen::Index j = i + 1; j < a; ++j) {
            if (rep.degenerate[static_cast<std::size_t>(j)]) continue;
            const double v = std::clamp(gram(i, j) / (norms(i) * norms(j)), -1.0, 1.0);
            rep.c(i, j) = v;
            rep.c(j, i) = v;
        }
    }
    return rep;
}

std::vector<std::pair<std::string, double>> top_correlated(const LinearMap& map,
                                                           std::string_view attr,
                                                           std::size_t k) {
    const std::size_t target = map.schema.index_of(attr);
    const std::size_t a = map.attributes();
    if (k < 1 || k > a)
        throw ValidationError("k must be in [1, " + std::to_string(a) + "], got " + std::to_string(k));

    const CosineReport rep = cosine_matrix(map);
    std::vector<std::size_t> order;
    order.reserve(a - 1);
    for (std::size_t j = 0; j < a; ++j)
        if (j != target) order.push_back(j);
    const auto t = static_cast<Eigen::Index>(target);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return std::abs(rep.c(t, static_cast<Eigen::Index>(x))) >
               std::abs(rep.c(t, static_cast<Eigen::Index>(y)));
    });
    order.resize(std::min(k, order.size()));

    std::vector<std::pair<std::string, double>> out;
    out.reserve(order.size());
    for (std::size_t j : order) out.emplace_back(map.schema[j], rep.c(t, static_cast<Eigen::Index>(j)));
    return out;
}

}  // namespace orthomap
