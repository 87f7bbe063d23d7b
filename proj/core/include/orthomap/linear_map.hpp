#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "orthomap/dataset.hpp"
#include "orthomap/schema.hpp"

namespace orthomap {

/// Default orthogonality weight.
inline constexpr double kDefaultLambda = 2.0;

struct TrainingMeta {
    double lambda = 0.0;
    std::int64_t iterations = 0;
    double final_total_loss = 0.0;
    double final_mse = 0.0;
    double final_penalty = 0.0;
    std::uint64_t seed = 0;
    std::string schedule;

    friend bool operator==(const TrainingMeta&, const TrainingMeta&) = default;
};

/**
 * @brief Linear latent -> attribute model y = z M + b.
 *
 * `m` is D x A; column i is the edit direction of attribute i.
 */
struct LinearMap {
    Eigen::MatrixXd m;
    Eigen::VectorXd b;
    AttributeSchema schema;
    std::optional<TrainingMeta> meta;

    std::size_t latent_dim() const noexcept { return static_cast<std::size_t>(m.rows()); }
    std::size_t attributes() const noexcept { return static_cast<std::size_t>(m.cols()); }
    Eigen::VectorXd direction(std::size_t i) const { return m.col(static_cast<Eigen::Index>(i)); }

    void validate() const;
};

struct LossBreakdown {
    double total = 0.0;
    double mse = 0.0;
    double penalty = 0.0;
    double lambda = 0.0;
};

struct Gradient {
    Eigen::MatrixXd dm;  ///< D x A
    Eigen::VectorXd db;  ///< A
};

/// Rows of z mapped through the model. Not clamped to [0, 1].
Eigen::MatrixXd predict(const LinearMap& map, const Eigen::MatrixXd& z);
Eigen::VectorXd predict_one(const LinearMap& map, const Eigen::VectorXd& z);

/// Squared Frobenius norm of M^T M - I.
double orthogonality_penalty(const Eigen::MatrixXd& m);

/**
 * Regularized objective:
 *   mse     = sum((Z M + b - Y)^2) / (N A)
 *   penalty = ||M^T M - I||_F^2
 *   total   = mse + lambda * penalty
 * The intercept is not penalized.
 */
LossBreakdown loss(const LinearMap& map, const PairedDataset& ds, double lambda);

/// Analytic gradient of loss().total with respect to (M, b).
Gradient gradient(const LinearMap& map, const PairedDataset& ds, double lambda);

inline constexpr double kDefaultRidgeEps = 1e-10;

/**
 * Ordinary least squares through the normal equations of [Z | 1], with
 * ridge_eps * I added to the Gram matrix. Throws SolverError when the
 * system is numerically singular.
 */
LinearMap fit_closed_form(const PairedDataset& ds, double ridge_eps = kDefaultRidgeEps);

/// Pairwise cosine similarity of the direction columns.
struct CosineReport {
    Eigen::MatrixXd c;             ///< A x A
    AttributeSchema schema;
    std::vector<bool> degenerate;  ///< column norm <= 1e-12

    bool any_degenerate() const noexcept;
    double mean_abs_off_diagonal() const;
    double max_abs_off_diagonal() const;
};

inline constexpr double kDegenerateNorm = 1e-12;

CosineReport cosine_matrix(const LinearMap& map);

/**
 * The k attributes whose direction is most aligned (by |cosine|) with `attr`,
 * excluding `attr` itself. Sorted by |cosine| descending, ties in schema
 * order. At most A - 1 entries are returned.
 */
std::vector<std::pair<std::string, double>> top_correlated(const LinearMap& map,
                                                           std::string_view attr,
                                                           std::size_t k);

}  // namespace orthomap
