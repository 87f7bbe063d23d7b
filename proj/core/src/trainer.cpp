#include "orthomap/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "orthomap/error.hpp"

namespace orthomap {

std::string_view to_string(Schedule s) noexcept {
    switch (s) {
        case Schedule::constant: return "constant";
        case Schedule::one_cycle: return "one-cycle";
    }
    return "unknown";
}

Schedule parse_schedule(std::string_view text) {
    if (text == "constant") return Schedule::constant;
    if (text == "one-cycle" || text == "one_cycle") return Schedule::one_cycle;
    throw ValidationError("unknown schedule '" + std::string(text) + "' (expected constant or one-cycle)");
}

void TrainConfig::validate() const {
    auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!std::isfinite(lambda) || lambda < 0.0) throw ValidationError("lambda must be finite and >= 0");
    if (!finite_pos(tol)) throw ValidationError("tol must be finite and > 0");
    if (!finite_pos(lr_max)) throw ValidationError("lr_max must be finite and > 0");
    if (!std::isfinite(div) || div <= 1.0) throw ValidationError("div must be finite and > 1");
    if (!std::isfinite(pct_warm) || pct_warm <= 0.0 || pct_warm >= 1.0)
        throw ValidationError("pct_warm must lie in (0, 1)");
    if (!finite_pos(init_scale)) throw ValidationError("init_scale must be finite and > 0");
    if (!std::isfinite(momentum) || momentum < 0.0 || momentum >= 1.0)
        throw ValidationError("momentum must lie in [0, 1)");
}

double one_cycle(std::size_t step, std::size_t total, double lr_max, double div, double pct_warm) {
    if (step >= total) throw ValidationError("one_cycle: step must be < total");
    const double lr_start = lr_max / div;
    const double lr_end = lr_max / (div * 100.0);
    const auto peak = static_cast<std::size_t>(std::floor(pct_warm * static_cast<double>(total)));

    if (step < peak)
        return lr_start + (lr_max - lr_start) * static_cast<double>(step) / static_cast<double>(peak);
    if (step == peak) return lr_max;
    const double t = static_cast<double>(step - peak) / static_cast<double>(total - 1 - peak);
    return lr_end + (lr_max - lr_end) * 0.5 * (1.0 + std::cos(std::numbers::pi * t));
}

namespace {

// Sufficient statistics of the data term, so each iteration costs O(D^2 A)
// instead of O(N D A).
class Objective {
public:
    Objective(const PairedDataset& ds, double lambda)
        : lambda_(lambda),
          n_(static_cast<double>(ds.latents.rows())),
          scale_(n_ * static_cast<double>(ds.labels.cols())) {
        gram_ = ds.latents.transpose() * ds.latents;
        latent_sum_ = ds.latents.colwise().sum().transpose();
        cross_ = ds.latents.transpose() * ds.labels;
        label_sum_ = ds.labels.colwise().sum().transpose();
        label_sq_ = ds.labels.squaredNorm();
    }

    // `gm` must equal gram_ * m.
    LossBreakdown evaluate(const Eigen::MatrixXd& m, const Eigen::VectorXd& b,
                           const Eigen::MatrixXd& gm) const {
        const Eigen::VectorXd mts = m.transpose() * latent_sum_;
        const double rss = m.cwiseProduct(gm).sum() + 2.0 * b.dot(mts) -
                           2.0 * m.cwiseProduct(cross_).sum() + n_ * b.squaredNorm() -
                           2.0 * b.dot(label_sum_) + label_sq_;
        LossBreakdown out;
        out.lambda = lambda_;
        out.mse = std::max(rss, 0.0) / scale_;
        out.penalty = orthogonality_penalty(m);
        out.total = out.mse + lambda_ * out.penalty;
        return out;
    }

    void gradient(const Eigen::MatrixXd& m, const Eigen::VectorXd& b, const Eigen::MatrixXd& gm,
                  Eigen::MatrixXd& dm, Eigen::VectorXd& db) const {
        const double k = 2.0 / scale_;
        dm = gm;
        dm.noalias() += latent_sum_ * b.transpose();
        dm -= cross_;
        dm *= k;
        if (lambda_ != 0.0) {
            Eigen::MatrixXd dev = m.transpose() * m;
            dev.diagonal().array() -= 1.0;
            dm.noalias() += (4.0 * lambda_) * (m * dev);
        }
        db = k * (m.transpose() * latent_sum_ + n_ * b - label_sum_);
    }

    const Eigen::MatrixXd& gram() const noexcept { return gram_; }

private:
    double lambda_;
    double n_;
    double scale_;
    Eigen::MatrixXd gram_;
    Eigen::VectorXd latent_sum_;
    Eigen::MatrixXd cross_;
    Eigen::VectorXd label_sum_;
    double label_sq_;
};

}  // namespace

FitResult fit(const PairedDataset& ds, const TrainConfig& cfg) {
    ds.validate();
    cfg.validate();
    const auto started = std::chrono::steady_clock::now();
    const Eigen::Index d = ds.latents.cols();
    const Eigen::Index a = ds.labels.cols();

    FitResult result;
    LinearMap& map = result.map;
    map.schema = ds.schema;
    map.m.resize(d, a);
    {
        std::mt19937_64 rng(cfg.seed);
        std::normal_distribution<double> normal(0.0, cfg.init_scale / std::sqrt(static_cast<double>(d)));
        for (Eigen::Index c = 0; c < a; ++c)
            for (Eigen::Index r = 0; r < d; ++r) map.m(r, c) = normal(rng);
    }
    map.b = ds.labels.colwise().mean().transpose();

    // Nesterov momentum in look-ahead form: the tracked point is the one the
    // gradient is evaluated at, so each step needs a single Gram product.
    //   v'  = beta v - lr g(y)
    //   y'  = y + beta^2 v - (1 + beta) lr g(y)
    const double beta = cfg.momentum;
    const Objective objective(ds, cfg.lambda);
    Eigen::MatrixXd gm = objective.gram() * map.m;
    Eigen::MatrixXd dm(d, a);
    Eigen::VectorXd db(a);
    Eigen::MatrixXd vm = Eigen::MatrixXd::Zero(d, a);
    Eigen::VectorXd vb = Eigen::VectorXd::Zero(a);

    // With momentum the loss can pause at a turning point, so the change must
    // stay below tol for as many consecutive steps as the momentum remembers.
    const std::size_t window =
        beta == 0.0 ? 1 : static_cast<std::size_t>(std::ceil(1.0 / (1.0 - beta)));
    std::size_t calm_steps = 0;

    FitReport& report = result.report;
    report.loss_trajectory.reserve(std::min<std::size_t>(cfg.max_iters, 100'000) + 1);
    report.loss_trajectory.push_back(objective.evaluate(map.m, map.b, gm));

    for (std::size_t t = 0; t < cfg.max_iters; ++t) {
        const double lr = cfg.schedule == Schedule::one_cycle
                              ? one_cycle(t, cfg.max_iters, cfg.lr_max, cfg.div, cfg.pct_warm)
                              : cfg.lr_max;
        objective.gradient(map.m, map.b, gm, dm, db);
        if (beta == 0.0) {
            map.m.noalias() -= lr * dm;
            map.b.noalias() -= lr * db;
        } else {
            map.m += (beta * beta) * vm - ((1.0 + beta) * lr) * dm;
            map.b += (beta * beta) * vb - ((1.0 + beta) * lr) * db;
            vm = beta * vm - lr * dm;
            vb = beta * vb - lr * db;
        }
        gm.noalias() = objective.gram() * map.m;

        const LossBreakdown current = objective.evaluate(map.m, map.b, gm);
        if (!std::isfinite(current.total) || !map.m.allFinite() || !map.b.allFinite()) {
            throw DivergenceError("loss became non-finite at iteration " + std::to_string(t + 1) +
                                  "; reduce lr_max (currently " + std::to_string(cfg.lr_max) + ")");
        }
        const double previous = report.loss_trajectory.back().total;
        report.loss_trajectory.push_back(current);
        report.iterations_run = t + 1;
        if (std::abs(current.total - previous) / std::max(previous, 1e-15) < cfg.tol) {
            if (++calm_steps >= window) {
                report.converged = true;
                break;
            }
        } else {
            calm_steps = 0;
        }
    }

    const LossBreakdown final_loss = loss(map, ds, cfg.lambda);
    TrainingMeta meta;
    meta.lambda = cfg.lambda;
    meta.iterations = static_cast<std::int64_t>(report.iterations_run);
    meta.final_total_loss = final_loss.total;
    meta.final_mse = final_loss.mse;
    meta.final_penalty = final_loss.penalty;
    meta.seed = cfg.seed;
    meta.schedule = std::string(to_string(cfg.schedule));
    map.meta = std::move(meta);

    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

double grad_check(const PairedDataset& ds, const LinearMap& map, double lambda, double fd_step) {
    if (!std::isfinite(fd_step) || fd_step <= 0.0) throw ValidationError("fd_step must be > 0");
    const Gradient analytic = gradient(map, ds, lambda);
    LinearMap probe = map;

    auto relative = [](double ga, double gfd) {
        return std::abs(ga - gfd) / std::max({std::abs(ga), std::abs(gfd), 1e-8});
    };
    auto central = [&](double& slot) {
        const double saved = slot;
        slot = saved + fd_step;
        const double up = loss(probe, ds, lambda).total;
        slot = saved - fd_step;
        const double down = loss(probe, ds, lambda).total;
        slot = saved;
        return (up - down) / (2.0 * fd_step);
    };

    double worst = 0.0;
    for (Eigen::Index c = 0; c < probe.m.cols(); ++c)
        for (Eigen::Index r = 0; r < probe.m.rows(); ++r)
            worst = std::max(worst, relative(analytic.dm(r, c), central(probe.m(r, c))));
    for (Eigen::Index i = 0; i < probe.b.size(); ++i)
        worst = std::max(worst, relative(analytic.db(i), central(probe.b(i))));
    return worst;
}

}  // namespace orthomap
