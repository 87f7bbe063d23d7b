// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure. All data is synthetic; the standard benchmark B is
// synth(D=64, A=10, N=2000, rho=0.7, sigma=0.05, link=linear, seed=42).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "orthomap/editor.hpp"
#include "orthomap/model_io.hpp"
#include "orthomap/synthetic.hpp"
#include "orthomap/trainer.hpp"
#include "support/oracles.hpp"

using namespace orthomap;
namespace ot = orthomap::testing;

namespace {

// Threshold for the alpha-matched leakage ratio (lambda = 2 vs lambda = 0).
// Frozen from the large-sample oracle on B: optimum ratio 7.94198e-4, plus
// 20% slack.
constexpr double kLeakageRatioThreshold = 9.531e-4;
constexpr double kOracleLeakageRatio = 7.94198e-4;

constexpr double kEditAlpha = 1.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* id, const char* title, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = seconds_since(t0);
    const bool in_time = limit_s <= 0 || elapsed < limit_s;
    const bool ok = out.pass && in_time;
    if (!ok) ++failures;
    std::printf("[%s] %s %s: %s; %.2f s", ok ? "PASS" : "FAIL", id, title, out.detail.c_str(), elapsed);
    if (limit_s > 0) std::printf(" (limit %.0f s)", limit_s);
    std::printf("\n");
    std::fflush(stdout);
}

SyntheticSpec benchmark_spec() {
    return {.d = 64, .a = 10, .n = 2000, .rho = 0.7, .noise_sigma = 0.05, .link = Link::linear, .seed = 42};
}

SyntheticSpec large_spec() {
    return {.d = 512, .a = 40, .n = 3000, .rho = 0.6, .noise_sigma = 0.05, .link = Link::linear, .seed = 42};
}

TrainConfig config_for(double lambda) {
    TrainConfig cfg;
    cfg.lambda = lambda;
    // Keeps lr * 8 * lambda (curvature of the penalty at orthonormal columns) below 1.
    cfg.lr_max = lambda > 2.0 ? 0.1 / lambda : 0.05;
    return cfg;
}

double gram_deviation(const Eigen::MatrixXd& m) { return std::sqrt(orthogonality_penalty(m)); }

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// Model files produced by criteria 2, 4, 5 and 7, for the determinism check.
struct Artifacts {
    std::vector<std::string> models;
};

Outcome criterion_gradient() {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Eigen::Index d = 5 + static_cast<Eigen::Index>((seed * 3) % 16);   // <= 20
        const Eigen::Index a = 1 + static_cast<Eigen::Index>((seed * 5) % 6);    // <= 6
        const Eigen::Index n = 10 + static_cast<Eigen::Index>((seed * 11) % 41); // <= 50
        PairedDataset ds;
        ds.latents = ot::random_matrix(n, d, 1000 + seed);
        ds.labels = ot::random_unit_interval(n, a, 2000 + seed);
        ds.schema = AttributeSchema::numbered(static_cast<std::size_t>(a));
        LinearMap map;
        map.m = ot::random_matrix(d, a, 3000 + seed, 0.5);
        map.b = ot::random_unit_interval(a, 1, 4000 + seed).col(0);
        map.schema = ds.schema;
        for (double lambda : {0.0, 2.0}) worst = std::max(worst, grad_check(ds, map, lambda, 1e-5));
    }
    return {worst < 1e-5, fmt("max relative error %.3g over 10 instances x lambda {0,2} (< 1e-5)", worst)};
}

Outcome criterion_oracle(const PairedDataset& b, Artifacts& art) {
    const LinearMap ols = fit_closed_form(b);
    const FitResult r = fit(b, config_for(0.0));
    art.models.push_back(model_to_json(r.map));
    const double diff = std::max((r.map.m - ols.m).cwiseAbs().maxCoeff(), (r.map.b - ols.b).cwiseAbs().maxCoeff());
    return {r.report.converged && diff < 1e-5,
            fmt("max |fit - OLS| = %.3g (< 1e-5), %.0f iterations", diff,
                static_cast<double>(r.report.iterations_run))};
}

Outcome criterion_edit_identity(const SyntheticData& data) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, data.truth.attributes() - 1);
    std::uniform_real_distribution<double> alpha_dist(-3.0, 3.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::VectorXd z = sample_latents(1, data.truth.latent_dim(), 100 + trial).row(0).transpose();
        const std::size_t i = pick(rng);
        const double alpha = alpha_dist(rng);
        const auto& m = data.truth.m;
        const EditResult e = edit_latent(data.truth, z, data.truth.schema[i], alpha);
        const Eigen::VectorXd lhs = predict_one(data.truth, e.z_prime) - predict_one(data.truth, z);
        const Eigen::VectorXd rhs = alpha * (m.transpose() * m.col(static_cast<Eigen::Index>(i)));
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    return {worst < 1e-10, fmt("max |delta predict - alpha M^T m_i| = %.3g over 100 draws (< 1e-10)", worst)};
}

Outcome criterion_cosine(const PairedDataset& b, Artifacts& art, LinearMap& no_reg_out, LinearMap& reg_out) {
    const LinearMap no_reg = fit(b, config_for(0.0)).map;
    const double base_cos = cosine_matrix(no_reg).mean_abs_off_diagonal();
    const double base_dev = gram_deviation(no_reg.m);
    art.models.push_back(model_to_json(no_reg));
    bool ok = true;
    std::string detail = fmt("lambda 0: mean |cos| %.4f, ||M^T M - I|| %.4f", base_cos, base_dev);
    for (double lambda : {0.5, 2.0, 8.0}) {
        const FitResult r = fit(b, config_for(lambda));
        art.models.push_back(model_to_json(r.map));
        const double c = cosine_matrix(r.map).mean_abs_off_diagonal();
        const double dev = gram_deviation(r.map.m);
        ok = ok && c <= 0.5 * base_cos && dev < base_dev;
        detail += fmt(" | lambda %.1f: %.3g, %.3g", lambda, c, dev);
        if (lambda == 2.0) reg_out = r.map;
    }
    no_reg_out = no_reg;
    return {ok, detail + " (need mean |cos| <= 0.5x and strictly smaller deviation)"};
}

double mean_matched_off_target(const LinearMap& no_reg, const LinearMap& other, bool use_other) {
    double acc = 0.0;
    const Eigen::VectorXd z = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(no_reg.latent_dim()));
    for (std::size_t i = 0; i < no_reg.attributes(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const std::string& name = no_reg.schema[i];
        const double target_move = kEditAlpha * no_reg.m.col(ii).squaredNorm();
        const LinearMap& map = use_other ? other : no_reg;
        const double alpha = use_other ? target_move / other.m.col(ii).squaredNorm() : kEditAlpha;
        const EditResult e = edit_latent(map, z, name, alpha);
        acc += e.delta_y.cwiseAbs().sum() - std::abs(e.delta_y(ii));
    }
    return acc / static_cast<double>(no_reg.attributes());
}

Outcome criterion_leakage(const SyntheticData& data, const LinearMap& no_reg, const LinearMap& reg) {
    const double base = mean_matched_off_target(no_reg, no_reg, false);
    const double regd = mean_matched_off_target(no_reg, reg, true);
    const double ratio = regd / base;

    const double oracle = ot::mean_off_target_sum(ot::population_optimum(data.truth.m, 2.0)) /
                          ot::mean_off_target_sum(data.truth.m);
    const bool oracle_matches = std::abs(oracle - kOracleLeakageRatio) < 1e-8;

    // Same comparison through the report, from the first latent of B.
    const Eigen::VectorXd z0 = data.dataset.latents.row(0).transpose();
    double report_no = 0.0, report_reg = 0.0;
    for (std::size_t i = 0; i < no_reg.attributes(); ++i) {
        const auto rep = compare_maps(no_reg, reg, z0, no_reg.schema[i], kEditAlpha);
        for (const auto& row : rep.rows) {
            if (row.attribute == rep.target) continue;
            report_no += row.abs_diff_no_reg;
            report_reg += row.abs_diff_reg;
        }
    }
    return {ratio <= kLeakageRatioThreshold && oracle_matches && report_reg < report_no,
            fmt("matched off-target ratio %.3g (<= %.4g; oracle %.4g)", ratio, kLeakageRatioThreshold, oracle) +
                fmt(", report sums %.3g vs %.3g", report_reg, report_no)};
}

Outcome criterion_one_cycle() {
    const double lr_max = 0.05, div = 25.0, pct = 0.3;
    double worst_end = 0.0, worst_jump_excess = -1.0;
    bool ok = true;
    for (std::size_t total : {100u, 1000u, 50000u}) {
        const auto peak = static_cast<std::size_t>(std::floor(pct * static_cast<double>(total)));
        const double e0 = std::abs(one_cycle(0, total, lr_max, div, pct) - lr_max / div);
        const double ep = std::abs(one_cycle(peak, total, lr_max, div, pct) - lr_max);
        const double ee = std::abs(one_cycle(total - 1, total, lr_max, div, pct) - lr_max / (div * 100));
        worst_end = std::max({worst_end, e0, ep, ee});
        const double bound = 2 * lr_max / static_cast<double>(total) + lr_max * std::numbers::pi / static_cast<double>(total);
        for (std::size_t s = 1; s < total; ++s) {
            const double jump = std::abs(one_cycle(s, total, lr_max, div, pct) - one_cycle(s - 1, total, lr_max, div, pct));
            worst_jump_excess = std::max(worst_jump_excess, jump / bound);
        }
    }
    ok = worst_end < 1e-9 && worst_jump_excess <= 1.0;
    return {ok, fmt("max endpoint error %.3g (< 1e-9), max jump / bound %.3f (<= 1)", worst_end, worst_jump_excess)};
}

Outcome criterion_large_scale(Artifacts& art) {
    const auto t0 = std::chrono::steady_clock::now();
    const SyntheticData data = synth_ground_truth(large_spec());
    const FitResult reg = fit(data.dataset, config_for(2.0));
    const double reg_seconds = seconds_since(t0);
    const FitResult no_reg = fit(data.dataset, config_for(0.0));
    art.models.push_back(model_to_json(reg.map));
    art.models.push_back(model_to_json(no_reg.map));
    const double c_reg = cosine_matrix(reg.map).mean_abs_off_diagonal();
    const double c_no = cosine_matrix(no_reg.map).mean_abs_off_diagonal();
    const bool ok = reg.report.converged && reg_seconds < 300.0 && c_reg <= 0.5 * c_no &&
                    gram_deviation(reg.map.m) < gram_deviation(no_reg.map.m);
    return {ok, fmt("lambda 2 converged=%.0f in %.0f iterations, %.1f s (< 300 s)", reg.report.converged ? 1.0 : 0.0,
                    static_cast<double>(reg.report.iterations_run), reg_seconds) +
                    fmt("; mean |cos| %.3g vs %.3g at lambda 0", c_reg, c_no)};
}

}  // namespace

int main() {
    std::printf("orthomap acceptance suite\n");
    const SyntheticData bench = synth_ground_truth(benchmark_spec());

    Artifacts first, second;
    LinearMap no_reg, reg;

    report("C1", "gradient correctness", 10, criterion_gradient);
    report("C2", "lambda=0 fit matches closed form on B", 60, [&] { return criterion_oracle(bench.dataset, first); });
    report("C3", "exact edit identity", 5, [&] { return criterion_edit_identity(bench); });
    report("C4", "cosine disentanglement on B, lambda in {0.5,2,8}", 180,
           [&] { return criterion_cosine(bench.dataset, first, no_reg, reg); });
    report("C5", "alpha-matched leakage reduction on B", 0, [&] { return criterion_leakage(bench, no_reg, reg); });
    report("C6", "one-cycle schedule shape", 0, criterion_one_cycle);
    report("C7", "large-scale run (D=512, A=40, N=3000, lambda=2)", 0, [&] { return criterion_large_scale(first); });
    report("C8", "determinism of criteria 2, 4, 5, 7", 0, [&] {
        const SyntheticData again = synth_ground_truth(benchmark_spec());
        LinearMap n2, r2;
        criterion_oracle(again.dataset, second);
        criterion_cosine(again.dataset, second, n2, r2);
        criterion_leakage(again, n2, r2);
        criterion_large_scale(second);
        const bool same = first.models == second.models && !first.models.empty();
        return Outcome{same, fmt("%.0f model files compared byte for byte", static_cast<double>(first.models.size()))};
    });

    std::printf("%s: %d criterion(s) failed\n", failures ? "FAILED" : "OK", failures);
    return failures ? 1 : 0;
}
