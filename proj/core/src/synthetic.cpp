#include "orthomap/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "orthomap/error.hpp"

namespace orthomap {

namespace {

// splitmix64 finalizer; gives each random stream of a spec its own seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t kDirectionStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

}  // namespace

void SyntheticSpec::validate() const {
    if (d < 1 || a < 1 || n < 1) throw ValidationError("synthetic spec needs d, a, n >= 1");
    if (d < a)
        throw ValidationError("synthetic spec needs d >= a (d = " + std::to_string(d) +
                              ", a = " + std::to_string(a) + ")");
    if (!std::isfinite(rho) || rho < 0.0 || rho >= 1.0)
        throw ValidationError("rho must lie in [0, 1)");
    if (!std::isfinite(noise_sigma) || noise_sigma < 0.0)
        throw ValidationError("noise sigma must be finite and >= 0");
}

Eigen::MatrixXd planted_directions(std::size_t d, std::size_t a, double rho, std::uint64_t seed) {
    if (d < a || a < 1) throw ValidationError("planted directions need d >= a >= 1");
    if (!std::isfinite(rho) || rho < 0.0 || rho >= 1.0) throw ValidationError("rho must lie in [0, 1)");
    const auto rows = static_cast<Eigen::Index>(d);
    const auto cols = static_cast<Eigen::Index>(a);

    std::mt19937_64 rng(derive_seed(seed, kDirectionStream));
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd g(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) g(r, c) = normal(rng);

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);

    Eigen::MatrixXd corr = Eigen::MatrixXd::Constant(cols, cols, rho);
    corr.diagonal().setOnes();
    Eigen::LLT<Eigen::MatrixXd> llt(corr);
    if (llt.info() != Eigen::Success) throw SolverError("correlation matrix is not positive definite");
    const Eigen::MatrixXd l = llt.matrixL();
    return q * l.transpose();
}

SyntheticData synth_ground_truth(const SyntheticSpec& spec) {
    spec.validate();
    const Eigen::MatrixXd directions = planted_directions(spec.d, spec.a, spec.rho, spec.seed);

    SyntheticData out;
    LinearMap& truth = out.truth;
    truth.m = kPlantedScale * directions;
    truth.b = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(spec.a), kPlantedIntercept);
    truth.schema = AttributeSchema::numbered(spec.a);

    PairedDataset& ds = out.dataset;
    ds.schema = truth.schema;
    ds.latents = sample_latents(spec.n, spec.d, spec.seed);

    Eigen::MatrixXd scores = ds.latents * truth.m;
    scores.rowwise() += truth.b.transpose();
    if (spec.noise_sigma > 0.0) {
        std::mt19937_64 rng(derive_seed(spec.seed, kNoiseStream));
        std::normal_distribution<double> noise(0.0, spec.noise_sigma);
        for (Eigen::Index r = 0; r < scores.rows(); ++r)
            for (Eigen::Index c = 0; c < scores.cols(); ++c) scores(r, c) += noise(rng);
    }

    switch (spec.link) {
        case Link::linear:
            ds.labels = scores.cwiseMax(0.0).cwiseMin(1.0);
            break;
        case Link::sigmoid:
            ds.labels = scores.unaryExpr([](double s) { return 1.0 / (1.0 + std::exp(-4.0 * (s - 0.5))); });
            break;
    }
    ds.validate();
    return out;
}

}  // namespace orthomap
