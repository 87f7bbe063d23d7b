#include <doctest.h>

#include <cmath>

#include "orthomap/editor.hpp"
#include "orthomap/error.hpp"
#include "orthomap/synthetic.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace orthomap;
using namespace orthomap::testing;

namespace {

LinearMap make_map(Eigen::MatrixXd m, Eigen::VectorXd b) {
    LinearMap map;
    map.schema = AttributeSchema::numbered(static_cast<std::size_t>(m.cols()));
    map.m = std::move(m);
    map.b = std::move(b);
    return map;
}

LinearMap random_map(Eigen::Index d, Eigen::Index a, std::uint64_t seed) {
    return make_map(random_matrix(d, a, seed), random_unit_interval(a, 1, seed + 1).col(0));
}

Eigen::MatrixXd orthonormal_columns(Eigen::Index d, Eigen::Index a, std::uint64_t seed) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(d, a, seed));
    return qr.householderQ() * Eigen::MatrixXd::Identity(d, a);
}

}  // namespace

TEST_SUITE("editor") {

TEST_CASE("alpha = 0 leaves the latent unchanged") {
    const auto map = random_map(5, 3, 1);
    const Eigen::VectorXd z = random_matrix(5, 1, 2).col(0);
    const auto r = edit_latent(map, z, "attr_1", 0.0);
    CHECK(r.z_prime == z);
    CHECK(r.delta_y.isZero(0.0));
    CHECK(r.attr_index == 1);
}

TEST_CASE("orthonormal directions move only the target") {
    const auto map = make_map(orthonormal_columns(7, 4, 3), Eigen::VectorXd::Zero(4));
    const auto r = edit_latent(map, Eigen::VectorXd::Zero(7), "attr_2", 0.5);
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(4);
    expected(2) = 0.5;
    CHECK((r.delta_y - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("predicted change equals the prediction difference") {
    // 100 random (map, z, attr, alpha) draws, both sides computed independently.
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto map = random_map(6, 3, seed);
        const Eigen::VectorXd z = random_matrix(6, 1, seed + 500, 2.0).col(0);
        const double alpha = random_matrix(1, 1, seed + 900, 3.0)(0, 0);
        const std::string attr = "attr_" + std::to_string(seed % 3);
        const auto r = edit_latent(map, z, attr, alpha);
        const auto before = naive_predict(map.m, map.b, z.transpose());
        const auto after = naive_predict(map.m, map.b, r.z_prime.transpose());
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(std::abs((after[0][j] - before[0][j]) - r.delta_y(static_cast<Eigen::Index>(j))) < 1e-10);
        CHECK(((r.z_prime - z) - alpha * map.m.col(static_cast<Eigen::Index>(seed % 3))).cwiseAbs().maxCoeff() <
              1e-12);
    }
}

TEST_CASE("consecutive edits add up") {
    const auto map = random_map(8, 4, 5);
    const Eigen::VectorXd z = random_matrix(8, 1, 6).col(0);
    const auto once = edit_latent(map, z, "attr_3", 1.25);
    const auto twice = edit_latent(map, edit_latent(map, z, "attr_3", 0.5).z_prime, "attr_3", 0.75);
    CHECK((twice.z_prime - once.z_prime).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("edit errors") {
    const auto map = random_map(4, 2, 1);
    CHECK_THROWS_WITH_AS(edit_latent(map, Eigen::VectorXd::Zero(4), "Young", 1.0),
                         doctest::Contains("attr_0 attr_1"), SchemaError);
    CHECK_THROWS_AS(edit_latent(map, Eigen::VectorXd::Zero(3), "attr_0", 1.0), DimensionError);
    CHECK_THROWS_AS(edit_latent(map, Eigen::VectorXd::Zero(4), "attr_0", INFINITY), ValidationError);
    CHECK_THROWS_AS(edit_batch(map, Eigen::MatrixXd::Zero(2, 5), "attr_0", 1.0), DimensionError);
}

TEST_CASE("edit_batch matches row-by-row edits") {
    const auto map = random_map(6, 3, 9);
    const Eigen::MatrixXd z = random_matrix(5, 6, 10);
    const auto batch = edit_batch(map, z, "attr_0", -0.8);
    for (Eigen::Index r = 0; r < z.rows(); ++r)
        CHECK(batch.row(r).transpose() == edit_latent(map, z.row(r).transpose(), "attr_0", -0.8).z_prime);
    CHECK(edit_batch(map, z, "attr_0", 0.0) == z);
    CHECK(edit_batch(map, z.topRows(1), "attr_2", 0.3).row(0).transpose() ==
          edit_latent(map, z.row(0).transpose(), "attr_2", 0.3).z_prime);
}

TEST_CASE("leakage values") {
    const auto ortho = make_map(orthonormal_columns(6, 3, 2), Eigen::VectorXd::Zero(3));
    CHECK(leakage(ortho, "attr_0") < 1e-12);

    Eigen::MatrixXd m = random_matrix(6, 3, 3);
    m.col(2) = m.col(0);
    const auto dup = make_map(m, Eigen::VectorXd::Zero(3));
    CHECK(leakage(dup, "attr_0") == doctest::Approx(1.0).epsilon(1e-12));

    SyntheticSpec spec{.d = 20, .a = 5, .n = 5, .rho = 0.6, .noise_sigma = 0.0, .link = Link::linear, .seed = 4};
    auto planted = synth_ground_truth(spec).truth;
    planted.m = planted_directions(20, 5, 0.6, 4);
    CHECK(std::abs(leakage(planted, "attr_1") - 0.6) < 1e-10);
    CHECK(std::abs(total_leakage(planted, "attr_1") - 4 * 0.6) < 1e-10);

    Eigen::MatrixXd zero_col = random_matrix(6, 3, 3);
    zero_col.col(1).setZero();
    CHECK_THROWS_AS(leakage(make_map(zero_col, Eigen::VectorXd::Zero(3)), "attr_1"), NumericalError);
}

TEST_CASE("leakage is invariant under uniform scaling") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto map = random_map(7, 4, seed);
        const double before = leakage(map, "attr_1");
        map.m *= 0.01 + static_cast<double>(seed);
        CHECK(std::abs(leakage(map, "attr_1") - before) <= 1e-12);
    }
}

TEST_CASE("compare_maps with identical maps") {
    const auto map = random_map(6, 4, 7);
    const Eigen::VectorXd z = random_matrix(6, 1, 8, 0.1).col(0);
    const auto rep = compare_maps(map, map, z, "attr_2", 0.05);
    CHECK(rep.alpha_reg == rep.alpha_no_reg);
    for (const auto& row : rep.rows) {
        CHECK(row.tfm_reg == row.tfm_no_reg);
        CHECK(row.abs_diff_reg == row.abs_diff_no_reg);
        CHECK(row.abs_diff_no_reg == std::abs(row.tfm_no_reg - row.original));
    }
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        CHECK(rep.rows[i - 1].abs_diff_no_reg >= rep.rows[i].abs_diff_no_reg);
}

TEST_CASE("compare_maps matches the on-target change and clamps display values") {
    const auto a = random_map(5, 3, 11);
    auto b = random_map(5, 3, 12);
    const Eigen::VectorXd z = random_matrix(5, 1, 13, 0.1).col(0);
    const auto rep = compare_maps(a, b, z, "attr_1", 0.2);
    const auto& target = rep.row("attr_1");
    CHECK(std::abs((target.raw_tfm_reg - target.raw_original) - (target.raw_tfm_no_reg - target.raw_original)) <
          1e-12);
    for (const auto& row : rep.rows) {
        for (double v : {row.original, row.tfm_no_reg, row.tfm_reg}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        CHECK(std::abs(row.abs_diff_reg - std::abs(row.tfm_reg - row.original)) <= 1e-12);
    }
    b.schema = AttributeSchema({"x", "y", "z"});
    CHECK_THROWS_AS(compare_maps(a, b, z, "attr_1", 0.2), SchemaError);
}

TEST_CASE("report CSV layout") {
    const auto map = random_map(4, 2, 3);
    const auto rep = compare_maps(map, map, Eigen::VectorXd::Zero(4), "attr_0", 0.1);
    const std::string csv = report_to_csv(rep);
    CHECK(csv.rfind("attribute,original,tfm_no_reg,abs_diff_no_reg,tfm_reg,abs_diff_reg\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    TempDir dir;
    CHECK_THROWS_AS(save_report(rep, dir / "missing" / "r.csv"), IoError);
}

}  // TEST_SUITE
