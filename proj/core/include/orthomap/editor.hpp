#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "orthomap/linear_map.hpp"

namespace orthomap {

struct EditResult {
    Eigen::VectorXd z_prime;  ///< z + alpha * m_i
    Eigen::VectorXd delta_y;  ///< alpha * M^T m_i
    std::size_t attr_index = 0;
    double alpha = 0.0;
};

/// Moves z along the direction of `attr` and reports the predicted change.
EditResult edit_latent(const LinearMap& map, const Eigen::VectorXd& z, std::string_view attr,
                       double alpha);

/// edit_latent applied to every row of z.
Eigen::MatrixXd edit_batch(const LinearMap& map, const Eigen::MatrixXd& z, std::string_view attr,
                           double alpha);

/**
 * Worst off-target predicted change per unit of on-target change:
 * max_{j != i} |m_j . m_i| / (m_i . m_i). Zero when A == 1.
 */
double leakage(const LinearMap& map, std::string_view attr);

/// Sum over j != i of |m_j . m_i| / (m_i . m_i).
double total_leakage(const LinearMap& map, std::string_view attr);

struct DisentanglementRow {
    std::string attribute;
    double original = 0.0;
    double tfm_no_reg = 0.0;
    double abs_diff_no_reg = 0.0;
    double tfm_reg = 0.0;
    double abs_diff_reg = 0.0;

    // Unclamped predictions behind the display columns.
    double raw_original = 0.0;
    double raw_tfm_no_reg = 0.0;
    double raw_tfm_reg = 0.0;
};

struct DisentanglementReport {
    std::string target;
    double alpha_no_reg = 0.0;
    double alpha_reg = 0.0;  ///< rescaled so both edits move the target equally
    std::vector<DisentanglementRow> rows;  ///< sorted by abs_diff_no_reg descending

    const DisentanglementRow& row(std::string_view attribute) const;
};

/**
 * Side-by-side effect of editing `attr` under two models.
 *
 * Both edits start from the same baseline scores (the no-reg prediction at z)
 * and add each model's own predicted change. The reg-model alpha is rescaled
 * so the target attribute moves by the same amount under both models.
 * Display columns are clamped to [0, 1].
 */
DisentanglementReport compare_maps(const LinearMap& map_no_reg, const LinearMap& map_reg,
                                   const Eigen::VectorXd& z, std::string_view attr, double alpha);

std::string report_to_csv(const DisentanglementReport& report);
void save_report(const DisentanglementReport& report, const std::filesystem::path& path);

}  // namespace orthomap
