#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>

#include <Eigen/Dense>

#include "orthomap/schema.hpp"

namespace orthomap {

/// Latent rows paired with attribute-score rows.
struct PairedDataset {
    Eigen::MatrixXd latents;  ///< N x D
    Eigen::MatrixXd labels;   ///< N x A, every entry in [0, 1]
    AttributeSchema schema;

    std::size_t samples() const noexcept { return static_cast<std::size_t>(latents.rows()); }
    std::size_t latent_dim() const noexcept { return static_cast<std::size_t>(latents.cols()); }
    std::size_t attributes() const noexcept { return static_cast<std::size_t>(labels.cols()); }

    /// Throws DimensionError / ValidationError / SchemaError on violation.
    void validate() const;
};

/**
 * @brief n x d matrix of independent standard-normal draws.
 *
 * Uses std::mt19937_64 seeded with `seed` and std::normal_distribution, filled
 * row by row. Reproducible within one standard library implementation.
 */
Eigen::MatrixXd sample_latents(std::size_t n, std::size_t d, std::uint64_t seed);

/// Reads the latents and labels CSV files and validates the result.
PairedDataset load_dataset(const std::filesystem::path& latents_path,
                           const std::filesystem::path& labels_path);

void save_dataset(const PairedDataset& ds, const std::filesystem::path& latents_path,
                  const std::filesystem::path& labels_path);

/// Latents CSV alone (header z0..z{D-1}). Used by the edit workflow.
Eigen::MatrixXd load_latents(const std::filesystem::path& path);
void save_latents(const Eigen::MatrixXd& latents, const std::filesystem::path& path);

}  // namespace orthomap
