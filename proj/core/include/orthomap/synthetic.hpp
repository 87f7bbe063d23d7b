#pragma once

#include <cstddef>
#include <cstdint>

#include "orthomap/dataset.hpp"
#include "orthomap/linear_map.hpp"

namespace orthomap {

enum class Link { linear, sigmoid };

/// Scale applied to the unit-norm planted directions.
inline constexpr double kPlantedScale = 0.1;
/// Planted intercept for every attribute.
inline constexpr double kPlantedIntercept = 0.5;

/**
 * Parameters of a planted ground-truth dataset. The planted directions have
 * unit norm and Gram matrix (1 - rho) I + rho J before scaling.
 */
struct SyntheticSpec {
    std::size_t d = 512;
    std::size_t a = 40;
    std::size_t n = 3000;
    double rho = 0.0;
    double noise_sigma = 0.05;
    Link link = Link::linear;
    std::uint64_t seed = 42;

    void validate() const;
};

struct SyntheticData {
    PairedDataset dataset;
    LinearMap truth;  ///< (kPlantedScale * M*, b*)
};

/// Unit-norm D x A directions with Gram matrix (1 - rho) I + rho J.
Eigen::MatrixXd planted_directions(std::size_t d, std::size_t a, double rho, std::uint64_t seed);

SyntheticData synth_ground_truth(const SyntheticSpec& spec);

}  // namespace orthomap
