#pragma once

#include <filesystem>
#include <string>

#include "orthomap/linear_map.hpp"

namespace orthomap {

inline constexpr int kModelFormatVersion = 1;

/// JSON model document; directions stored column-major under "m_columns".
std::string model_to_json(const LinearMap& map);
LinearMap model_from_json(const std::string& text);

void save_model(const LinearMap& map, const std::filesystem::path& path);
LinearMap load_model(const std::filesystem::path& path);

}  // namespace orthomap
