#include "orthomap/schema.hpp"

#include <algorithm>
#include <unordered_set>

#include "orthomap/error.hpp"

namespace orthomap {

AttributeSchema::AttributeSchema(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw SchemaError("attribute schema must contain at least one name");
    std::unordered_set<std::string_view> seen;
    for (std::size_t i = 0; i < names_.size(); ++i) {
        const std::string& n = names_[i];
        if (n.empty()) throw SchemaError("attribute " + std::to_string(i) + " has an empty name");
        if (n.find_first_of(",\r\n") != std::string::npos)
            throw SchemaError("attribute name '" + n + "' contains a comma or line break");
        if (!seen.insert(n).second) throw SchemaError("duplicate attribute name '" + n + "'");
    }
}

AttributeSchema AttributeSchema::numbered(std::size_t count) {
    std::vector<std::string> names;
    names.reserve(count);
    for (std::size_t i = 0; i < count; ++i) names.push_back("attr_" + std::to_string(i));
    return AttributeSchema(std::move(names));
}

std::size_t AttributeSchema::index_of(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it != names_.end()) return static_cast<std::size_t>(it - names_.begin());
    std::string msg = "unknown attribute '" + std::string(name) + "'; valid names:";
    for (const auto& n : names_) msg += " " + n;
    throw SchemaError(msg);
}

bool AttributeSchema::contains(std::string_view name) const noexcept {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

}  // namespace orthomap
