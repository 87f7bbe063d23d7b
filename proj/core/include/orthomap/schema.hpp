#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace orthomap {

/**
 * @brief Ordered, unique attribute names.
 *
 * Names must be non-empty and free of commas and line breaks so they can be
 * written verbatim into a CSV header.
 */
class AttributeSchema {
public:
    AttributeSchema() = default;
    /// Throws SchemaError if the names violate the invariants.
    explicit AttributeSchema(std::vector<std::string> names);

    /// "attr_0" ... "attr_{count-1}".
    static AttributeSchema numbered(std::size_t count);

    std::size_t size() const noexcept { return names_.size(); }
    bool empty() const noexcept { return names_.empty(); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::string& operator[](std::size_t i) const { return names_[i]; }

    /// Index of `name`; throws SchemaError listing the valid names if absent.
    std::size_t index_of(std::string_view name) const;
    bool contains(std::string_view name) const noexcept;

    friend bool operator==(const AttributeSchema&, const AttributeSchema&) = default;

private:
    std::vector<std::string> names_;
};

}  // namespace orthomap
