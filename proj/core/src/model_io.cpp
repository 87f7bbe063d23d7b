#include "orthomap/model_io.hpp"

#include <json.hpp>

#include "csv.hpp"
#include "orthomap/error.hpp"

namespace orthomap {

using nlohmann::json;

std::string model_to_json(const LinearMap& map) {
    map.validate();
    json doc;
    doc["version"] = kModelFormatVersion;
    doc["d"] = map.latent_dim();
    doc["a"] = map.attributes();
    doc["attributes"] = map.schema.names();
    doc["lambda"] = map.meta ? map.meta->lambda : 0.0;
    doc["b"] = std::vector<double>(map.b.data(), map.b.data() + map.b.size());
    json columns = json::array();
    for (Eigen::Index j = 0; j < map.m.cols(); ++j) {
        const double* col = map.m.col(j).data();
        columns.push_back(std::vector<double>(col, col + map.m.rows()));
    }
    doc["m_columns"] = std::move(columns);
    if (map.meta) {
        const TrainingMeta& m = *map.meta;
        doc["meta"] = {{"iterations", m.iterations},
                       {"final_total_loss", m.final_total_loss},
                       {"final_mse", m.final_mse},
                       {"final_penalty", m.final_penalty},
                       {"seed", m.seed},
                       {"schedule", m.schedule}};
    } else {
        doc["meta"] = nullptr;
    }
    return doc.dump(2) + "\n";
}

LinearMap model_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        const int version = doc.at("version").get<int>();
        if (version != kModelFormatVersion)
            throw ValidationError("unsupported model version " + std::to_string(version));
        const auto d = doc.at("d").get<std::size_t>();
        const auto a = doc.at("a").get<std::size_t>();

        LinearMap map;
        map.schema = AttributeSchema(doc.at("attributes").get<std::vector<std::string>>());
        const auto b = doc.at("b").get<std::vector<double>>();
        const auto cols = doc.at("m_columns").get<std::vector<std::vector<double>>>();
        if (map.schema.size() != a || b.size() != a || cols.size() != a)
            throw DimensionError("model declares a = " + std::to_string(a) +
                                 " but attributes/b/m_columns lengths disagree");
        map.m.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(a));
        for (std::size_t j = 0; j < a; ++j) {
            if (cols[j].size() != d)
                throw DimensionError("m_columns[" + std::to_string(j) + "] has length " +
                                     std::to_string(cols[j].size()) + ", expected d = " +
                                     std::to_string(d));
            map.m.col(static_cast<Eigen::Index>(j)) =
                Eigen::Map<const Eigen::VectorXd>(cols[j].data(), static_cast<Eigen::Index>(d));
        }
        map.b = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(a));

        const json& meta = doc.at("meta");
        if (!meta.is_null()) {
            TrainingMeta m;
            m.lambda = doc.at("lambda").get<double>();
            m.iterations = meta.at("iterations").get<std::int64_t>();
            m.final_total_loss = meta.at("final_total_loss").get<double>();
            m.final_mse = meta.at("final_mse").get<double>();
            m.final_penalty = meta.at("final_penalty").get<double>();
            m.seed = meta.at("seed").get<std::uint64_t>();
            m.schedule = meta.at("schedule").get<std::string>();
            map.meta = std::move(m);
        }
        map.validate();
        return map;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed model file: ") + e.what());
    }
}

void save_model(const LinearMap& map, const std::filesystem::path& path) {
    detail::write_text_file(path, model_to_json(map));
}

LinearMap load_model(const std::filesystem::path& path) {
    try {
        return model_from_json(detail::read_text_file(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

}  // namespace orthomap
