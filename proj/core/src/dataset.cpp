#include "orthomap/dataset.hpp"

#include <cmath>
#include <random>
#include <string>

#include "csv.hpp"
#include "orthomap/error.hpp"

namespace orthomap {

void PairedDataset::validate() const {
    if (latents.rows() < 1 || latents.cols() < 1)
        throw DimensionError("dataset needs at least one sample and one latent dimension");
    if (labels.rows() != latents.rows())
        throw DimensionError("latents have " + std::to_string(latents.rows()) +
                             " rows but labels have " + std::to_string(labels.rows()));
    if (static_cast<std::size_t>(labels.cols()) != schema.size())
        throw DimensionError("labels have " + std::to_string(labels.cols()) +
                             " columns but the schema names " + std::to_string(schema.size()) +
                             " attributes");
    if (schema.empty()) throw SchemaError("attribute schema is empty");
    for (Eigen::Index r = 0; r < latents.rows(); ++r)
        for (Eigen::Index c = 0; c < latents.cols(); ++c)
            if (!std::isfinite(latents(r, c)))
                throw ValidationError("latent row " + std::to_string(r + 1) + ", column " +
                                      std::to_string(c + 1) + " is not finite");
    for (Eigen::Index r = 0; r < labels.rows(); ++r)
        for (Eigen::Index c = 0; c < labels.cols(); ++c) {
            const double v = labels(r, c);
            if (!std::isfinite(v) || v < 0.0 || v > 1.0)
                throw ValidationError("label row " + std::to_string(r + 1) + ", column " +
                                      std::to_string(c + 1) + " ('" + schema[c] +
                                      "') = " + detail::format_double(v) +
                                      " is outside [0, 1]");
        }
}

Eigen::MatrixXd sample_latents(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (n == 0 || d == 0) throw ValidationError("sample_latents needs n >= 1 and d >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (Eigen::Index r = 0; r < z.rows(); ++r)
        for (Eigen::Index c = 0; c < z.cols(); ++c) z(r, c) = normal(rng);
    return z;
}

namespace {

std::string matrix_csv(const std::vector<std::string>& header, const Eigen::MatrixXd& values) {
    std::string out;
    out.reserve(static_cast<std::size_t>(values.size()) * 24 + 64);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            if (c) out += ',';
            detail::append_double(out, values(r, c));
        }
        out += '\n';
    }
    return out;
}

std::vector<std::string> latent_header(Eigen::Index d) {
    std::vector<std::string> h;
    h.reserve(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) h.push_back("z" + std::to_string(i));
    return h;
}

}  // namespace

Eigen::MatrixXd load_latents(const std::filesystem::path& path) {
    auto table = detail::read_numeric_csv(path, "latents");
    const auto expected = latent_header(static_cast<Eigen::Index>(table.header.size()));
    for (std::size_t i = 0; i < expected.size(); ++i)
        if (table.header[i] != expected[i])
            throw ValidationError("latents file " + path.string() + ": header column " +
                                  std::to_string(i + 1) + " is '" + table.header[i] +
                                  "', expected '" + expected[i] + "'");
    if (table.values.rows() < 1) throw DimensionError("latents file " + path.string() + " has no rows");
    return std::move(table.values);
}

void save_latents(const Eigen::MatrixXd& latents, const std::filesystem::path& path) {
    detail::write_text_file(path, matrix_csv(latent_header(latents.cols()), latents));
}

PairedDataset load_dataset(const std::filesystem::path& latents_path,
                           const std::filesystem::path& labels_path) {
    PairedDataset ds;
    ds.latents = load_latents(latents_path);
    auto labels = detail::read_numeric_csv(labels_path, "labels");
    ds.schema = AttributeSchema(std::move(labels.header));
    ds.labels = std::move(labels.values);
    ds.validate();
    return ds;
}

void save_dataset(const PairedDataset& ds, const std::filesystem::path& latents_path,
                  const std::filesystem::path& labels_path) {
    ds.validate();
    save_latents(ds.latents, latents_path);
    detail::write_text_file(labels_path, matrix_csv(ds.schema.names(), ds.labels));
}

}  // namespace orthomap
