#include "orthomap/editor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "csv.hpp"
#include "orthomap/error.hpp"

namespace orthomap {

namespace {

void check_alpha(double alpha) {
    if (!std::isfinite(alpha)) throw ValidationError("alpha must be finite");
}

// Per-unit-on-target off-target changes |m_j . m_i| / (m_i . m_i), j != i.
Eigen::VectorXd off_target_ratios(const LinearMap& map, std::size_t target) {
    const auto i = static_cast<Eigen::Index>(target);
    const Eigen::VectorXd col = map.m.col(i);
    const double self = col.squaredNorm();
    if (!(std::sqrt(self) > kDegenerateNorm))
        throw NumericalError("direction of '" + map.schema[target] + "' is degenerate (norm <= 1e-12)");
    Eigen::VectorXd ratios = (map.m.transpose() * col).cwiseAbs() / self;
    ratios(i) = 0.0;
    return ratios;
}

}  // namespace

EditResult edit_latent(const LinearMap& map, const Eigen::VectorXd& z, std::string_view attr,
                       double alpha) {
    const std::size_t target = map.schema.index_of(attr);
    check_alpha(alpha);
    if (z.size() != map.m.rows())
        throw DimensionError("latent dimension mismatch: model expects D = " +
                             std::to_string(map.m.rows()) + ", got " + std::to_string(z.size()));
    if (!z.allFinite()) throw ValidationError("latent vector has non-finite entries");

    const auto col = map.m.col(static_cast<Eigen::Index>(target));
    EditResult out;
    out.z_prime = z + alpha * col;
    out.delta_y = alpha * (map.m.transpose() * col);
    out.attr_index = target;
    out.alpha = alpha;
    return out;
}

Eigen::MatrixXd edit_batch(const LinearMap& map, const Eigen::MatrixXd& z, std::string_view attr,
                           double alpha) {
    const std::size_t target = map.schema.index_of(attr);
    check_alpha(alpha);
    if (z.cols() != map.m.rows())
        throw DimensionError("latent dimension mismatch: model expects D = " +
                             std::to_string(map.m.rows()) + ", got " + std::to_string(z.cols()));
    if (!z.allFinite()) throw ValidationError("latent matrix has non-finite entries");
    const Eigen::VectorXd step = alpha * map.m.col(static_cast<Eigen::Index>(target));
    Eigen::MatrixXd out = z;
    out.rowwise() += step.transpose();
    return out;
}

double leakage(const LinearMap& map, std::string_view attr) {
    const Eigen::VectorXd r = off_target_ratios(map, map.schema.index_of(attr));
    return r.size() ? r.maxCoeff() : 0.0;
}

double total_leakage(const LinearMap& map, std::string_view attr) {
    return off_target_ratios(map, map.schema.index_of(attr)).sum();
}

const DisentanglementRow& DisentanglementReport::row(std::string_view attribute) const {
    auto it = std::find_if(rows.begin(), rows.end(),
                           [&](const DisentanglementRow& r) { return r.attribute == attribute; });
    if (it == rows.end()) throw SchemaError("report has no row for '" + std::string(attribute) + "'");
    return *it;
}

DisentanglementReport compare_maps(const LinearMap& map_no_reg, const LinearMap& map_reg,
                                   const Eigen::VectorXd& z, std::string_view attr, double alpha) {
    if (map_no_reg.schema != map_reg.schema)
        throw SchemaError("models have different attribute schemas");
    if (map_no_reg.m.rows() != map_reg.m.rows())
        throw DimensionError("models have different latent dimensions (" +
                             std::to_string(map_no_reg.m.rows()) + " vs " +
                             std::to_string(map_reg.m.rows()) + ")");
    const std::size_t target = map_no_reg.schema.index_of(attr);
    const auto ti = static_cast<Eigen::Index>(target);

    const double reg_self = map_reg.m.col(ti).squaredNorm();
    if (!(std::sqrt(reg_self) > kDegenerateNorm))
        throw NumericalError("regularized direction of '" + std::string(attr) + "' is degenerate");
    const double alpha_reg = alpha * (map_no_reg.m.col(ti).squaredNorm() / reg_self);

    const EditResult edit_a = edit_latent(map_no_reg, z, attr, alpha);
    const EditResult edit_b = edit_latent(map_reg, z, attr, alpha_reg);
    const Eigen::VectorXd base = predict_one(map_no_reg, z);

    auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };
    DisentanglementReport rep;
    rep.target = std::string(attr);
    rep.alpha_no_reg = alpha;
    rep.alpha_reg = alpha_reg;
    rep.rows.reserve(map_no_reg.attributes());
    for (std::size_t j = 0; j < map_no_reg.attributes(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        DisentanglementRow row;
        row.attribute = map_no_reg.schema[j];
        row.raw_original = base(jj);
        row.raw_tfm_no_reg = base(jj) + edit_a.delta_y(jj);
        row.raw_tfm_reg = base(jj) + edit_b.delta_y(jj);
        row.original = clamp01(row.raw_original);
        row.tfm_no_reg = clamp01(row.raw_tfm_no_reg);
        row.tfm_reg = clamp01(row.raw_tfm_reg);
        row.abs_diff_no_reg = std::abs(row.tfm_no_reg - row.original);
        row.abs_diff_reg = std::abs(row.tfm_reg - row.original);
        rep.rows.push_back(std::move(row));
    }
    std::stable_sort(rep.rows.begin(), rep.rows.end(),
                     [](const DisentanglementRow& x, const DisentanglementRow& y) {
                         return x.abs_diff_no_reg > y.abs_diff_no_reg;
                     });
    return rep;
}

std::string report_to_csv(const DisentanglementReport& report) {
    std::string out = "attribute,original,tfm_no_reg,abs_diff_no_reg,tfm_reg,abs_diff_reg\n";
    for (const auto& r : report.rows) {
        out += r.attribute;
        for (double v : {r.original, r.tfm_no_reg, r.abs_diff_no_reg, r.tfm_reg, r.abs_diff_reg}) {
            out += ',';
            detail::append_double(out, v);
        }
        out += '\n';
    }
    return out;
}

void save_report(const DisentanglementReport& report, const std::filesystem::path& path) {
    detail::write_text_file(path, report_to_csv(report));
}

}  // namespace orthomap
