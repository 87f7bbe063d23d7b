#include "cli.hpp"

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <ostream>

#include <CLI11.hpp>

#include "orthomap/dataset.hpp"
#include "orthomap/editor.hpp"
#include "orthomap/error.hpp"
#include "orthomap/linear_map.hpp"
#include "orthomap/model_io.hpp"
#include "orthomap/synthetic.hpp"
#include "orthomap/trainer.hpp"

namespace orthomap::cli {

namespace {

namespace fs = std::filesystem;

struct Common {
    std::uint64_t seed = 42;
    bool quiet = false;
};

void add_common(CLI::App* cmd, Common& common) {
    cmd->add_option("--seed", common.seed, "Random seed")->capture_default_str();
    cmd->add_flag("--quiet", common.quiet, "Suppress progress messages");
}

std::string num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

struct SynthArgs {
    std::size_t dim = 512;
    std::size_t attrs = 40;
    std::size_t n = 3000;
    double rho = 0.6;
    double sigma = 0.05;
    std::string link = "linear";
    std::string out_dir;
};

void run_synth(const SynthArgs& a, const Common& c, std::ostream& err) {
    SyntheticSpec spec;
    spec.d = a.dim;
    spec.a = a.attrs;
    spec.n = a.n;
    spec.rho = a.rho;
    spec.noise_sigma = a.sigma;
    spec.link = a.link == "sigmoid" ? Link::sigmoid : Link::linear;
    spec.seed = c.seed;
    const SyntheticData data = synth_ground_truth(spec);

    const fs::path dir(a.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
    save_dataset(data.dataset, dir / "latents.csv", dir / "labels.csv");
    save_model(data.truth, dir / "truth_model.json");

    if (!c.quiet) {
        const double clamped =
            static_cast<double>((data.dataset.labels.array() == 0.0).count() +
                                (data.dataset.labels.array() == 1.0).count()) /
            static_cast<double>(data.dataset.labels.size());
        err << "synth: wrote " << a.n << " samples (D = " << a.dim << ", A = " << a.attrs
            << ") to " << dir.string() << "; fraction of labels at 0 or 1: " << clamped << "\n";
    }
}

struct FitArgs {
    std::string latents;
    std::string labels;
    double lambda = kDefaultLambda;
    std::string schedule = "constant";
    double lr_max = 0.05;
    std::size_t max_iters = 50'000;
    double tol = 1e-10;
    double momentum = TrainConfig{}.momentum;
    std::string out;
};

void run_fit(const FitArgs& a, const Common& c, std::ostream& err) {
    const PairedDataset ds = load_dataset(a.latents, a.labels);
    TrainConfig cfg;
    cfg.lambda = a.lambda;
    cfg.schedule = parse_schedule(a.schedule);
    cfg.lr_max = a.lr_max;
    cfg.max_iters = a.max_iters;
    cfg.tol = a.tol;
    cfg.momentum = a.momentum;
    cfg.seed = c.seed;
    const FitResult result = fit(ds, cfg);
    save_model(result.map, a.out);

    if (!c.quiet) {
        const TrainingMeta& m = *result.map.meta;
        err << "fit: " << result.report.iterations_run << " iterations, "
            << (result.report.converged ? "converged" : "NOT converged (max-iters reached)")
            << ", total " << num(m.final_total_loss) << " (mse " << num(m.final_mse) << ", penalty "
            << num(m.final_penalty) << "), " << result.report.wall_time << " s\n";
    }
}

struct EvalArgs {
    std::string model;
    std::string latents;
    std::string labels;
};

void run_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
    const LinearMap map = load_model(a.model);
    const PairedDataset ds = load_dataset(a.latents, a.labels);
    if (ds.schema != map.schema) throw SchemaError("dataset attributes differ from the model's");
    const double lambda = map.meta ? map.meta->lambda : 0.0;
    const LossBreakdown l = loss(map, ds, lambda);
    const CosineReport cos = cosine_matrix(map);
    out << "mse " << num(l.mse) << "\n"
        << "penalty " << num(l.penalty) << "\n"
        << "lambda " << num(l.lambda) << "\n"
        << "total " << num(l.total) << "\n"
        << "mean_abs_offdiag_cosine " << num(cos.mean_abs_off_diagonal()) << "\n"
        << "max_abs_offdiag_cosine " << num(cos.max_abs_off_diagonal()) << "\n";
    if (cos.any_degenerate()) err << "eval: warning: model has degenerate (near-zero) directions\n";
}

struct CosineArgs {
    std::string model;
    std::string attr;
    std::size_t top = 5;
};

void run_cosine(const CosineArgs& a, std::ostream& out, std::ostream& err) {
    const LinearMap map = load_model(a.model);
    const CosineReport rep = cosine_matrix(map);
    if (rep.any_degenerate()) err << "cosine: warning: model has degenerate (near-zero) directions\n";

    // Values are cosine similarities (1 = same direction).
    if (a.attr.empty()) {
        for (const auto& name : map.schema.names()) out << ',' << name;
        out << "\n";
        for (Eigen::Index i = 0; i < rep.c.rows(); ++i) {
            out << map.schema[static_cast<std::size_t>(i)];
            for (Eigen::Index j = 0; j < rep.c.cols(); ++j) out << ',' << num(rep.c(i, j));
            out << "\n";
        }
        return;
    }
    const auto ranked = top_correlated(map, a.attr, a.top);
    const auto self = static_cast<Eigen::Index>(map.schema.index_of(a.attr));
    out << "attribute,cosine_similarity\n";
    out << a.attr << ',' << num(rep.c(self, self)) << "\n";
    for (const auto& [name, value] : ranked) out << name << ',' << num(value) << "\n";
}

struct EditArgs {
    std::string model;
    std::string latents;
    std::string attr;
    double alpha = 1.0;
    std::string out;
};

void run_edit(const EditArgs& a, const Common& c, std::ostream& err) {
    const LinearMap map = load_model(a.model);
    const Eigen::MatrixXd z = load_latents(a.latents);
    const Eigen::MatrixXd edited = edit_batch(map, z, a.attr, a.alpha);
    save_latents(edited, a.out);
    if (!c.quiet) {
        err << "edit: moved " << z.rows() << " latents along '" << a.attr << "' by alpha "
            << num(a.alpha) << "; leakage " << num(leakage(map, a.attr)) << "\n";
    }
}

struct ReportArgs {
    std::string model_a;
    std::string model_b;
    std::string latents;
    std::string attr;
    double alpha = 1.0;
    std::string out;
};

void run_report(const ReportArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
    const LinearMap no_reg = load_model(a.model_a);
    const LinearMap reg = load_model(a.model_b);
    const Eigen::MatrixXd z = load_latents(a.latents);
    const DisentanglementReport rep = compare_maps(no_reg, reg, z.row(0).transpose(), a.attr, a.alpha);
    if (a.out.empty()) {
        out << report_to_csv(rep);
    } else {
        save_report(rep, a.out);
    }
    if (!c.quiet) {
        err << "report: alpha " << num(rep.alpha_no_reg) << " (model A), " << num(rep.alpha_reg)
            << " (model B, matched on-target change)\n";
    }
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Orthogonality-regularized latent-to-attribute maps", "orthomap"};
    app.require_subcommand(1, 1);
    app.set_help_all_flag("--help-all");

    std::function<void()> action;
    Common common;

    auto* synth = app.add_subcommand("synth", "Write a planted synthetic dataset and its true model");
    SynthArgs sa;
    add_common(synth, common);
    synth->add_option("--dim", sa.dim, "Latent dimension D")->capture_default_str()->check(CLI::PositiveNumber);
    synth->add_option("--attrs", sa.attrs, "Attribute count A")->capture_default_str()->check(CLI::PositiveNumber);
    synth->add_option("--n", sa.n, "Sample count N")->capture_default_str()->check(CLI::PositiveNumber);
    synth->add_option("--rho", sa.rho, "Pairwise correlation of planted directions")->capture_default_str();
    synth->add_option("--sigma", sa.sigma, "Label noise standard deviation")->capture_default_str();
    synth->add_option("--link", sa.link, "Score link")->capture_default_str()->check(CLI::IsMember({"linear", "sigmoid"}));
    synth->add_option("--out", sa.out_dir, "Output directory")->required();
    synth->callback([&] { action = [&] { run_synth(sa, common, err); }; });

    auto* fitc = app.add_subcommand("fit", "Fit a linear map by gradient descent");
    FitArgs fa;
    add_common(fitc, common);
    fitc->add_option("--latents", fa.latents, "Latents CSV")->required();
    fitc->add_option("--labels", fa.labels, "Labels CSV")->required();
    fitc->add_option("--lambda", fa.lambda, "Orthogonality weight")->capture_default_str();
    fitc->add_option("--schedule", fa.schedule, "Learning-rate schedule")->capture_default_str()->check(CLI::IsMember({"constant", "one-cycle"}));
    fitc->add_option("--lr-max", fa.lr_max, "Peak learning rate")->capture_default_str();
    fitc->add_option("--max-iters", fa.max_iters, "Iteration cap")->capture_default_str();
    fitc->add_option("--tol", fa.tol, "Relative loss-change stopping threshold")->capture_default_str();
    fitc->add_option("--momentum", fa.momentum, "Nesterov momentum (0 = plain gradient descent)")->capture_default_str();
    fitc->add_option("--out", fa.out, "Model JSON to write")->required();
    fitc->callback([&] { action = [&] { run_fit(fa, common, err); }; });

    auto* evalc = app.add_subcommand("eval", "Loss breakdown and cosine summary of a model on a dataset");
    EvalArgs ea;
    add_common(evalc, common);
    evalc->add_option("--model", ea.model, "Model JSON")->required();
    evalc->add_option("--latents", ea.latents, "Latents CSV")->required();
    evalc->add_option("--labels", ea.labels, "Labels CSV")->required();
    evalc->callback([&] { action = [&] { run_eval(ea, out, err); }; });

    auto* cosc = app.add_subcommand("cosine", "Cosine similarity between attribute directions");
    CosineArgs ca;
    add_common(cosc, common);
    cosc->add_option("--model", ca.model, "Model JSON")->required();
    cosc->add_option("--attr", ca.attr, "Rank the directions closest to this attribute");
    cosc->add_option("--top", ca.top, "How many to list")->capture_default_str()->check(CLI::PositiveNumber);
    cosc->callback([&] { action = [&] { run_cosine(ca, out, err); }; });

    auto* editc = app.add_subcommand("edit", "Move latents along an attribute direction");
    EditArgs xa;
    add_common(editc, common);
    editc->add_option("--model", xa.model, "Model JSON")->required();
    editc->add_option("--latents", xa.latents, "Latents CSV")->required();
    editc->add_option("--attr", xa.attr, "Attribute to edit")->required();
    editc->add_option("--alpha", xa.alpha, "Step along the direction")->capture_default_str();
    editc->add_option("--out", xa.out, "Edited latents CSV")->required();
    editc->callback([&] { action = [&] { run_edit(xa, common, err); }; });

    auto* reportc = app.add_subcommand("report", "Compare an edit under two models");
    ReportArgs ra;
    add_common(reportc, common);
    reportc->add_option("--model-a", ra.model_a, "Unregularized model JSON")->required();
    reportc->add_option("--model-b", ra.model_b, "Regularized model JSON")->required();
    reportc->add_option("--latents", ra.latents, "Latents CSV (first row is used)")->required();
    reportc->add_option("--attr", ra.attr, "Attribute to edit")->required();
    reportc->add_option("--alpha", ra.alpha, "Step for model A")->capture_default_str();
    reportc->add_option("--out", ra.out, "Report CSV (default: output stream)");
    reportc->callback([&] { action = [&] { run_report(ra, common, out, err); }; });

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.emplace_back("orthomap");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidationFailure;
    }

    try {
        if (action) action();
        return kOk;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kValidationFailure;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kIoFailure;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kValidationFailure;
    }
}

}  // namespace orthomap::cli
