#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ncc/classifiers.hpp"
#include "ncc/report.hpp"
#include "ncc/simulation.hpp"

namespace ncc::cli {

namespace {

/// Raised for input that is well-formed on the command line but unusable,
/// such as a p=4 model handed to a 2-D renderer.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimulateArgs {
    std::string config;
    std::string out;
    std::string curves;
    unsigned threads = 0;
    bool threads_set = false;
};

struct FitArgs {
    std::string data;
    std::string kind = "NCC";
    std::string mode = "adjacent";
    int max_depth = 8;
    int outer_owner = 1;
    bool calibrate = false;
    int folds = 5;
    std::string out;
};

struct PredictArgs {
    std::string model;
    std::string data;
    std::string out;
};

struct ParcoordsArgs {
    std::string data;
    std::string model;
    std::string out;
};

struct RegionsArgs {
    std::string model;
    std::string data;
    std::vector<double> bounds;
    int resolution = 64;
    std::string out;
};

struct CurvesArgs {
    std::string results;
    std::string experiment;
    std::string out;
};

int simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    RunConfig rc = load_run_config(a.config);
    if (a.threads_set) rc.experiment.threads = a.threads;
    if (!a.out.empty()) rc.csv_out = a.out;
    if (!a.curves.empty()) rc.curves_svg = a.curves;
    if (!rc.csv_out) throw UsageError("simulate needs --out or outputs.csv in the config");

    const auto result = run_experiment(rc.experiment);
    for (const auto& d : result.diagnostics) err << "note: " << d << '\n';
    emit_csv(result.rows, *rc.csv_out);
    if (rc.curves_svg) write_text_file(*rc.curves_svg, render_curves(result.rows));
    for (const auto& r : result.rows) {
        if (r.flip_rate)
            out << r.experiment << ' ' << r.classifier << " p=" << r.p << " n=" << r.n
                << " flip_rate=" << *r.flip_rate << '\n';
    }
    out << "wrote " << result.rows.size() << " rows to " << rc.csv_out->string() << '\n';
    return kOk;
}

int fit_cmd(const FitArgs& a, std::ostream& out) {
    const Dataset data = load_dataset(a.data);
    FitOptions opts;
    opts.ncc.mode = parse_mode(a.mode);
    opts.ncc.max_depth = a.max_depth;
    opts.ncc.outer_owner = class_from_code(a.outer_owner);
    const auto kind = parse_kind(a.kind);
    Model model = fit(kind, data, opts);
    if (a.calibrate) {
        auto* ncc = std::get_if<NccModel>(&model);
        if (!ncc) throw UsageError("--calibrate-sign applies to NCC models only");
        const auto cal = calibrate_sign(data, a.folds, opts.ncc);
        ncc->flipped = cal.flipped;
        out << "cv_error=" << cal.cv_error << " flipped=" << (cal.flipped ? "true" : "false")
            << '\n';
    }
    save_model(model, a.out);
    out << "training error " << error_rate(model, data) << '\n';
    return kOk;
}

int predict_cmd(const PredictArgs& a) {
    const Model model = load_model(a.model);
    const Matrix x = load_features(a.data);
    if (static_cast<std::size_t>(x.cols()) != model_dim(model))
        throw UsageError("data has p=" + std::to_string(x.cols()) + " but the model expects p=" +
                         std::to_string(model_dim(model)));
    std::string text = "label\n";
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const ClassId c = predict(model, {x.row(i).data(), static_cast<std::size_t>(x.cols())});
        text += std::to_string(label_code(c)) + '\n';
    }
    write_text_file(a.out, text);
    return kOk;
}

int parcoords_cmd(const ParcoordsArgs& a) {
    const Dataset data = load_dataset(a.data);
    if (data.dim() < 2) throw UsageError("PARCOORDS requires p>=2");
    std::optional<CavityStack> stack;
    if (!a.model.empty()) {
        const Model m = load_model(a.model);
        if (const auto* ncc = std::get_if<NccModel>(&m))
            stack = ncc->stack;
        else if (const auto* ncda = std::get_if<NcdaModel>(&m))
            stack = ncda->ncc.stack;
        else
            throw UsageError("--model must be an NCC or NCDA model");
        if (stack->dim() != data.dim()) throw UsageError("model and data differ in dimension");
    }
    write_text_file(a.out, render_parcoords(data, stack ? &*stack : nullptr));
    return kOk;
}

RegionGrid default_grid(const CavityStack& stack) {
    const Surface& s1 = stack.surfaces.front();
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    if (s1.mode() == SurfaceMode::Box) {
        x0 = s1.intervals()[0].lo, x1 = s1.intervals()[0].hi;
        y0 = s1.intervals()[1].lo, y1 = s1.intervals()[1].hi;
    } else {
        for (const auto& v : s1.hulls().front().vertices()) {
            x0 = std::min(x0, v.x), x1 = std::max(x1, v.x);
            y0 = std::min(y0, v.y), y1 = std::max(y1, v.y);
        }
    }
    const double px = std::max(0.25 * (x1 - x0), 1.0), py = std::max(0.25 * (y1 - y0), 1.0);
    return {x0 - px, x1 + px, y0 - py, y1 + py, 64};
}

int regions_cmd(const RegionsArgs& a) {
    const Model model = load_model(a.model);
    if (model_dim(model) != 2) throw UsageError("REGION2D requires p=2");
    const CavityStack* stack = nullptr;
    if (const auto* ncc = std::get_if<NccModel>(&model))
        stack = &ncc->stack;
    else if (const auto* ncda = std::get_if<NcdaModel>(&model))
        stack = &ncda->ncc.stack;
    else
        throw UsageError("REGION2D needs an NCC or NCDA model");

    RegionGrid grid = default_grid(*stack);
    if (!a.bounds.empty()) {
        if (a.bounds.size() != 4) throw UsageError("--bounds takes xmin,xmax,ymin,ymax");
        grid = {a.bounds[0], a.bounds[1], a.bounds[2], a.bounds[3], 64};
    }
    grid.resolution = a.resolution;
    std::optional<Dataset> data;
    if (!a.data.empty()) data = load_dataset(a.data);
    write_text_file(a.out, render_regions_2d(model, grid, data ? &*data : nullptr));
    return kOk;
}

int curves_cmd(const CurvesArgs& a) {
    std::ifstream in(a.results);
    if (!in) throw Error("cannot open results " + a.results);
    std::ostringstream buf;
    buf << in.rdbuf();
    auto rows = parse_summary_csv(buf.str());
    if (!a.experiment.empty())
        std::erase_if(rows, [&](const SummaryRow& r) { return r.experiment != a.experiment; });
    if (rows.empty()) throw UsageError("no result rows to plot");
    write_text_file(a.out, render_curves(rows));
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Nested cavity classifiers and Monte-Carlo benchmark harness", "ncc"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Run a Monte-Carlo experiment");
    simulate_cmd->add_option("--config", sim.config, "Run configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    simulate_cmd->add_option("--out", sim.out, "Summary CSV path (overrides outputs.csv)");
    simulate_cmd->add_option("--curves", sim.curves, "Error-curve SVG path");
    auto* threads_opt = simulate_cmd->add_option("--threads", sim.threads, "Worker threads");

    FitArgs fa;
    auto* fit_sub = app.add_subcommand("fit", "Fit a classifier on a CSV dataset");
    fit_sub->add_option("--data", fa.data, "Training CSV")->required()->check(CLI::ExistingFile);
    fit_sub->add_option("--kind", fa.kind, "NCC, NCDA, LDA or QDA")
        ->check(CLI::IsMember({"NCC", "NCDA", "LDA", "QDA"}));
    fit_sub->add_option("--mode", fa.mode, "Surface mode")
        ->check(CLI::IsMember({"box", "adjacent", "allpairs"}));
    fit_sub->add_option("--max-depth", fa.max_depth, "Maximum number of nested surfaces")
        ->check(CLI::PositiveNumber);
    fit_sub->add_option("--outer-owner", fa.outer_owner, "Class wrapped first (1 or 2)")
        ->check(CLI::IsMember({1, 2}));
    fit_sub->add_flag("--calibrate-sign", fa.calibrate, "Choose the NCC sign by cross-validation");
    fit_sub->add_option("--folds", fa.folds, "Cross-validation folds")->check(CLI::Range(2, 1000));
    fit_sub->add_option("--out", fa.out, "Model JSON path")->required();

    PredictArgs pa;
    auto* predict_sub = app.add_subcommand("predict", "Label each row of a CSV");
    predict_sub->add_option("--model", pa.model)->required()->check(CLI::ExistingFile);
    predict_sub->add_option("--data", pa.data)->required()->check(CLI::ExistingFile);
    predict_sub->add_option("--out", pa.out)->required();

    ParcoordsArgs pc;
    auto* pc_sub = app.add_subcommand("render-parcoords", "Parallel-coordinates SVG");
    pc_sub->add_option("--data", pc.data)->required()->check(CLI::ExistingFile);
    pc_sub->add_option("--model", pc.model, "NCC/NCDA model whose surfaces are overlaid")
        ->check(CLI::ExistingFile);
    pc_sub->add_option("--out", pc.out)->required();

    RegionsArgs ra;
    auto* ra_sub = app.add_subcommand("render-regions", "2-D decision-region SVG");
    ra_sub->add_option("--model", ra.model)->required()->check(CLI::ExistingFile);
    ra_sub->add_option("--data", ra.data, "Training CSV to overplot")->check(CLI::ExistingFile);
    ra_sub->add_option("--bounds", ra.bounds, "xmin,xmax,ymin,ymax")->delimiter(',');
    ra_sub->add_option("--resolution", ra.resolution)->check(CLI::PositiveNumber);
    ra_sub->add_option("--out", ra.out)->required();

    CurvesArgs ca;
    auto* ca_sub = app.add_subcommand("render-curves", "Mean/std error against 1/n");
    ca_sub->add_option("--results", ca.results, "Summary CSV from simulate")
        ->required()
        ->check(CLI::ExistingFile);
    ca_sub->add_option("--experiment", ca.experiment, "Plot only this experiment");
    ca_sub->add_option("--out", ca.out)->required();

    std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rev.begin(), rev.end());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (*simulate_cmd) {
            sim.threads_set = threads_opt->count() > 0;
            return simulate(sim, out, err);
        }
        if (*fit_sub) return fit_cmd(fa, out);
        if (*predict_sub) return predict_cmd(pa);
        if (*pc_sub) return parcoords_cmd(pc);
        if (*ra_sub) return regions_cmd(ra);
        if (*ca_sub) return curves_cmd(ca);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kUsage;
}

}  // namespace ncc::cli
