#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncc/classifiers.hpp"
#include "ncc/simulation.hpp"

namespace ncc {

// ---------------------------------------------------------------------------
// Run configuration files

inline constexpr int kRunConfigSchemaVersion = 1;

/// An experiment plus where to put its outputs. Parsed from strict JSON:
/// unknown keys are errors, missing keys take ExperimentConfig defaults.
struct RunConfig {
    ExperimentConfig experiment;
    std::optional<std::filesystem::path> csv_out;
    std::optional<std::filesystem::path> curves_svg;
};

RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);
/// Inverse of parse_run_config; every key is written out.
std::string run_config_to_json(const RunConfig& cfg);

// ---------------------------------------------------------------------------
// Summary CSV: experiment,classifier,p,n,mean_err,std_err,trials

std::string format_summary_csv(const std::vector<SummaryRow>& rows);
void emit_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path);
/// Reads back a file written by emit_csv (only the printed columns).
std::vector<SummaryRow> parse_summary_csv(std::string_view text);

// ---------------------------------------------------------------------------
// SVG figures

struct FigureStyle {
    int width = 720;
    int height = 420;
    std::string omega1_color = "#1f5fa8";
    std::string omega2_color = "#c8432b";
};

/// One polyline per observation, coloured by class. Surfaces of `stack` are
/// drawn as panel outlines, S1 dashed and deeper surfaces solid.
/// Throws Error when the dimension is below 2.
std::string render_parcoords(const Dataset& data, const CavityStack* stack = nullptr,
                             const FigureStyle& style = {});

struct RegionGrid {
    double xmin = -1.0;
    double xmax = 1.0;
    double ymin = -1.0;
    double ymax = 1.0;
    int resolution = 64;

    /// Centre of cell (i, j); i indexes x, j indexes y, both from the minimum.
    Point2 cell_center(int i, int j) const noexcept;
};

/// Predicted class for every cell, row-major with j (y) outer, i (x) inner.
std::vector<ClassId> classify_grid(const Model& model, const RegionGrid& grid);

/// Shaded decision regions of a two-dimensional NCC or NCDA model. Cells are
/// emitted in classify_grid order. Observations in `training` that lie on a
/// surface boundary are drawn bold. Throws Error unless the model has p = 2
/// and is cavity-based.
std::string render_regions_2d(const Model& model, const RegionGrid& grid,
                              const Dataset* training = nullptr, const FigureStyle& style = {});

struct CurveSeries {
    std::string classifier;
    std::size_t p = 0;
    std::vector<double> x;  ///< 1/n, ascending
    std::vector<double> mean;
    std::vector<double> std;
};

/// Groups rows by (p, classifier), p ascending and classifiers in
/// first-appearance order. Throws Error on empty input or rows from more than
/// one experiment.
std::vector<CurveSeries> curve_series(const std::vector<SummaryRow>& rows);

/// Mean (left) and standard deviation (right) of the error against 1/n,
/// one series per classifier and one pair of panels per dimension.
std::string render_curves(const std::vector<SummaryRow>& rows, const FigureStyle& style = {});

void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace ncc
