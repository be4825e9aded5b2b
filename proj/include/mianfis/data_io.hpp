#pragma once

#include "mianfis/bag.hpp"
#include "mianfis/eval.hpp"
#include "mianfis/init.hpp"
#include "mianfis/model.hpp"
#include "mianfis/training.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mianfis {

inline constexpr int kModelFormatVersion = 1;

/// Parses the bag CSV schema `bag_id,label,f1,...,fD` (one row per instance).
/// Lines starting with '#' before the header are comments. Bags keep the
/// order of their first row; rows of a bag need not be contiguous.
BagDataset parse_bags(const std::string& text);
BagDataset read_bags(const std::filesystem::path& path);

std::string format_bags(const BagDataset& ds, const std::string& comment = {});
void write_bags(const BagDataset& ds, const std::filesystem::path& path, const std::string& comment = {});

/// Shortest decimal form that still carries 17 significant digits.
std::string format_real(double v);

nlohmann::json model_to_json(const MiAnfisModel& model, const std::optional<PcaMap>& pca = std::nullopt,
                             const nlohmann::json& config = nullptr);

struct LoadedModel {
    MiAnfisModel model;
    std::optional<PcaMap> pca;
    nlohmann::json config;  // null when absent
};

LoadedModel model_from_json(const nlohmann::json& doc);

void save_model(const MiAnfisModel& model, const std::optional<PcaMap>& pca, const std::filesystem::path& path,
                const nlohmann::json& config = nullptr);
LoadedModel load_model(const std::filesystem::path& path);

/// `epoch,rmse` rows, epochs numbered from 1.
std::string format_report_csv(const TrainReport& report, const std::string& comment = {});
std::string format_cv_csv(const CvResult& cv, const std::string& comment = {});
std::string format_roc_csv(const RocCurve& curve, const std::string& comment = {});
std::string format_dropout_csv(const DropoutTraces& traces, const std::string& comment = {});

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal standalone SVG line chart.
std::string svg_line_plot(const std::vector<PlotSeries>& series, const std::string& title, const std::string& x_label,
                          const std::string& y_label);

/// Writes via a temporary sibling file and rename, so readers never observe a partial file.
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

/// Prefixes every line of `text` with "# ".
std::string comment_block(const std::string& text);

}  // namespace mianfis
