#include "mianfis/data_io.hpp"

#include "mianfis/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace mianfis {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

bool parse_double(std::string_view text, double& out) {
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, out);
    return res.ec == std::errc() && res.ptr == end && std::isfinite(out);
}

std::string format_line(std::string_view comment) { return comment.empty() ? std::string{} : comment_block(std::string(comment)); }

}  // namespace

std::string comment_block(const std::string& text) {
    std::string out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out += "# " + line + "\n";
    return out;
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

BagDataset parse_bags(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t dim = 0;

    BagDataset ds;
    std::unordered_map<std::string, std::size_t> index_of;

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (!have_header) {
            if (line.empty() || line.front() == '#') continue;
            const auto fields = split_fields(line);
            if (fields.size() < 3 || fields[0] != "bag_id" || fields[1] != "label") {
                throw FormatError("line " + std::to_string(line_no) +
                                  ": missing header (expected 'bag_id,label,f1,...,fD')");
            }
            dim = fields.size() - 2;
            have_header = true;
            continue;
        }
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != dim + 2) {
            throw FormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(dim + 2) +
                              " columns, found " + std::to_string(fields.size()));
        }
        const std::string id(fields[0]);
        if (id.empty()) throw FormatError("line " + std::to_string(line_no) + ": empty bag_id");
        double label = 0.0;
        if (!parse_double(fields[1], label)) {
            throw FormatError("line " + std::to_string(line_no) + ", column 2: label '" + std::string(fields[1]) +
                              "' is not a finite number");
        }
        std::vector<double> row(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            if (!parse_double(fields[j + 2], row[j])) {
                throw FormatError("line " + std::to_string(line_no) + ", column " + std::to_string(j + 3) +
                                  ": feature '" + std::string(fields[j + 2]) + "' is not a finite number");
            }
        }
        auto [it, inserted] = index_of.try_emplace(id, ds.bags.size());
        if (inserted) {
            Bag bag;
            bag.id = id;
            bag.label = label;
            ds.bags.push_back(std::move(bag));
        }
        Bag& bag = ds.bags[it->second];
        if (bag.label != label) {
            throw DataError("bag '" + id + "' has inconsistent labels (" + format_real(bag.label) + " and " +
                            format_real(label) + ", line " + std::to_string(line_no) + ")");
        }
        bag.instances.append_row(row);
    }
    if (!have_header) throw FormatError("line " + std::to_string(line_no + 1) + ": missing header (empty file)");
    ds.dim = dim;
    auto violations = validate_dataset(ds);
    if (!violations.empty()) throw DataError(violations.front().message);
    return ds;
}

BagDataset read_bags(const std::filesystem::path& path) { return parse_bags(read_text_file(path)); }

std::string format_bags(const BagDataset& ds, const std::string& comment) {
    std::string out = format_line(comment);
    out += "bag_id,label";
    for (std::size_t j = 1; j <= ds.dim; ++j) out += ",f" + std::to_string(j);
    out += '\n';
    for (const auto& bag : ds.bags) {
        if (bag.id.find_first_of(",\n\r") != std::string::npos || bag.id.empty() || bag.id.front() == '#') {
            throw DomainError("bag id '" + bag.id + "' cannot be written to CSV");
        }
        for (std::size_t i = 0; i < bag.size(); ++i) {
            out += bag.id;
            out += ',';
            out += format_real(bag.label);
            for (double v : bag.instances.row(i)) {
                out += ',';
                out += format_real(v);
            }
            out += '\n';
        }
    }
    return out;
}

void write_bags(const BagDataset& ds, const std::filesystem::path& path, const std::string& comment) {
    write_text_file(path, format_bags(ds, comment));
}

nlohmann::json model_to_json(const MiAnfisModel& model, const std::optional<PcaMap>& pca, const nlohmann::json& config) {
    validate_model(model);
    nlohmann::json doc;
    doc["version"] = kModelFormatVersion;
    doc["D"] = model.dim();
    doc["order"] = to_string(model.order);
    doc["alpha_premise"] = model.alpha_premise;
    doc["alpha_consequent"] = model.alpha_consequent;
    auto rules = nlohmann::json::array();
    for (const auto& rule : model.rules) {
        nlohmann::json r;
        std::vector<double> c;
        std::vector<double> s;
        for (const auto& mf : rule.premise) {
            c.push_back(mf.center());
            s.push_back(mf.sigma());
        }
        r["c"] = c;
        r["sigma"] = s;
        r["b"] = rule.consequent;
        rules.push_back(std::move(r));
    }
    doc["rules"] = std::move(rules);
    if (pca) {
        doc["pca"] = {{"mean", pca->mean}, {"basis", pca->basis}, {"explained", pca->explained}};
    }
    if (!config.is_null()) doc["config"] = config;
    return doc;
}

namespace {

std::vector<double> real_array(const nlohmann::json& node, const std::string& what) {
    if (!node.is_array()) throw FormatError(what + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : node) {
        if (!v.is_number()) throw FormatError(what + " must contain only numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

const nlohmann::json& field(const nlohmann::json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key)) throw FormatError(std::string("model file is missing '") + key + "'");
    return obj.at(key);
}

}  // namespace

LoadedModel model_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw FormatError("model file must be a JSON object");
    const auto& version = field(doc, "version");
    if (!version.is_number_integer() || version.get<long long>() != kModelFormatVersion) {
        throw UnsupportedVersionError("unsupported model format version " + version.dump() + " (this build reads " +
                                      std::to_string(kModelFormatVersion) + ")");
    }
    const auto& dim_node = field(doc, "D");
    if (!dim_node.is_number_unsigned() || dim_node.get<std::size_t>() == 0) {
        throw FormatError("'D' must be a positive integer");
    }
    const auto dim = dim_node.get<std::size_t>();
    const auto& order_node = field(doc, "order");
    if (!order_node.is_string()) throw FormatError("'order' must be a string");

    LoadedModel out;
    auto& model = out.model;
    try {
        model.order = parse_order(order_node.get<std::string>());
    } catch (const DomainError& e) {
        throw FormatError(e.what());
    }
    const auto& ap = field(doc, "alpha_premise");
    const auto& ac = field(doc, "alpha_consequent");
    if (!ap.is_number() || !ac.is_number()) throw FormatError("softmax alphas must be numbers");
    model.alpha_premise = ap.get<double>();
    model.alpha_consequent = ac.get<double>();

    const auto& rules = field(doc, "rules");
    if (!rules.is_array() || rules.empty()) throw FormatError("'rules' must be a non-empty array");
    for (std::size_t i = 0; i < rules.size(); ++i) {
        const std::string where = "rule " + std::to_string(i);
        const auto c = real_array(field(rules[i], "c"), where + " 'c'");
        const auto s = real_array(field(rules[i], "sigma"), where + " 'sigma'");
        const auto b = real_array(field(rules[i], "b"), where + " 'b'");
        if (c.size() != dim || s.size() != dim) {
            throw FormatError(where + ": |c| = " + std::to_string(c.size()) + ", |sigma| = " +
                              std::to_string(s.size()) + ", expected D = " + std::to_string(dim));
        }
        if (b.size() != dim + 1) {
            throw FormatError(where + ": |b| = " + std::to_string(b.size()) + ", expected D+1 = " +
                              std::to_string(dim + 1));
        }
        if (model.order == ConsequentOrder::zero) {
            for (std::size_t k = 1; k <= dim; ++k) {
                if (b[k] != 0.0) {
                    throw FormatError(where + ": zero-order model has nonzero b" + std::to_string(k));
                }
            }
        }
        MiRule rule;
        for (std::size_t j = 0; j < dim; ++j) {
            if (!(s[j] > 0.0)) throw FormatError(where + ": sigma must be positive");
            rule.premise.emplace_back(c[j], s[j]);
        }
        rule.consequent = b;
        model.rules.push_back(std::move(rule));
    }
    try {
        validate_model(model);
    } catch (const DomainError& e) {
        throw FormatError(e.what());
    }

    if (doc.contains("pca") && !doc.at("pca").is_null()) {
        const auto& p = doc.at("pca");
        PcaMap map;
        map.mean = real_array(field(p, "mean"), "pca 'mean'");
        map.explained = real_array(field(p, "explained"), "pca 'explained'");
        const auto& basis = field(p, "basis");
        if (!basis.is_array()) throw FormatError("pca 'basis' must be an array of rows");
        for (const auto& row : basis) map.basis.push_back(real_array(row, "pca basis row"));
        if (map.basis.size() != map.mean.size()) throw FormatError("pca basis must have one row per input feature");
        for (const auto& row : map.basis) {
            if (row.size() != map.explained.size()) throw FormatError("pca basis rows must have d entries");
        }
        if (map.explained.size() != dim) throw FormatError("pca output dimension must equal model D");
        out.pca = std::move(map);
    }
    if (doc.contains("config")) out.config = doc.at("config");
    return out;
}

void save_model(const MiAnfisModel& model, const std::optional<PcaMap>& pca, const std::filesystem::path& path,
                const nlohmann::json& config) {
    write_text_file(path, model_to_json(model, pca, config).dump(2) + "\n");
}

LoadedModel load_model(const std::filesystem::path& path) {
    const auto text = read_text_file(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError("model file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return model_from_json(doc);
}

std::string format_report_csv(const TrainReport& report, const std::string& comment) {
    std::string out = format_line(comment);
    out += "epoch,rmse\n";
    for (std::size_t e = 0; e < report.rmse.size(); ++e) {
        out += std::to_string(e + 1) + "," + format_real(report.rmse[e]) + "\n";
    }
    return out;
}

std::string format_cv_csv(const CvResult& cv, const std::string& comment) {
    std::string out = format_line(comment);
    out += "fold,test_bags,accuracy,final_train_rmse,epochs,stop_reason\n";
    for (std::size_t f = 0; f < cv.folds.size(); ++f) {
        const auto& s = cv.folds[f];
        out += std::to_string(f + 1) + "," + std::to_string(s.test_bags) + "," + format_real(s.accuracy) + "," +
               format_real(s.final_train_rmse) + "," + std::to_string(s.epochs) + "," + to_string(s.stop_reason) +
               "\n";
    }
    out += "mean,," + format_real(cv.mean) + ",,,\n";
    out += "std,," + format_real(cv.stddev) + ",,,\n";
    return out;
}

std::string format_roc_csv(const RocCurve& curve, const std::string& comment) {
    std::string out = format_line(comment);
    out += "far,pd\n";
    for (const auto& p : curve.points) out += format_real(p.false_alarm_rate) + "," + format_real(p.detection_rate) + "\n";
    return out;
}

std::string format_dropout_csv(const DropoutTraces& t, const std::string& comment) {
    std::string out = format_line(comment);
    out += "epoch,train_sse_dropout,test_sse_dropout,train_sse_plain,test_sse_plain\n";
    const std::size_t n = std::max(t.train_sse_dropout.size(), t.train_sse_plain.size());
    auto cell = [](const std::vector<double>& v, std::size_t i) { return i < v.size() ? format_real(v[i]) : ""; };
    for (std::size_t e = 0; e < n; ++e) {
        out += std::to_string(e + 1) + "," + cell(t.train_sse_dropout, e) + "," + cell(t.test_sse_dropout, e) + "," +
               cell(t.train_sse_plain, e) + "," + cell(t.test_sse_plain, e) + "\n";
    }
    return out;
}

namespace {

std::string xml_escape(const std::string& text) {
    std::string out;
    for (char ch : text) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

}  // namespace

std::string svg_line_plot(const std::vector<PlotSeries>& series, const std::string& title, const std::string& x_label,
                          const std::string& y_label) {
    constexpr double width = 640;
    constexpr double height = 420;
    constexpr double left = 70;
    constexpr double right = 20;
    constexpr double top = 40;
    constexpr double bottom = 55;
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

    double x0 = std::numeric_limits<double>::infinity();
    double x1 = -x0;
    double y0 = x0;
    double y1 = -x0;
    for (const auto& s : series) {
        for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
        for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
    }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    auto px = [&](double v) { return left + (v - x0) / (x1 - x0) * (width - left - right); };
    auto py = [&](double v) { return height - bottom - (v - y0) / (y1 - y0) * (height - top - bottom); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(title) << "</text>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
        << height - bottom << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
        << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double xv = x0 + (x1 - x0) * t / 4.0;
        const double yv = y0 + (y1 - y0) * t / 4.0;
        svg << "<text x=\"" << px(xv) << "\" y=\"" << height - bottom + 16 << "\" text-anchor=\"middle\">" << xv
            << "</text>\n";
        svg << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << yv << "</text>\n";
    }
    svg << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
        << xml_escape(x_label) << "</text>\n";
    svg << "<text transform=\"translate(16," << (top + height - bottom) / 2
        << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(y_label) << "</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* color = palette[i % std::size(palette)];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
            svg << px(s.x[k]) << "," << py(s.y[k]) << " ";
        }
        svg << "\"/>\n";
        svg << "<text x=\"" << width - right - 150 << "\" y=\"" << top + 16 * (i + 1) << "\" fill=\"" << color << "\">"
            << xml_escape(s.name) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) throw DataError("failed writing '" + path.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw DataError("cannot move output into place at '" + path.string() + "'");
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace mianfis
