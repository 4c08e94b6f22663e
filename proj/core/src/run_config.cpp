#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ncc/report.hpp"

namespace ncc {

using json = nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) throw Error("unknown key '" + key + "' in " + where);
    }
}

template <typename T>
void read_if(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
    try {
        const json doc = json::parse(text);
        if (!doc.is_object()) throw Error("run config must be a JSON object");
        reject_unknown(doc,
                       {"schema_version", "experiment", "separation", "dims", "train_sizes",
                        "trials", "test_per_class", "classifiers", "surface_mode", "outer_owner",
                        "max_depth", "ladder", "base_seed", "sign_calibration", "cv_folds",
                        "threads", "outputs"},
                       "run config");
        if (!doc.contains("schema_version")) throw Error("run config lacks schema_version");
        const int version = doc.at("schema_version").get<int>();
        if (version != kRunConfigSchemaVersion)
            throw Error("unsupported run config schema_version " + std::to_string(version));

        RunConfig rc;
        auto& e = rc.experiment;
        if (doc.contains("experiment"))
            e.experiment = parse_experiment(doc.at("experiment").get<std::string>());
        read_if(doc, "separation", e.separation);
        read_if(doc, "dims", e.dims);
        read_if(doc, "train_sizes", e.train_sizes);
        read_if(doc, "trials", e.trials);
        read_if(doc, "test_per_class", e.test_per_class);
        if (doc.contains("classifiers")) {
            e.classifiers.clear();
            for (const auto& k : doc.at("classifiers"))
                e.classifiers.push_back(parse_kind(k.get<std::string>()));
        }
        if (doc.contains("surface_mode"))
            e.ncc.mode = parse_mode(doc.at("surface_mode").get<std::string>());
        if (doc.contains("outer_owner"))
            e.ncc.outer_owner = class_from_code(doc.at("outer_owner").get<int>());
        read_if(doc, "max_depth", e.ncc.max_depth);
        if (doc.contains("ladder")) {
            const auto& l = doc.at("ladder");
            reject_unknown(l, {"initial_scale", "factor", "max_steps"}, "ladder");
            read_if(l, "initial_scale", e.ladder.initial_scale);
            read_if(l, "factor", e.ladder.factor);
            read_if(l, "max_steps", e.ladder.max_steps);
        }
        read_if(doc, "base_seed", e.base_seed);
        read_if(doc, "sign_calibration", e.sign_calibration);
        read_if(doc, "cv_folds", e.cv_folds);
        read_if(doc, "threads", e.threads);
        if (doc.contains("outputs")) {
            const auto& o = doc.at("outputs");
            reject_unknown(o, {"csv", "curves_svg"}, "outputs");
            if (o.contains("csv")) rc.csv_out = o.at("csv").get<std::string>();
            if (o.contains("curves_svg")) rc.curves_svg = o.at("curves_svg").get<std::string>();
        }
        e.validate();
        return rc;
    } catch (const json::exception& ex) {
        throw Error(std::string("invalid run config: ") + ex.what());
    }
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

std::string run_config_to_json(const RunConfig& rc) {
    const auto& e = rc.experiment;
    json classifiers = json::array();
    for (auto k : e.classifiers) classifiers.push_back(kind_name(k));
    json doc{{"schema_version", kRunConfigSchemaVersion},
             {"experiment", experiment_name(e.experiment)},
             {"separation", e.separation},
             {"dims", e.dims},
             {"train_sizes", e.train_sizes},
             {"trials", e.trials},
             {"test_per_class", e.test_per_class},
             {"classifiers", classifiers},
             {"surface_mode", mode_name(e.ncc.mode)},
             {"outer_owner", label_code(e.ncc.outer_owner)},
             {"max_depth", e.ncc.max_depth},
             {"ladder",
              {{"initial_scale", e.ladder.initial_scale},
               {"factor", e.ladder.factor},
               {"max_steps", e.ladder.max_steps}}},
             {"base_seed", e.base_seed},
             {"sign_calibration", e.sign_calibration},
             {"cv_folds", e.cv_folds},
             {"threads", e.threads}};
    json outputs = json::object();
    if (rc.csv_out) outputs["csv"] = rc.csv_out->string();
    if (rc.curves_svg) outputs["curves_svg"] = rc.curves_svg->string();
    if (!outputs.empty()) doc["outputs"] = outputs;
    return doc.dump(2) + "\n";
}

std::string format_summary_csv(const std::vector<SummaryRow>& rows) {
    std::string out = "experiment,classifier,p,n,mean_err,std_err,trials\n";
    char buf[64];
    for (const auto& r : rows) {
        out += r.experiment + ',' + r.classifier + ',' + std::to_string(r.p) + ',' +
               std::to_string(r.n) + ',';
        std::snprintf(buf, sizeof buf, "%.6f,%.6f,", r.mean_err, r.std_err);
        out += buf;
        out += std::to_string(r.trials) + '\n';
    }
    return out;
}

void emit_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path) {
    write_text_file(path, format_summary_csv(rows));
}

std::vector<SummaryRow> parse_summary_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != "experiment,classifier,p,n,mean_err,std_err,trials")
        throw Error("summary CSV has an unexpected header");
    std::vector<SummaryRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (f.size() != 7) throw ParseError(lineno, "expected 7 fields");
        try {
            SummaryRow r;
            r.experiment = f[0];
            r.classifier = f[1];
            r.p = std::stoul(f[2]);
            r.n = std::stoul(f[3]);
            r.mean_err = std::stod(f[4]);
            r.std_err = std::stod(f[5]);
            r.trials = std::stoul(f[6]);
            r.std_defined = r.trials > 1;
            rows.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw ParseError(lineno, "non-numeric field");
        }
    }
    return rows;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("write failed for " + path.string());
}

}  // namespace ncc
