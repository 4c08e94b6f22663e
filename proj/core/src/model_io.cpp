#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ncc/classifiers.hpp"

namespace ncc {

using json = nlohmann::json;

namespace {

constexpr const char* kFormatTag = "ncc-model";

json to_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

json to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
        rows.push_back(std::move(r));
    }
    return rows;
}

Vector vector_from(const json& a, std::size_t expected) {
    if (!a.is_array() || a.size() != expected) throw Error("vector has wrong length");
    Vector v(static_cast<Eigen::Index>(expected));
    for (std::size_t i = 0; i < expected; ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
    return v;
}

Eigen::MatrixXd matrix_from(const json& a, std::size_t n) {
    if (!a.is_array() || a.size() != n) throw Error("matrix has wrong row count");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        m.row(static_cast<Eigen::Index>(i)) = vector_from(a[i], n).transpose();
    }
    return m;
}

json ncc_json(const NccModel& m) {
    const auto& st = m.stack;
    json surfaces = json::array();
    for (const auto& s : st.surfaces) {
        json js{{"owner", label_code(s.owner())}, {"depth", s.depth()}};
        if (s.mode() == SurfaceMode::Box) {
            json iv = json::array();
            for (const auto& i : s.intervals()) iv.push_back({i.lo, i.hi});
            js["intervals"] = std::move(iv);
        } else {
            json panels = json::array();
            for (const auto& h : s.hulls()) {
                json verts = json::array();
                for (const auto& v : h.vertices()) verts.push_back({v.x, v.y});
                panels.push_back(std::move(verts));
            }
            js["panels"] = std::move(panels);
        }
        surfaces.push_back(std::move(js));
    }
    return json{{"flipped", m.flipped},
                {"mode", mode_name(st.surfaces.front().mode())},
                {"outer_owner", label_code(st.outer_owner)},
                {"max_depth", st.max_depth},
                {"dim", st.dim()},
                {"surfaces", std::move(surfaces)}};
}

NccModel ncc_from(const json& j) {
    NccModel m;
    m.flipped = j.at("flipped").get<bool>();
    const auto mode = parse_mode(j.at("mode").get<std::string>());
    const auto dim = j.at("dim").get<std::size_t>();
    m.stack.outer_owner = class_from_code(j.at("outer_owner").get<int>());
    m.stack.max_depth = j.at("max_depth").get<int>();
    const auto& surfaces = j.at("surfaces");
    if (!surfaces.is_array() || surfaces.empty()) throw Error("model has no surfaces");
    if (surfaces.size() > static_cast<std::size_t>(m.stack.max_depth))
        throw Error("model has more surfaces than max_depth");
    ClassId expected_owner = m.stack.outer_owner;
    int depth = 1;
    for (const auto& js : surfaces) {
        const auto owner = class_from_code(js.at("owner").get<int>());
        if (owner != expected_owner || js.at("depth").get<int>() != depth)
            throw Error("surface owners must alternate from the outer owner");
        if (mode == SurfaceMode::Box) {
            std::vector<Interval> iv;
            for (const auto& pair : js.at("intervals"))
                iv.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
            if (iv.size() != dim) throw Error("box surface has wrong axis count");
            m.stack.surfaces.push_back(Surface::box(std::move(iv), owner, depth));
        } else {
            std::vector<Hull2D> hulls;
            for (const auto& panel : js.at("panels")) {
                std::vector<Point2> verts;
                for (const auto& v : panel) verts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
                hulls.push_back(convex_hull_2d(verts));
            }
            m.stack.surfaces.push_back(Surface::hull_panels(mode, dim, std::move(hulls), owner, depth));
        }
        expected_owner = other(expected_owner);
        ++depth;
    }
    return m;
}

json lda_json(const LdaModel& m) {
    return json{{"dim", m.dim()},
                {"mean1", to_json(m.mean1)},
                {"mean2", to_json(m.mean2)},
                {"pooled_precision", to_json(m.pooled_precision)},
                {"log_prior_ratio", m.log_prior_ratio},
                {"lambda", m.lambda}};
}

LdaModel lda_from(const json& j) {
    LdaModel m;
    const auto dim = j.at("dim").get<std::size_t>();
    if (dim == 0) throw Error("model dimension must be >= 1");
    m.mean1 = vector_from(j.at("mean1"), dim);
    m.mean2 = vector_from(j.at("mean2"), dim);
    m.pooled_precision = matrix_from(j.at("pooled_precision"), dim);
    m.log_prior_ratio = j.at("log_prior_ratio").get<double>();
    m.lambda = j.at("lambda").get<double>();
    return m;
}

json qda_json(const QdaModel& m) {
    json classes = json::array();
    for (const auto& k : m.classes) {
        classes.push_back(json{{"mean", to_json(k.mean)},
                               {"precision", to_json(k.precision)},
                               {"log_det", k.log_det},
                               {"log_prior", k.log_prior},
                               {"lambda", k.lambda}});
    }
    return json{{"dim", m.dim()}, {"classes", std::move(classes)}};
}

QdaModel qda_from(const json& j) {
    QdaModel m;
    const auto dim = j.at("dim").get<std::size_t>();
    if (dim == 0) throw Error("model dimension must be >= 1");
    const auto& classes = j.at("classes");
    if (!classes.is_array() || classes.size() != 2) throw Error("QDA model needs two classes");
    for (std::size_t c = 0; c < 2; ++c) {
        const auto& jc = classes[c];
        auto& k = m.classes[c];
        k.mean = vector_from(jc.at("mean"), dim);
        k.precision = matrix_from(jc.at("precision"), dim);
        k.log_det = jc.at("log_det").get<double>();
        k.log_prior = jc.at("log_prior").get<double>();
        k.lambda = jc.at("lambda").get<double>();
    }
    return m;
}

}  // namespace

std::string model_to_json(const Model& m) {
    json doc{{"format", kFormatTag},
             {"version", kModelFormatVersion},
             {"kind", [&] {
                  std::string k = kind_name(kind_of(m));
                  for (auto& ch : k) ch = static_cast<char>(std::tolower(ch));
                  return k;
              }()}};
    std::visit(
        [&](const auto& model) {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, NccModel>)
                doc["ncc"] = ncc_json(model);
            else if constexpr (std::is_same_v<T, LdaModel>)
                doc["lda"] = lda_json(model);
            else if constexpr (std::is_same_v<T, QdaModel>)
                doc["qda"] = qda_json(model);
            else {
                doc["ncc"] = ncc_json(model.ncc);
                doc["lda"] = lda_json(model.lda);
            }
        },
        m);
    return doc.dump(2) + "\n";
}

Model model_from_json(std::string_view text) {
    try {
        const json doc = json::parse(text);
        if (!doc.is_object() || doc.value("format", "") != kFormatTag)
            throw Error("not an ncc-model document");
        const int version = doc.at("version").get<int>();
        if (version != kModelFormatVersion)
            throw Error("unsupported model version " + std::to_string(version) + " (expected " +
                        std::to_string(kModelFormatVersion) + ")");
        const auto kind = doc.at("kind").get<std::string>();
        if (kind == "ncc") return ncc_from(doc.at("ncc"));
        if (kind == "lda") return lda_from(doc.at("lda"));
        if (kind == "qda") return qda_from(doc.at("qda"));
        if (kind == "ncda") {
            NcdaModel m{ncc_from(doc.at("ncc")), lda_from(doc.at("lda"))};
            if (m.ncc.dim() != m.lda.dim()) throw Error("NCDA submodels differ in dimension");
            return m;
        }
        throw Error("unknown model kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw Error(std::string("malformed model file: ") + e.what());
    }
}

void save_model(const Model& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write model " + path.string());
    out << model_to_json(m);
    if (!out) throw Error("write failed for " + path.string());
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open model " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_json(buf.str());
}

}  // namespace ncc
