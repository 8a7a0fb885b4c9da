#include "gdsq/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "gdsq/common.hpp"
#include "gdsq/expr.hpp"

namespace gdsq {
namespace {

std::string fmt17(double v) {
    if (!std::isfinite(v)) fail("refusing to serialize a non-finite number");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double number_at(const Json& j, const std::string& path) {
    if (!j.is_number()) fail(path, " must be a number");
    return j.get<double>();
}

double field_number(const Json& j, const char* key, const std::string& path, double fallback,
                    bool required = false) {
    if (!j.contains(key)) {
        if (required) fail(path, ".", key, " is required");
        return fallback;
    }
    return number_at(j.at(key), path + "." + key);
}

int field_int(const Json& j, const char* key, const std::string& path, int fallback,
              bool required = false) {
    if (!j.contains(key)) {
        if (required) fail(path, ".", key, " is required");
        return fallback;
    }
    const Json& v = j.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned())
        fail(path, ".", key, " must be an integer");
    return v.get<int>();
}

bool field_bool(const Json& j, const char* key, const std::string& path, bool fallback) {
    if (!j.contains(key)) return fallback;
    const Json& v = j.at(key);
    if (!v.is_boolean()) fail(path, ".", key, " must be a boolean");
    return v.get<bool>();
}

}  // namespace

Json to_json(const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Json to_json(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::VectorXd vector_from_json(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, " must be a non-empty numeric array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = number_at(j[i], path + "[" + std::to_string(i) + "]");
    return v;
}

Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, " must be a non-empty array of rows");
    const Json& first = j[0];
    if (!first.is_array() || first.empty())
        fail(path, "[0] must be a non-empty numeric array");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()),
                      static_cast<Eigen::Index>(first.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        const Json& row = j[i];
        const std::string row_path = path + "[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != first.size())
            fail(row_path, " must be an array of length ", first.size());
        for (std::size_t c = 0; c < row.size(); ++c)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                number_at(row[c], row_path + "[" + std::to_string(c) + "]");
    }
    return m;
}

GdsMap map_from_json(const Json& j, const std::string& path) {
    if (!j.is_object()) fail(path, " must be an object");
    if (!j.contains("p")) fail(path, ".p is required");
    CentralPoints p(matrix_from_json(j.at("p"), path + ".p"));
    if (j.contains("kind")) {
        if (j.contains("A")) fail(path, ": give either kind or A, not both");
        const Json& k = j.at("kind");
        if (!k.is_string()) fail(path, ".kind must be a string");
        const std::string kind = k.get<std::string>();
        if (kind == "distance-squared") return make_distance_squared_map(std::move(p));
        if (kind == "lorentzian") return make_lorentzian_map(std::move(p));
        fail(path, ".kind must be 'distance-squared' or 'lorentzian', got '", kind, "'");
    }
    if (!j.contains("A")) fail(path, " needs either A or kind");
    CoefficientMatrix a(matrix_from_json(j.at("A"), path + ".A"));
    return GdsMap(std::move(a), std::move(p));
}

Json map_to_json(const GdsMap& g) {
    Json j = Json::object();
    j["A"] = to_json(g.coefficients().matrix());
    j["p"] = to_json(g.centers().matrix());
    return j;
}

ParamManifold manifold_from_json(const Json& j, const std::string& path) {
    if (!j.is_object()) fail(path, " must be an object");
    if (!j.contains("kind") || !j.at("kind").is_string())
        fail(path, ".kind must be a string");
    const std::string kind = j.at("kind").get<std::string>();

    if (kind == "circle") {
        const double radius = field_number(j, "radius", path, 1.0);
        Eigen::VectorXd center;
        int m = field_int(j, "m", path, 0);
        if (j.contains("center")) {
            center = vector_from_json(j.at("center"), path + ".center");
            if (m == 0) m = static_cast<int>(center.size());
            if (m != static_cast<int>(center.size()))
                fail(path, ".center has length ", center.size(), " but m = ", m);
        } else {
            if (m == 0) m = 2;
            center = Eigen::VectorXd::Zero(m);
        }
        return circle(radius, center, m);
    }
    if (kind == "trefoil") return trefoil();
    if (kind == "figure-eight") return figure_eight();
    if (kind == "cusp") return cusp_curve();
    if (kind == "torus") {
        const int m = field_int(j, "m", path, 4);
        const double major = field_number(j, "major_radius", path, 2.0);
        const double minor = field_number(j, "minor_radius", path, 1.0);
        return torus_surface(m, major, minor);
    }
    if (kind == "expr") {
        if (!j.contains("coordinates") || !j.at("coordinates").is_array() ||
            j.at("coordinates").empty())
            fail(path, ".coordinates must be a non-empty array of expression strings");
        std::vector<std::string> coords;
        for (std::size_t i = 0; i < j.at("coordinates").size(); ++i) {
            const Json& c = j.at("coordinates")[i];
            if (!c.is_string())
                fail(path, ".coordinates[", i, "] must be a string");
            coords.push_back(c.get<std::string>());
        }
        if (!j.contains("axes") || !j.at("axes").is_array() || j.at("axes").empty())
            fail(path, ".axes must be a non-empty array of {lo, hi, periodic}");
        std::vector<Axis> axes;
        for (std::size_t i = 0; i < j.at("axes").size(); ++i) {
            const Json& ax = j.at("axes")[i];
            const std::string ap = path + ".axes[" + std::to_string(i) + "]";
            if (!ax.is_object()) fail(ap, " must be an object");
            Axis axis;
            axis.lo = field_number(ax, "lo", ap, 0.0, true);
            axis.hi = field_number(ax, "hi", ap, 0.0, true);
            axis.periodic = field_bool(ax, "periodic", ap, false);
            axes.push_back(axis);
        }
        return make_expr_manifold(coords, std::move(axes),
                                  field_bool(j, "claims_immersion", path, false),
                                  field_bool(j, "claims_injective", path, false));
    }
    fail(path, ".kind '", kind,
         "' is unknown; expected circle, trefoil, figure-eight, cusp, torus, or expr");
}

Json to_json(const Tolerances& t) {
    Json j = Json::object();
    j["tol_rank"] = t.tol_rank;
    j["tol_collision"] = t.tol_collision;
    j["tol_margin"] = t.tol_margin;
    return j;
}

Tolerances tolerances_from_json(const Json& j, const std::string& path) {
    if (!j.is_object()) fail(path, " must be an object");
    Tolerances t;
    t.tol_rank = field_number(j, "tol_rank", path, t.tol_rank);
    t.tol_collision = field_number(j, "tol_collision", path, t.tol_collision);
    t.tol_margin = field_number(j, "tol_margin", path, t.tol_margin);
    if (!(t.tol_rank > 0.0)) fail(path, ".tol_rank must be positive");
    if (!(t.tol_collision > 0.0)) fail(path, ".tol_collision must be positive");
    if (!(t.tol_margin > 0.0)) fail(path, ".tol_margin must be positive");
    return t;
}

Json to_json(const RankReport& r) {
    Json j = Json::object();
    j["check"] = "immersion";
    j["grid"] = r.grid;
    j["sigma_min"] = r.sigma_min;
    j["sigma_min_screen"] = r.sigma_min_screen;
    j["witness"] = to_json(r.witness);
    j["refined"] = r.refined;
    j["verdict"] = to_string(r.verdict);
    j["scale"] = r.scale;
    j["tolerances"] = to_json(r.tolerances);
    return j;
}

Json to_json(const CollisionReport& r) {
    Json j = Json::object();
    j["check"] = "injectivity";
    j["grid"] = r.grid;
    j["q"] = to_json(r.q);
    j["q_prime"] = to_json(r.q_prime);
    j["image_gap"] = r.image_gap;
    j["image_gap_screen"] = r.image_gap_screen;
    j["separation"] = r.separation;
    j["delta"] = r.delta;
    j["verdict"] = to_string(r.verdict);
    j["scale"] = r.scale;
    j["tolerances"] = to_json(r.tolerances);
    return j;
}

Json to_json(const EmbeddingReport& r) {
    Json j = Json::object();
    j["check"] = "embedding";
    j["rank"] = to_json(r.rank);
    j["collision"] = to_json(r.collision);
    j["embedding_candidate"] = r.embedding_candidate;
    return j;
}

Json to_json(const LemmaSingularReport& r) {
    Json j = Json::object();
    j["check"] = "lemma_singular";
    Json centers = Json::array();
    for (const auto& c : r.centers) {
        Json e = Json::object();
        e["center"] = to_json(c.center);
        e["row_max_abs"] = c.row_max_abs;
        e["rank"] = c.rank;
        e["sigma_min"] = c.sigma_min;
        centers.push_back(std::move(e));
    }
    j["centers"] = std::move(centers);
    j["all_rows_zero"] = r.all_rows_zero;
    j["all_rank_deficient"] = r.all_rank_deficient;
    return j;
}

Json to_json(const CollisionWitness& w) {
    Json j = Json::object();
    j["x"] = to_json(w.x);
    j["x_prime"] = to_json(w.x_prime);
    j["gap"] = w.gap;
    j["distance"] = w.distance;
    j["attempts_used"] = w.attempts_used;
    return j;
}

Json to_json(const ConicCoefficients& c) {
    Json j = Json::object();
    j["c_xx"] = c.c_xx;
    j["c_yy"] = c.c_yy;
    j["c_xy"] = c.c_xy;
    j["c_x"] = c.c_x;
    j["c_y"] = c.c_y;
    j["c_0"] = c.c_0;
    return j;
}

Json to_json(const SingularCurve& c) {
    Json j = Json::object();
    j["check"] = "singular_curve";
    j["conic"] = to_json(c.conic);
    j["window"] = Json::array({c.window.x1_lo, c.window.x1_hi, c.window.x2_lo, c.window.x2_hi});
    j["step"] = c.step;
    Json comps = Json::array();
    for (const auto& comp : c.components) {
        Json e = Json::object();
        Json pts = Json::array();
        Json cls = Json::array();
        for (std::size_t k = 0; k < comp.points.size(); ++k) {
            pts.push_back(Json::array({comp.points[k][0], comp.points[k][1]}));
            cls.push_back(to_string(comp.classes[k]));
        }
        e["points"] = std::move(pts);
        e["classes"] = std::move(cls);
        comps.push_back(std::move(e));
    }
    j["components"] = std::move(comps);
    j["fold_count"] = c.fold_count;
    j["cusp_count"] = c.cusp_count;
    j["degenerate_count"] = c.degenerate_count;
    j["unresolved_count"] = c.unresolved_count;
    return j;
}

Json to_json(const Classification& c) {
    Json j = Json::object();
    j["check"] = "classify";
    j["class"] = to_string(c.cls);
    j["eta"] = Json::array({c.eta[0], c.eta[1]});
    j["grad_dot_eta"] = c.grad_dot_eta;
    j["eta_hess_eta"] = c.eta_hess_eta;
    j["det_value"] = c.det_value;
    return j;
}

Json to_json(const MonteCarloSummary& s) {
    Json j = Json::object();
    j["check"] = "mc";
    j["theorem"] = s.theorem;
    j["manifold"] = s.manifold;
    j["trials"] = s.trials;
    j["seed"] = s.seed;
    j["dist"] = to_string(s.dist);
    j["failures"] = s.failures;
    j["passes"] = s.passes;
    j["inconclusive"] = s.inconclusive;
    Json q = Json::object();
    q["min"] = s.quantiles.min;
    q["q25"] = s.quantiles.q25;
    q["median"] = s.quantiles.median;
    q["q75"] = s.quantiles.q75;
    q["max"] = s.quantiles.max;
    j["quantiles"] = std::move(q);
    j["margins"] = s.margins;
    Json verdicts = Json::array();
    for (const McVerdict v : s.verdicts) verdicts.push_back(to_string(v));
    j["verdicts"] = std::move(verdicts);
    return j;
}

void validate_report(const Json& report) {
    const auto need = [&](const Json& j, const char* key, const char* type,
                          const std::string& path) -> const Json& {
        if (!j.contains(key)) fail(path, ".", key, " missing from report");
        const Json& v = j.at(key);
        const std::string t = type;
        const bool ok = (t == "number" && v.is_number()) || (t == "integer" && v.is_number_integer()) ||
                        (t == "string" && v.is_string()) || (t == "boolean" && v.is_boolean()) ||
                        (t == "array" && v.is_array()) || (t == "object" && v.is_object());
        if (!ok) fail(path, ".", key, " must be of type ", type);
        return v;
    };
    if (!report.is_object() || !report.contains("check") || !report.at("check").is_string())
        fail("report.check must name the report type");
    const std::string check = report.at("check").get<std::string>();
    const std::string path = "report";
    if (check == "immersion") {
        need(report, "grid", "array", path);
        need(report, "sigma_min", "number", path);
        need(report, "sigma_min_screen", "number", path);
        need(report, "witness", "array", path);
        need(report, "refined", "boolean", path);
        need(report, "verdict", "string", path);
        need(report, "scale", "number", path);
        need(report, "tolerances", "object", path);
    } else if (check == "injectivity") {
        need(report, "grid", "array", path);
        need(report, "q", "array", path);
        need(report, "q_prime", "array", path);
        need(report, "image_gap", "number", path);
        need(report, "image_gap_screen", "number", path);
        need(report, "separation", "number", path);
        need(report, "delta", "number", path);
        need(report, "verdict", "string", path);
        need(report, "scale", "number", path);
        need(report, "tolerances", "object", path);
    } else if (check == "embedding") {
        validate_report(need(report, "rank", "object", path));
        validate_report(need(report, "collision", "object", path));
        need(report, "embedding_candidate", "boolean", path);
    } else if (check == "lemma_singular") {
        const Json& centers = need(report, "centers", "array", path);
        for (std::size_t i = 0; i < centers.size(); ++i) {
            const std::string cp = path + ".centers[" + std::to_string(i) + "]";
            need(centers[i], "center", "array", cp);
            need(centers[i], "row_max_abs", "number", cp);
            need(centers[i], "rank", "integer", cp);
            need(centers[i], "sigma_min", "number", cp);
        }
        need(report, "all_rows_zero", "boolean", path);
        need(report, "all_rank_deficient", "boolean", path);
    } else if (check == "singular_curve") {
        need(report, "conic", "object", path);
        need(report, "window", "array", path);
        need(report, "step", "number", path);
        const Json& comps = need(report, "components", "array", path);
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const std::string cp = path + ".components[" + std::to_string(i) + "]";
            need(comps[i], "points", "array", cp);
            need(comps[i], "classes", "array", cp);
        }
        need(report, "fold_count", "integer", path);
        need(report, "cusp_count", "integer", path);
        need(report, "degenerate_count", "integer", path);
        need(report, "unresolved_count", "integer", path);
    } else if (check == "classify") {
        need(report, "class", "string", path);
        need(report, "eta", "array", path);
        need(report, "grad_dot_eta", "number", path);
        need(report, "eta_hess_eta", "number", path);
        need(report, "det_value", "number", path);
    } else if (check == "mc") {
        need(report, "theorem", "string", path);
        need(report, "manifold", "string", path);
        need(report, "trials", "integer", path);
        need(report, "seed", "integer", path);
        need(report, "dist", "string", path);
        need(report, "failures", "integer", path);
        need(report, "passes", "integer", path);
        need(report, "inconclusive", "integer", path);
        need(report, "quantiles", "object", path);
        need(report, "margins", "array", path);
        need(report, "verdicts", "array", path);
    } else if (check == "lemmas") {
        validate_report(need(report, "singular", "object", path));
        need(report, "collision_found", "boolean", path);
    } else if (check == "value" || check == "jacobian" || check == "bad_p") {
        // free-form payloads; the check tag is enough
    } else {
        fail("report.check '", check, "' is not a known report type");
    }
}

std::string margins_csv(const MonteCarloSummary& s) {
    std::string out = "trial,margin,verdict\n";
    for (std::size_t t = 0; t < s.margins.size(); ++t) {
        out += std::to_string(t);
        out += ',';
        out += fmt17(s.margins[t]);
        out += ',';
        out += to_string(s.verdicts[t]);
        out += '\n';
    }
    return out;
}

std::string singular_curve_csv(const SingularCurve& c) {
    std::string out = "x1,x2,class\n";
    for (const auto& comp : c.components) {
        for (std::size_t k = 0; k < comp.points.size(); ++k) {
            out += fmt17(comp.points[k][0]);
            out += ',';
            out += fmt17(comp.points[k][1]);
            out += ',';
            out += to_string(comp.classes[k]);
            out += '\n';
        }
    }
    return out;
}

std::string sigma_grid_csv(const RankReport& r) {
    std::string out = "index,sigma_min\n";
    for (std::size_t i = 0; i < r.grid_values.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += fmt17(r.grid_values[i]);
        out += '\n';
    }
    return out;
}

}  // namespace gdsq
