#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "gdsq/common.hpp"
#include "gdsq/config.hpp"
#include "gdsq/jsonout.hpp"
#include "gdsq/runner.hpp"

namespace {

using gdsq::Json;

Json parse_number_list(const std::string& text, const char* flag) {
    Json arr = Json::array();
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string tok =
            comma == std::string::npos ? text.substr(pos) : text.substr(pos, comma - pos);
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            arr.push_back(v);
        } catch (const std::exception&) {
            gdsq::fail(flag, ": '", tok, "' is not a number");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return arr;
}

Json parse_int_list(const std::string& text, const char* flag) {
    Json arr = Json::array();
    for (const Json& v : parse_number_list(text, flag)) {
        const double d = v.get<double>();
        const int i = static_cast<int>(d);
        if (static_cast<double>(i) != d) gdsq::fail(flag, " needs integers");
        arr.push_back(i);
    }
    return arr;
}

Json parse_json_flag(const std::string& text, const char* flag) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        gdsq::fail(flag, " is not valid JSON: ", e.what());
    }
}

// One shared flag store; exactly one subcommand parses per invocation.
struct Flags {
    std::string config, report, csv, svg;
    std::uint64_t seed = 0;
    std::string a_json, p_json, kind;
    std::string manifold;
    int manifold_m = 0;
    std::string x, q, q0, q1, q2;
    std::string grid, window, dist, theorem, mode;
    int refine = 12, starts = 16, iters = 200, seed_grid = 64, trials = 1000, m = 3,
        attempts = 50;
    double delta = 1e-2, step = 1e-2;
    bool override_hyp = false;

    CLI::App* sub = nullptr;
    bool set(const char* name) const {
        const CLI::Option* o = sub->get_option_no_throw(name);
        return o != nullptr && o->count() > 0;
    }
};

void add_common(CLI::App* s, Flags& f) {
    s->add_option("--config", f.config, "JSON config file");
    s->add_option("--seed", f.seed, "RNG seed (overrides the config)");
    s->add_option("--report", f.report, "write the JSON report here instead of stdout");
    s->add_option("--csv", f.csv, "write CSV output here");
    s->add_option("--svg", f.svg, "write an SVG plot here");
}

void add_map(CLI::App* s, Flags& f) {
    s->add_option("--A", f.a_json, "coefficient matrix rows as JSON, e.g. [[1,2],[3,4]]");
    s->add_option("--p", f.p_json, "central point rows as JSON");
    s->add_option("--kind", f.kind, "map kind: distance-squared | lorentzian");
}

void add_manifold(CLI::App* s, Flags& f) {
    s->add_option("--manifold", f.manifold,
                  "specimen name: circle | trefoil | figure-eight | cusp | torus");
    s->add_option("--manifold-m", f.manifold_m, "ambient dimension for circle/torus");
}

void add_rank(CLI::App* s, Flags& f) {
    s->add_option("--grid", f.grid, "grid cells per axis, comma separated");
    s->add_option("--refine", f.refine, "local refinement rounds");
}

void add_gap(CLI::App* s, Flags& f) {
    if (s->get_option_no_throw("--grid") == nullptr)
        s->add_option("--grid", f.grid, "grid cells per axis, comma separated");
    s->add_option("--delta", f.delta, "separation below which pairs are excluded");
    s->add_option("--starts", f.starts, "descent starts from the best screen pairs");
    s->add_option("--iters", f.iters, "descent iteration cap");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for generalized distance-squared mappings"};
    app.require_subcommand(1);
    Flags f;

    CLI::App* eval = app.add_subcommand("eval", "evaluate G at a point");
    add_common(eval, f);
    add_map(eval, f);
    eval->add_option("--x", f.x, "point, comma separated");

    CLI::App* jac = app.add_subcommand("jacobian", "Jacobian of G at a point");
    add_common(jac, f);
    add_map(jac, f);
    jac->add_option("--x", f.x, "point, comma separated");

    CLI::App* cjac = app.add_subcommand("compose-jacobian", "Jacobian of G o f at a parameter");
    add_common(cjac, f);
    add_map(cjac, f);
    add_manifold(cjac, f);
    cjac->add_option("--q", f.q, "parameter point, comma separated");

    CLI::App* cimm = app.add_subcommand("check-immersion", "scan sigma_min of J(G o f)");
    add_common(cimm, f);
    add_map(cimm, f);
    add_manifold(cimm, f);
    add_rank(cimm, f);

    CLI::App* cinj = app.add_subcommand("check-injectivity", "scan the pairwise image gap of G o f");
    add_common(cinj, f);
    add_map(cinj, f);
    add_manifold(cinj, f);
    add_gap(cinj, f);

    CLI::App* cemb = app.add_subcommand("check-embedding", "both halves of the embedding check");
    add_common(cemb, f);
    add_map(cemb, f);
    add_manifold(cemb, f);
    add_rank(cemb, f);
    add_gap(cemb, f);

    CLI::App* sing = app.add_subcommand("singular-set", "trace and classify det JG = 0 (m = 2)");
    add_common(sing, f);
    add_map(sing, f);
    sing->add_option("--window", f.window, "x1_lo,x1_hi,x2_lo,x2_hi");
    sing->add_option("--step", f.step, "continuation step");
    sing->add_option("--seed-grid", f.seed_grid, "sign-change detection grid");

    CLI::App* cls = app.add_subcommand("classify", "Whitney class of a singular point (m = 2)");
    add_common(cls, f);
    add_map(cls, f);
    cls->add_option("--x", f.x, "point, comma separated");

    CLI::App* lem = app.add_subcommand("verify-lemmas",
                                       "singular centers and a constructed collision");
    add_common(lem, f);
    add_map(lem, f);
    lem->add_option("--m", f.m, "dimension of a random equidimensional map");
    lem->add_option("--attempts", f.attempts, "collision search attempts");

    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo genericity over central points");
    add_common(mc, f);
    add_manifold(mc, f);
    mc->add_option("--theorem", f.theorem, "immersion | injectivity");
    mc->add_option("--A", f.a_json, "fixed coefficient matrix rows as JSON");
    mc->add_option("--trials", f.trials, "number of sampled central points");
    mc->add_option("--dist", f.dist, "gaussian(mean,stddev) | uniform(lo,hi)");
    add_rank(mc, f);
    add_gap(mc, f);
    mc->add_flag("--override-hypothesis", f.override_hyp,
                 "run outside the theorem hypothesis");

    CLI::App* bad = app.add_subcommand("bad-p", "construct central points that defeat a check");
    add_common(bad, f);
    add_manifold(bad, f);
    bad->add_option("--mode", f.mode, "immersion | injectivity");
    bad->add_option("--A", f.a_json, "coefficient matrix rows as JSON");
    bad->add_option("--q0", f.q0, "parameter for the immersion construction");
    bad->add_option("--q1", f.q1, "first parameter for the injectivity construction");
    bad->add_option("--q2", f.q2, "second parameter for the injectivity construction");
    add_rank(bad, f);
    add_gap(bad, f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    f.sub = app.get_subcommands().front();
    const std::string name = f.sub->get_name();

    try {
        Json cfg = Json::object();
        if (f.set("--config")) {
            try {
                cfg = Json::parse(gdsq::read_text_file(f.config));
            } catch (const nlohmann::json::parse_error& e) {
                gdsq::fail("config is not valid JSON: ", e.what());
            }
            if (!cfg.is_object()) gdsq::fail("config must be a JSON object");
        }

        const bool map_sub = name != "mc" && name != "bad-p";
        if (map_sub && (f.set("--A") || f.set("--p") || f.set("--kind"))) {
            Json map = cfg.contains("map") && cfg.at("map").is_object() ? cfg.at("map")
                                                                        : Json::object();
            if (f.set("--A")) map["A"] = parse_json_flag(f.a_json, "--A");
            if (f.set("--p")) map["p"] = parse_json_flag(f.p_json, "--p");
            if (f.set("--kind")) map["kind"] = f.kind;
            cfg["map"] = std::move(map);
        }
        if (!map_sub && f.set("--A")) cfg["A"] = parse_json_flag(f.a_json, "--A");
        if (f.set("--manifold") || f.set("--manifold-m")) {
            Json man = cfg.contains("manifold") && cfg.at("manifold").is_object()
                           ? cfg.at("manifold")
                           : Json::object();
            if (f.set("--manifold")) man["kind"] = f.manifold;
            if (f.set("--manifold-m")) man["m"] = f.manifold_m;
            cfg["manifold"] = std::move(man);
        }
        if (f.set("--seed")) cfg["seed"] = f.seed;
        if (f.set("--x")) cfg["x"] = parse_number_list(f.x, "--x");
        if (f.set("--q")) cfg["q"] = parse_number_list(f.q, "--q");
        if (f.set("--q0")) cfg["q0"] = parse_number_list(f.q0, "--q0");
        if (f.set("--q1")) cfg["q1"] = parse_number_list(f.q1, "--q1");
        if (f.set("--q2")) cfg["q2"] = parse_number_list(f.q2, "--q2");
        if (f.set("--grid")) cfg["grid"] = parse_int_list(f.grid, "--grid");
        if (f.set("--refine")) cfg["refine_rounds"] = f.refine;
        if (f.set("--delta")) cfg["delta"] = f.delta;
        if (f.set("--starts")) cfg["starts"] = f.starts;
        if (f.set("--iters")) cfg["descent_max_iters"] = f.iters;
        if (f.set("--window")) {
            const Json w = parse_number_list(f.window, "--window");
            if (w.size() != 4) gdsq::fail("--window needs x1_lo,x1_hi,x2_lo,x2_hi");
            cfg["window"] = w;
        }
        if (f.set("--step")) cfg["step"] = f.step;
        if (f.set("--seed-grid")) cfg["seed_grid"] = f.seed_grid;
        if (f.set("--m")) cfg["m"] = f.m;
        if (f.set("--attempts")) cfg["attempts"] = f.attempts;
        if (f.set("--theorem")) cfg["theorem"] = f.theorem;
        if (f.set("--mode")) cfg["mode"] = f.mode;
        if (f.set("--trials")) cfg["trials"] = f.trials;
        if (f.set("--dist")) cfg["dist"] = f.dist;
        if (f.set("--override-hypothesis")) cfg["override_hypothesis"] = f.override_hyp;

        // Output paths may also come from the config file.
        std::string report_path = f.report, csv_path = f.csv, svg_path = f.svg;
        if (cfg.contains("output") && cfg.at("output").is_object()) {
            const Json out = cfg.at("output");
            if (report_path.empty() && out.contains("report"))
                report_path = out.at("report").get<std::string>();
            if (csv_path.empty() && out.contains("csv"))
                csv_path = out.at("csv").get<std::string>();
            if (svg_path.empty() && out.contains("svg"))
                svg_path = out.at("svg").get<std::string>();
        }

        const gdsq::RunArtifacts ra = gdsq::run_command(name, cfg, !svg_path.empty());
        const std::string report_text = gdsq::dump_deterministic(ra.report);
        if (report_path.empty())
            std::cout << report_text;
        else
            gdsq::write_text_file(report_path, report_text);
        if (!csv_path.empty()) {
            if (ra.csv.empty()) gdsq::fail("'", name, "' produces no CSV output");
            gdsq::write_text_file(csv_path, ra.csv);
        }
        if (!svg_path.empty()) {
            if (ra.svg.empty()) gdsq::fail("'", name, "' produces no SVG output");
            gdsq::write_text_file(svg_path, ra.svg);
        }
        return ra.exit_code;
    } catch (const gdsq::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}
