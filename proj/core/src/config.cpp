#include "gdsq/config.hpp"

#include <algorithm>
#include <set>

#include "gdsq/common.hpp"
#include "gdsq/genericity.hpp"
#include "gdsq/serialize.hpp"

namespace gdsq {
namespace {

const std::vector<std::string> kSubcommands = {
    "eval",           "jacobian",       "compose-jacobian", "check-immersion",
    "check-injectivity", "check-embedding", "singular-set",  "classify",
    "verify-lemmas",  "mc",             "bad-p"};

void check_vector(const Json& c, const char* key) {
    vector_from_json(c.at(key), std::string("config.") + key);
}

void check_positive(const Json& c, const char* key) {
    const Json& v = c.at(key);
    if (!v.is_number() || !(v.get<double>() > 0.0))
        fail("config.", key, " must be a positive number");
}

void check_int_min(const Json& c, const char* key, int lo) {
    const Json& v = c.at(key);
    if (!v.is_number_integer() || v.get<int>() < lo)
        fail("config.", key, " must be an integer >= ", lo);
}

void check_bool(const Json& c, const char* key) {
    if (!c.at(key).is_boolean()) fail("config.", key, " must be a boolean");
}

void check_seed(const Json& c, const char* key) {
    const Json& v = c.at(key);
    if (!(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0)))
        fail("config.", key, " must be a non-negative integer");
}

void check_grid(const Json& c) {
    const Json& v = c.at("grid");
    if (v.is_number_integer()) {
        if (v.get<int>() < 1) fail("config.grid must be >= 1");
        return;
    }
    if (!v.is_array() || v.empty()) fail("config.grid must be an integer or an integer array");
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_number_integer() || v[i].get<int>() < 1)
            fail("config.grid[", i, "] must be an integer >= 1");
}

void check_window(const Json& c) {
    const Json& v = c.at("window");
    if (!v.is_array() || v.size() != 4)
        fail("config.window must be [x1_lo, x1_hi, x2_lo, x2_hi]");
    for (std::size_t i = 0; i < 4; ++i)
        if (!v[i].is_number()) fail("config.window[", i, "] must be a number");
    if (!(v[0].get<double>() < v[1].get<double>()) || !(v[2].get<double>() < v[3].get<double>()))
        fail("config.window must satisfy x1_lo < x1_hi and x2_lo < x2_hi");
}

void check_string_choice(const Json& c, const char* key,
                         const std::vector<std::string>& choices) {
    const Json& v = c.at(key);
    if (!v.is_string() || std::find(choices.begin(), choices.end(), v.get<std::string>()) ==
                              choices.end()) {
        std::string joined;
        for (const auto& ch : choices) joined += (joined.empty() ? "" : " | ") + ch;
        fail("config.", key, " must be one of: ", joined);
    }
}

void check_output(const Json& c) {
    const Json& v = c.at("output");
    if (!v.is_object()) fail("config.output must be an object");
    for (const auto& [key, value] : v.items()) {
        if (key != "report" && key != "csv" && key != "svg")
            fail("config.output.", key, " is not a recognized field");
        if (!value.is_string()) fail("config.output.", key, " must be a string path");
    }
}

struct Field {
    const char* name;
    bool required;
    void (*check)(const Json&);
};

void validate_fields(const Json& c, const std::string& sub, std::vector<Field> fields) {
    if (!c.is_object()) fail("config must be a JSON object");
    fields.push_back({"output", false, [](const Json& cc) { check_output(cc); }});
    for (const auto& [key, value] : c.items()) {
        (void)value;
        const bool known = std::any_of(fields.begin(), fields.end(),
                                       [&](const Field& f) { return key == f.name; });
        if (!known) fail("config.", key, " is not a recognized field for '", sub, "'");
    }
    for (const Field& f : fields) {
        if (!c.contains(f.name)) {
            if (f.required) fail("config.", f.name, " is required for '", sub, "'");
            continue;
        }
        f.check(c);
    }
}

void check_map(const Json& c) { map_from_json(c.at("map"), "config.map"); }
void check_manifold(const Json& c) { manifold_from_json(c.at("manifold"), "config.manifold"); }
void check_tolerances(const Json& c) { tolerances_from_json(c.at("tolerances"), "config.tolerances"); }
void check_matrix_A(const Json& c) {
    CoefficientMatrix a(matrix_from_json(c.at("A"), "config.A"));
    if (a.rows() != a.cols()) fail("config.A must be square for the equidimensional checks");
}
void check_dist(const Json& c) {
    const Json& v = c.at("dist");
    if (!v.is_string()) fail("config.dist must be a descriptor string");
    parse_dist(v.get<std::string>());
}

}  // namespace

bool known_subcommand(const std::string& subcommand) {
    return std::find(kSubcommands.begin(), kSubcommands.end(), subcommand) != kSubcommands.end();
}

const std::vector<std::string>& subcommand_list() { return kSubcommands; }

void validate_config(const std::string& subcommand, const Json& config) {
    if (!known_subcommand(subcommand))
        fail("unknown subcommand '", subcommand, "'");

    const Field map_req{"map", true, check_map};
    const Field map_opt{"map", false, check_map};
    const Field manifold_req{"manifold", true, check_manifold};
    const Field tol{"tolerances", false, check_tolerances};
    const Field grid{"grid", false, check_grid};
    const Field refine{"refine_rounds", false, [](const Json& c) { check_int_min(c, "refine_rounds", 0); }};
    const Field delta{"delta", false, [](const Json& c) { check_positive(c, "delta"); }};
    const Field starts{"starts", false, [](const Json& c) { check_int_min(c, "starts", 1); }};
    const Field iters{"descent_max_iters", false,
                      [](const Json& c) { check_int_min(c, "descent_max_iters", 0); }};
    const Field seed{"seed", false, [](const Json& c) { check_seed(c, "seed"); }};

    if (subcommand == "eval" || subcommand == "jacobian") {
        validate_fields(config, subcommand,
                        {map_req, {"x", true, [](const Json& c) { check_vector(c, "x"); }}});
    } else if (subcommand == "compose-jacobian") {
        validate_fields(config, subcommand,
                        {map_req, manifold_req,
                         {"q", true, [](const Json& c) { check_vector(c, "q"); }}});
    } else if (subcommand == "check-immersion") {
        validate_fields(config, subcommand, {map_req, manifold_req, grid, refine, tol});
    } else if (subcommand == "check-injectivity") {
        validate_fields(config, subcommand, {map_req, manifold_req, grid, delta, starts, iters, tol});
    } else if (subcommand == "check-embedding") {
        validate_fields(config, subcommand,
                        {map_req, manifold_req, grid, refine, delta, starts, iters, tol});
    } else if (subcommand == "singular-set") {
        validate_fields(config, subcommand,
                        {map_req,
                         {"window", false, check_window},
                         {"step", false, [](const Json& c) { check_positive(c, "step"); }},
                         {"seed_grid", false, [](const Json& c) { check_int_min(c, "seed_grid", 2); }},
                         {"tol_trace", false, [](const Json& c) { check_positive(c, "tol_trace"); }},
                         {"tol_cls", false, [](const Json& c) { check_positive(c, "tol_cls"); }}});
    } else if (subcommand == "classify") {
        validate_fields(config, subcommand,
                        {map_req,
                         {"x", true,
                          [](const Json& c) {
                              const Eigen::VectorXd x = vector_from_json(c.at("x"), "config.x");
                              if (x.size() != 2) fail("config.x must have length 2");
                          }},
                         {"tol_trace", false, [](const Json& c) { check_positive(c, "tol_trace"); }},
                         {"tol_cls", false, [](const Json& c) { check_positive(c, "tol_cls"); }}});
    } else if (subcommand == "verify-lemmas") {
        validate_fields(config, subcommand,
                        {map_opt,
                         {"m", false, [](const Json& c) { check_int_min(c, "m", 1); }},
                         seed,
                         {"attempts", false, [](const Json& c) { check_int_min(c, "attempts", 1); }}});
        if (!config.contains("map") && !config.contains("m"))
            fail("config needs either map or m for 'verify-lemmas'");
    } else if (subcommand == "mc") {
        validate_fields(
            config, subcommand,
            {{"theorem", true,
              [](const Json& c) { check_string_choice(c, "theorem", {"immersion", "injectivity"}); }},
             manifold_req,
             {"A", false, check_matrix_A},
             {"trials", false, [](const Json& c) { check_int_min(c, "trials", 1); }},
             {"dist", false, check_dist},
             seed, grid, refine, delta, starts, iters, tol,
             {"override_hypothesis", false,
              [](const Json& c) { check_bool(c, "override_hypothesis"); }}});
    } else if (subcommand == "bad-p") {
        validate_fields(
            config, subcommand,
            {{"mode", true,
              [](const Json& c) { check_string_choice(c, "mode", {"immersion", "injectivity"}); }},
             manifold_req,
             {"A", false, check_matrix_A},
             {"q0", false, [](const Json& c) { check_vector(c, "q0"); }},
             {"q1", false, [](const Json& c) { check_vector(c, "q1"); }},
             {"q2", false, [](const Json& c) { check_vector(c, "q2"); }},
             grid, refine, delta, starts, iters, tol});
        const std::string mode = config.at("mode").get<std::string>();
        if (mode == "immersion" && !config.contains("q0"))
            fail("config.q0 is required for bad-p immersion");
        if (mode == "injectivity" && (!config.contains("q1") || !config.contains("q2")))
            fail("config.q1 and config.q2 are required for bad-p injectivity");
    }
}

Json parse_config(const std::string& text, const std::string& subcommand) {
    Json config;
    try {
        config = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail("config is not valid JSON: ", e.what());
    }
    validate_config(subcommand, config);
    return config;
}

}  // namespace gdsq
