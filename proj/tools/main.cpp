#include <chrono>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "conduche/examples.hpp"
#include "conduche/json_io.hpp"
#include "conduche/paths.hpp"

using namespace conduche;

namespace {

struct Options {
    std::string fibration_file;
    int depth = 4;
    int budget = 10000;
    double tolerance = 1e-9;
    std::string output;
    std::string format = "json";
    unsigned long long seed = 0x5eed;
};

void add_common(CLI::App* cmd, Options& opt, bool needs_fibration = true) {
    if (needs_fibration)
        cmd->add_option("--fibration", opt.fibration_file, "fibration bundle (JSON)")
            ->required();
    cmd->add_option("--depth", opt.depth, "enumeration depth for graded backends");
    cmd->add_option("--budget", opt.budget, "completion search budget");
    cmd->add_option("--tolerance", opt.tolerance, "float tolerance for matrix checks");
    cmd->add_option("--output", opt.output, "write the JSON report here instead of stdout");
    cmd->add_option("--format", opt.format, "json|text")
        ->check(CLI::IsMember({"json", "text"}));
}

void print_text(const Json& doc, std::ostream& os, int indent = 0) {
    std::string pad(indent, ' ');
    if (doc.is_object()) {
        for (const auto& [k, v] : doc.items()) {
            if (v.is_object() || v.is_array()) {
                os << pad << k << ":\n";
                print_text(v, os, indent + 2);
            } else {
                os << pad << k << ": " << v.dump() << "\n";
            }
        }
    } else if (doc.is_array()) {
        for (const auto& v : doc) {
            if (v.is_object() || v.is_array())
                print_text(v, os, indent + 2);
            else
                os << pad << "- " << v.dump() << "\n";
        }
    } else {
        os << pad << doc.dump() << "\n";
    }
}

int emit(const Options& opt, const std::string& command, Json config, Json results, bool pass) {
    config["depth"] = opt.depth;
    config["budget"] = opt.budget;
    config["seed"] = opt.seed;
    if (!opt.fibration_file.empty()) config["fibration"] = opt.fibration_file;
    Json doc{{"command", command},
             {"config", config},
             {"pass", pass},
             {"results", results},
             {"timestamp", (long long)std::chrono::duration_cast<std::chrono::seconds>(
                               std::chrono::system_clock::now().time_since_epoch())
                               .count()}};
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!opt.output.empty()) {
        file.open(opt.output);
        if (!file) fail(Errc::bad_input, "cannot write '" + opt.output + "'");
        os = &file;
    }
    if (opt.format == "text")
        print_text(doc, *os);
    else
        *os << doc.dump(2) << "\n";
    return pass ? 0 : 1;
}

// Splits on a separator at parenthesis depth zero, so nk ids keep their
// commas.
std::vector<std::string> split_top_level(const std::string& s, char sep) {
    std::vector<std::string> out(1);
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            out.emplace_back();
            continue;
        }
        out.back().push_back(c);
    }
    for (auto& t : out) {
        while (!t.empty() && std::isspace((unsigned char)t.front())) t.erase(t.begin());
        while (!t.empty() && std::isspace((unsigned char)t.back())) t.pop_back();
    }
    out.erase(std::remove(out.begin(), out.end(), std::string()), out.end());
    return out;
}

GermBasisSet parse_cell(const Fibration& f, const std::string& text) {
    auto open = text.find('(');
    if (open == std::string::npos || text.substr(0, open) != "Z" || text.back() != ')')
        fail(Errc::bad_input, "cells are written Z(mu,nu); got '" + text + "'");
    auto parts = split_top_level(text.substr(open + 1, text.size() - open - 2), ',');
    if (parts.size() != 2) fail(Errc::bad_input, "cells are written Z(mu,nu); got '" + text + "'");
    return make_span(f, parts[0], parts[1]);
}

int run_validate(const Options& opt, int sample) {
    Fibration f = load_fibration_file(opt.fibration_file);
    Json results;

    auto dom_cat = validate_category(f.domain(), opt.depth);
    results["domain_category"] = report_to_json(dom_cat);
    auto base_cat = validate_category(f.codomain(), opt.depth);
    results["base_category"] = report_to_json(base_cat);
    auto functor = validate_functor(f, opt.depth);
    results["functor"] = report_to_json(functor);
    auto dcf = check_dcf(f, opt.depth);
    results["dcf"] = dcf_result_to_json(dcf);
    auto row = check_row_finite(f, opt.depth, opt.budget);
    results["row_finite"] = report_to_json(row);
    auto surj = check_strong_surjectivity(f, opt.depth);
    results["strong_surjectivity"] = report_to_json(surj);
    auto ore = check_ore(f.codomain(), opt.depth, opt.budget);
    results["ore"] = ore_report_to_json(ore);
    f.flags().set(kFlagRightOreBase, ore.right_ore, ore.depth);
    f.flags().set(kFlagStronglyRightOreBase, ore.strongly_right_ore, ore.depth);
    auto cancel = morphism_properties(f.codomain(), opt.depth);
    f.flags().set(kFlagLeftCancellativeBase, cancel.left_cancellative, cancel.depth);
    f.flags().set(kFlagRightCancellativeBase, cancel.right_cancellative, cancel.depth);
    results["cancellation"] = Json{{"left_cancellative", cancel.left_cancellative},
                                   {"right_cancellative", cancel.right_cancellative},
                                   {"depth", cancel.depth}};

    bool sampled_ok = true;
    if (sample > 0) {
        // Extra associativity / functoriality spot checks beyond the
        // exhaustive depth, in seeded order.
        std::mt19937_64 rng(opt.seed);
        const Category& E = f.domain();
        auto pool = E.morphisms_up_to(E.finite() ? 1 : opt.depth + 1);
        std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
        int done = 0;
        for (int tries = 0; tries < sample * 50 && done < sample; ++tries) {
            const auto& a = pool[pick(rng)];
            const auto& b = pool[pick(rng)];
            const auto& c = pool[pick(rng)];
            if (E.source(a) != E.target(b) || E.source(b) != E.target(c)) continue;
            ++done;
            auto ab = E.try_compose(a, b);
            auto bc = E.try_compose(b, c);
            auto ab_c = ab ? E.try_compose(*ab, c) : std::nullopt;
            auto a_bc = bc ? E.try_compose(a, *bc) : std::nullopt;
            if (!ab_c || !a_bc || *ab_c != *a_bc) {
                sampled_ok = false;
                continue;
            }
            auto fab_c = f.codomain().try_compose(
                f.map_morphism(a), f.codomain().compose(f.map_morphism(b), f.map_morphism(c)));
            if (!fab_c || f.map_morphism(*ab_c) != *fab_c) sampled_ok = false;
        }
        results["sampled_triples"] = Json{{"requested", sample}, {"checked", done},
                                          {"pass", sampled_ok}};
    }

    Json flags;
    for (const char* key :
         {kFlagFunctorValid, kFlagDcf, kFlagRowFinite, kFlagStronglySurjective,
          kFlagRightOreBase, kFlagStronglyRightOreBase, kFlagLeftCancellativeBase,
          kFlagRightCancellativeBase}) {
        auto v = f.flags().get(key);
        if (v) flags[key] = *v;
    }
    auto split_flag = f.flags().get(kFlagLocallySplit);
    if (split_flag) flags[kFlagLocallySplit] = *split_flag;
    results["flags"] = flags;

    bool pass = dom_cat.pass() && base_cat.pass() && functor.pass() && dcf.pass && row.pass() &&
                surj.pass() && ore.right_ore && ore.strongly_right_ore && sampled_ok;
    return emit(opt, "validate", Json::object(), results, pass);
}

int run_fiber(const Options& opt, const std::string& object, const std::string& base) {
    Fibration f = load_fibration_file(opt.fibration_file);
    auto fiber = enumerate_fiber(f, object, base, opt.budget);
    Json results{{"object", object}, {"base", base}, {"fiber", fiber},
                 {"count", fiber.size()}};
    return emit(opt, "fiber", Json::object(), results, true);
}

int run_paths(const Options& opt, const std::string& oracle_spec, std::string object,
              const std::vector<std::string>& evals, const std::vector<std::string>& res_list,
              const std::vector<std::string>& ind_list, bool aperiodicity) {
    Fibration f = load_fibration_file(opt.fibration_file);
    if (object.empty()) object = f.domain().objects().front();
    PathOracle x = make_oracle_from_spec(f, object, oracle_spec);
    for (const auto& mu : res_list) x = res(mu, x);
    for (const auto& mu : ind_list) x = ind(mu, x);

    Json results;
    results["oracle"] = x.label();
    results["target"] = x.target();
    Json evaluations = Json::array();
    for (const auto& expr : evals) {
        auto parts = split_top_level(expr, ';');
        if (parts.size() == 1) {
            // k = 1 convenience: "(a,b)" means the slice morphism ((a),(b)).
            const auto* nk = dynamic_cast<const NkCategory*>(&f.codomain());
            auto inner = split_top_level(
                expr.front() == '(' ? expr.substr(1, expr.size() - 2) : expr, ',');
            if (nk && nk->k() == 1 && inner.size() == 2)
                parts = {"(" + inner[0] + ")", "(" + inner[1] + ")"};
        }
        if (parts.size() == 2) {
            auto [xa, x2] = x.eval_morphism(parts[0], parts[1]);
            evaluations.push_back({{"at", expr}, {"value", xa}, {"extension", x2}});
        } else {
            evaluations.push_back({{"at", expr}, {"value", x.eval(expr)}});
        }
    }
    results["evaluations"] = evaluations;

    if (aperiodicity) {
        auto scan = aperiodicity_scan(f, x, opt.depth);
        Json sj{{"witness_found", scan.witness_found}, {"depth", scan.depth},
                {"verify_depth", scan.verify_depth}};
        if (scan.witness_found) {
            sj["alpha"] = scan.alpha;
            sj["beta"] = scan.beta;
        }
        results["aperiodicity"] = sj;
    }
    return emit(opt, "paths", Json{{"oracle", oracle_spec}, {"object", object}}, results, true);
}

int run_cylinder(const Options& opt, const std::string& alpha, const std::string& beta,
                 const std::string& partition_object, const std::string& partition_base) {
    Fibration f = load_fibration_file(opt.fibration_file);
    Json results;
    if (!alpha.empty()) {
        auto cells = cylinder_intersection(f, alpha, beta, opt.budget);
        results["intersection"] = Json{{"alpha", alpha}, {"beta", beta}, {"cells", cells}};
    }
    if (!partition_object.empty()) {
        Json cells = Json::array();
        for (const auto& c : partition_by_lifts(f, partition_object, partition_base))
            cells.push_back(c.alpha);
        results["partition"] = Json{{"object", partition_object},
                                    {"base", partition_base},
                                    {"cells", cells}};
    }
    return emit(opt, "cylinder", Json::object(), results, true);
}

int run_germ(const Options& opt, const std::string& product, const std::string& intersect,
             const std::string& inclusion, const std::string& invert, bool enumerate) {
    Fibration f = load_fibration_file(opt.fibration_file);
    Json results;
    auto two_cells = [&](const std::string& text) {
        auto parts = split_top_level(text, ' ');
        if (parts.size() != 2)
            fail(Errc::bad_input, "expected two cells 'Z(a,b) Z(c,d)', got '" + text + "'");
        return std::make_pair(parse_cell(f, parts[0]), parse_cell(f, parts[1]));
    };
    if (!product.empty()) {
        auto [a, b] = two_cells(product);
        results["product"] = cells_to_json(product_basis(f, a, b, opt.budget));
    }
    if (!intersect.empty()) {
        auto [a, b] = two_cells(intersect);
        results["intersection"] = cells_to_json(intersect_basis(f, a, b, opt.budget));
    }
    if (!inclusion.empty()) {
        auto [inner, outer] = two_cells(inclusion);
        auto r = basis_inclusion(f, inner, outer, opt.budget);
        results["inclusion"] = r == InclusionResult::subset
                                   ? "subset"
                                   : (r == InclusionResult::disjoint ? "disjoint" : "unknown");
    }
    if (!invert.empty()) {
        auto cell = parse_cell(f, invert);
        results["inverse"] = cells_to_json({invert_basis(cell)});
    }
    if (enumerate) {
        auto table = enumerate_germs(f);
        Json germs = Json::array();
        for (size_t i = 0; i < table.germs().size(); ++i) {
            const auto& g = table.germs()[i];
            germs.push_back({{"mu", g.mu}, {"nu", g.nu}, {"path", g.x.label()},
                             {"source", table.source_of((int)i)},
                             {"range", table.range_of((int)i)},
                             {"inverse", table.inverse_of((int)i)}});
        }
        Json mult = Json::array();
        for (size_t i = 0; i < table.germs().size(); ++i) {
            Json row = Json::array();
            for (size_t j = 0; j < table.germs().size(); ++j)
                row.push_back(table.compose((int)i, (int)j));
            mult.push_back(row);
        }
        results["germs"] = germs;
        results["units"] = table.units().size();
        results["multiplication"] = mult;
    }
    return emit(opt, "germ", Json::object(), results, true);
}

int run_algebra(const Options& opt, const std::string& mult, const std::string& eq,
                const std::string& refine_arg, const std::string& involute_arg,
                const std::string& upsilon_arg) {
    Fibration f = load_fibration_file(opt.fibration_file);
    Json results;
    if (!mult.empty()) {
        auto parts = split_top_level(mult, ';');
        if (parts.size() != 2) fail(Errc::bad_input, "--multiply takes 'W1 ; W2'");
        auto prod = multiply(parse_word_product(f, parts[0]), parse_word_product(f, parts[1]),
                             opt.budget);
        results["product"] = algebra_to_json(prod);
    }
    if (!eq.empty()) {
        auto parts = split_top_level(eq, ';');
        if (parts.size() != 2) fail(Errc::bad_input, "--equal takes 'W1 ; W2'");
        auto r = equal(parse_word_product(f, parts[0]), parse_word_product(f, parts[1]),
                       opt.budget);
        results["equal"] =
            r == Trilean::yes ? "equal" : (r == Trilean::no ? "not_equal" : "unknown");
    }
    if (!refine_arg.empty()) {
        auto parts = split_top_level(refine_arg, ';');
        if (parts.size() != 2) fail(Errc::bad_input, "--refine takes 'W ; c'");
        results["refined"] =
            algebra_to_json(refine(parse_word_product(f, parts[0]), parts[1], opt.budget));
    }
    if (!involute_arg.empty())
        results["involution"] = algebra_to_json(involute(parse_word_product(f, involute_arg)));
    if (!upsilon_arg.empty())
        results["upsilon"] =
            groupoid_function_to_json(upsilon(parse_word_product(f, upsilon_arg)));
    return emit(opt, "algebra", Json::object(), results, true);
}

int run_rep_check(const Options& opt, const std::string& matrices,
                  const std::string& degrees_arg, bool exact) {
    Fibration f = load_fibration_file(opt.fibration_file);
    std::ifstream in(matrices);
    if (!in) fail(Errc::bad_input, "cannot open '" + matrices + "'");
    Json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        fail(Errc::bad_input, "parse error in '" + matrices + "': " + e.what());
    }
    RepAssignment rep = rep_from_json(doc);
    rep.tolerance = opt.tolerance;
    if (exact) rep.exact = true;

    std::vector<MorphismId> degrees = split_top_level(degrees_arg, ';');
    if (degrees.size() == 1 && degrees_arg.find(';') == std::string::npos) {
        // "1,2" over a rank-1 base means the degrees (1) and (2).
        const auto* nk = dynamic_cast<const NkCategory*>(&f.codomain());
        if (nk && nk->k() == 1 && !f.codomain().has_morphism(degrees[0])) {
            degrees.clear();
            for (const auto& t : split_top_level(degrees_arg, ','))
                degrees.push_back(t.front() == '(' ? t : "(" + t + ")");
        }
    }
    auto report = check_ck_relations(f, rep, degrees);
    Json results{{"relations", report_to_json(report)}, {"degrees", degrees},
                 {"exact", rep.exact}, {"tolerance", rep.tolerance}};
    return emit(opt, "rep-check", Json{{"matrices", matrices}}, results, report.pass());
}

int run_examples(const Options& opt, bool list, const std::string& emit_name) {
    Json results;
    if (list || emit_name.empty()) {
        Json entries = Json::array();
        for (const auto& name : example_names())
            entries.push_back({{"name", name}, {"description", example_description(name)}});
        results["examples"] = entries;
    }
    if (!emit_name.empty()) {
        auto ex = make_example(emit_name);
        results["name"] = emit_name;
        results["bundle"] = fibration_to_json(ex.fibration);
        if (!opt.output.empty()) {
            // Emit the bare bundle so the file can be fed back to --fibration.
            std::ofstream file(opt.output);
            if (!file) fail(Errc::bad_input, "cannot write '" + opt.output + "'");
            file << results["bundle"].dump(2) << "\n";
            return 0;
        }
    }
    return emit(opt, "examples", Json::object(), results, true);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete Conduche fibrations: validators, infinite paths, germ calculus and "
                 "the Cuntz-Krieger algebra"};
    app.require_subcommand(1);

    Options opt;
    if (const char* env = std::getenv("CONDUCHE_SEED")) opt.seed = std::strtoull(env, nullptr, 10);

    int sample = 0;
    auto* validate = app.add_subcommand("validate", "run all validators on a fibration bundle");
    add_common(validate, opt);
    validate->add_option("--sample", sample, "extra seeded associativity samples");

    std::string object, base;
    auto* fiber = app.add_subcommand("fiber", "enumerate a fiber");
    add_common(fiber, opt);
    fiber->add_option("--object", object, "object of the total category")->required();
    fiber->add_option("--base", base, "base morphism")->required();

    std::string oracle = "minlex";
    std::vector<std::string> evals, res_list, ind_list;
    bool aperiodicity = false;
    auto* paths_cmd = app.add_subcommand("paths", "evaluate and transform infinite paths");
    add_common(paths_cmd, opt);
    paths_cmd->add_option("--oracle", oracle,
                          "minlex|unique|constant:e|periodic:e1,e2|fib:e0,e1");
    paths_cmd->add_option("--object", object, "target object (default: first)");
    paths_cmd->add_option("--eval", evals, "base object, or slice morphism 'a;b'");
    paths_cmd->add_option("--res", res_list, "strip this prefix (repeatable)");
    paths_cmd->add_option("--ind", ind_list, "prepend this morphism (repeatable)");
    paths_cmd->add_flag("--aperiodicity", aperiodicity, "scan for periodicity witnesses");

    std::string alpha, beta, part_obj, part_base;
    auto* cylinder = app.add_subcommand("cylinder", "cylinder-set calculus");
    add_common(cylinder, opt);
    cylinder->add_option("--alpha", alpha, "first cylinder");
    cylinder->add_option("--beta", beta, "second cylinder");
    cylinder->add_option("--partition", part_obj, "partition Z(X) by the lifts of --base");
    cylinder->add_option("--base", part_base, "base morphism for --partition");

    std::string product, intersect, inclusion, invert;
    bool enumerate = false;
    auto* germ = app.add_subcommand("germ", "germ-basis arithmetic");
    add_common(germ, opt);
    germ->add_option("--product", product, "two cells 'Z(a,b) Z(c,d)'");
    germ->add_option("--intersect", intersect, "two cells 'Z(a,b) Z(c,d)'");
    germ->add_option("--inclusion", inclusion, "inner and outer cells 'Z(a,b) Z(c,d)'");
    germ->add_option("--invert", invert, "one cell 'Z(a,b)'");
    germ->add_flag("--enumerate", enumerate, "enumerate all germs (finite path spaces)");

    std::string mult, eq, refine_arg, involute_arg, upsilon_arg;
    auto* algebra = app.add_subcommand("algebra", "symbolic spanning-word algebra");
    add_common(algebra, opt);
    algebra->add_option("--multiply", mult, "two words 'W1 ; W2'");
    algebra->add_option("--equal", eq, "two words 'W1 ; W2'");
    algebra->add_option("--refine", refine_arg, "'W ; c' with c a base morphism");
    algebra->add_option("--involute", involute_arg, "one word");
    algebra->add_option("--upsilon", upsilon_arg, "one word");

    std::string matrices, degrees;
    bool exact = false;
    auto* rep = app.add_subcommand("rep-check", "verify the six relations on matrices");
    add_common(rep, opt);
    rep->add_option("--matrices", matrices, "matrix assignment (JSON)")->required();
    rep->add_option("--degrees", degrees, "base morphisms for relation 6, ';'-separated")
        ->required();
    rep->add_flag("--exact", exact, "require exact equality of matrices");

    bool list = false;
    std::string emit_name;
    auto* examples = app.add_subcommand("examples", "bundled example catalog");
    add_common(examples, opt, false);
    examples->add_flag("--list", list, "list the bundled examples");
    examples->add_option("--emit", emit_name, "write one bundle as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*validate) return run_validate(opt, sample);
        if (*fiber) return run_fiber(opt, object, base);
        if (*paths_cmd)
            return run_paths(opt, oracle, object, evals, res_list, ind_list, aperiodicity);
        if (*cylinder) return run_cylinder(opt, alpha, beta, part_obj, part_base);
        if (*germ) return run_germ(opt, product, intersect, inclusion, invert, enumerate);
        if (*algebra) return run_algebra(opt, mult, eq, refine_arg, involute_arg, upsilon_arg);
        if (*rep) return run_rep_check(opt, matrices, degrees, exact);
        if (*examples) return run_examples(opt, list, emit_name);
    } catch (const Error& e) {
        std::cerr << Json{{"error", e.what()}}.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << Json{{"error", e.what()}}.dump(2) << "\n";
        return 2;
    }
    return 2;
}
