#include "commands.hpp"

#include "cache.hpp"
#include "records.hpp"

#include "nilhom/aut.hpp"
#include "nilhom/nilgroup.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ostream>
#include <sstream>

namespace nilhom::cli {

namespace {

using linalg::Rational;

struct Request {
    std::string command;
    Json params;
    std::function<Json()> compute;
};

void require_positive(std::size_t v, const char* name) {
    if (v == 0) throw std::invalid_argument(std::string("--") + name + " must be >= 1");
}

lie::LieElement parse_element(const std::string& text, const std::shared_ptr<const lie::HallBasis>& basis) {
    lie::LieElement::Coords coords;
    std::stringstream in(text);
    std::string term;
    while (std::getline(in, term, ',')) {
        auto colon = term.find(':');
        std::string word = term.substr(0, colon);
        Rational coeff = 1;
        if (colon != std::string::npos) {
            coeff = Rational(term.substr(colon + 1));
            if (coeff.get_den() == 0) throw std::invalid_argument("zero denominator in '" + term + "'");
            coeff.canonicalize();
        }
        auto idx = basis->index_of(lie::parse_word(word, basis->rank()));
        if (!idx) throw std::invalid_argument("'" + word + "' is not a Lyndon word of degree <= class");
        coords[*idx] += coeff;
    }
    std::erase_if(coords, [](const auto& e) { return e.second == 0; });
    return lie::LieElement(basis, coords);
}

std::string bracket_string(const lie::HallBasis& basis, std::size_t i) {
    const auto& e = basis.element(i);
    if (!e.left) return lie::format_word(e.word);
    return "[" + bracket_string(basis, *e.left) + "," + bracket_string(basis, *e.right) + "]";
}

Json sizes(const std::vector<std::size_t>& v) {
    return Json(v);
}

// ---------------------------------------------------------------------------

Json do_witt(std::size_t r, std::size_t n) {
    std::vector<std::size_t> dims;
    for (std::size_t k = 1; k <= n; ++k) dims.push_back(lie::witt_dimension(r, k));
    return {{"dims", dims}};
}

Json do_hall(std::size_t r, std::size_t c) {
    auto basis = lie::hall_basis(r, c);
    Json elems = Json::array();
    for (std::size_t i = 0; i < basis->size(); ++i) {
        const auto& e = basis->element(i);
        elems.push_back({{"index", i},
                         {"word", lie::format_word(e.word)},
                         {"degree", e.degree},
                         {"weight", e.weight},
                         {"bracket", bracket_string(*basis, i)}});
    }
    return {{"size", basis->size()}, {"elements", elems}};
}

Json do_bch(std::size_t r, std::size_t c, const std::string& x, const std::string& y) {
    auto basis = lie::hall_basis(r, c);
    nil::MalcevElement u(parse_element(x, basis)), v(parse_element(y, basis));
    return {{"x", terms_json(u.log())},
            {"y", terms_json(v.log())},
            {"product", terms_json(nil::multiply(u, v).log())},
            {"commutator", terms_json(nil::group_commutator(u, v).log())}};
}

Json do_lcs(std::size_t r, std::size_t c) {
    auto ranks = nil::lcs_ranks(r, c);
    std::vector<std::size_t> witt;
    for (std::size_t n = 1; n <= c; ++n) witt.push_back(lie::witt_dimension(r, n));
    return {{"ranks", ranks}, {"witt", witt}, {"match", ranks == witt}};
}

Json do_center(std::size_t r, std::size_t c) {
    auto basis = lie::hall_basis(r, c);
    auto center = nil::center_basis(r, c);
    auto kernel = nil::inner_kernel_basis(r, c);
    auto [lo, hi] = basis->degree_range(c);
    bool top = center.size() == hi - lo;
    for (const auto& z : center)
        for (const auto& [i, x] : z.coords()) top = top && i >= lo;
    linalg::EchelonBasis span(basis->size());
    for (const auto& z : center) span.add(z.log().dense());
    bool same = kernel.size() == center.size();
    for (const auto& k : kernel) same = same && span.contains(k.log().dense());
    Json vectors = Json::array();
    for (const auto& z : center) vectors.push_back(terms_json(z.log()));
    return {{"dimension", center.size()},
            {"basis", vectors},
            {"top_degree_dimension", hi - lo},
            {"spans_top_degree", top},
            {"inner_kernel_dimension", kernel.size()},
            {"inner_kernel_is_center", same}};
}

Json do_betti_group(std::size_t r, std::size_t c) {
    auto b = homology::group_betti(r, c);
    const std::size_t m = b.size() - 1;
    bool duality = true;
    long euler = 0;
    for (std::size_t d = 0; d <= m; ++d) {
        duality = duality && b[d] == b[m - d];
        euler += d % 2 ? -static_cast<long>(b[d]) : static_cast<long>(b[d]);
    }
    return {{"dimension", m}, {"betti", sizes(b)}, {"poincare_duality", duality}, {"euler_characteristic", euler}};
}

Json do_betti_lie(std::size_t r, std::size_t c, std::optional<std::size_t> d) {
    auto g = homology::shared_free_nilpotent_lie(r, c);
    if (d) return {{"degree", *d}, {"betti", homology::homology_dimension(*g, *d)}};
    bool dd = true;
    for (std::size_t k = 2; k <= g->dim(); ++k) dd = dd && homology::boundary_squared_vanishes(*g, k);
    return {{"dimension", g->dim()}, {"betti", sizes(homology::betti_numbers(*g))}, {"boundary_squared_zero", dd}};
}

Json do_betti_ia(std::size_t r, std::size_t c, std::optional<std::size_t> q) {
    if (c < 2) throw std::invalid_argument("betti ia: --class must be >= 2");
    auto ia = aut::shared_ia_lie_algebra(r, c);
    if (q) return {{"degree", *q}, {"betti", aut::ia_betti(r, c, *q).dimension}};
    return {{"dimension", ia->algebra->dim()}, {"betti", sizes(homology::betti_numbers(*ia->algebra))}};
}

Json do_weighted(std::size_t r, std::size_t c, std::size_t d, bool ia) {
    homology::WeightCounts w;
    if (ia) {
        if (c < 2) throw std::invalid_argument("weighted-betti --ia: --class must be >= 2");
        w = aut::ia_betti(r, c, d).weights;
    } else {
        w = homology::weighted_betti(*homology::shared_free_nilpotent_lie(r, c), d);
    }
    return {{"algebra", ia ? "ia" : "free_nilpotent"}, {"betti", homology::total(w)}, {"weights", weights_json(w)}};
}

Json do_dynkin(std::size_t r, std::size_t n) {
    auto basis = lie::hall_basis(r, n);
    std::size_t checked = 0, failed = 0;
    for (std::size_t i = 0; i < basis->size(); ++i) {
        auto p = lie::LieElement::basis_element(basis, i);
        ++checked;
        if (!(lie::dynkin(lie::expand_to_tensor(p), basis) == p)) ++failed;
    }
    return {{"checked", checked}, {"failed", failed}, {"ok", failed == 0}};
}

Json do_summand(std::size_t r, std::size_t c, std::size_t q) {
    if (c < 2) throw std::invalid_argument("summand-check: --class must be >= 2");
    auto ia = aut::ia_betti(r, c, q);
    auto model_expr = rep::ReprExpr::wedge(q, rep::ReprExpr::hom_std(rep::lie_interval(2, c)));
    auto model = rep::evaluate(model_expr, r);
    rep::WeightModule ia_module{r, {ia.weights.begin(), ia.weights.end()}};
    auto verdict = rep::weight_dominance_compare(ia_module, model);
    Json violations = Json::array();
    for (const auto& v : verdict.violations)
        violations.push_back({{"weight", v.weight}, {"ia", v.left}, {"model", v.right}});
    Json out{{"model", model_expr.to_string()},
             {"ia_dimension", ia.dimension},
             {"model_dimension", model.dimension()},
             {"dominated", verdict.holds},
             {"equal", verdict.equal},
             {"violations", violations},
             {"ia_weights", weights_json(ia.weights)}};
    if (r == 2) {
        auto a = rep::schur_decompose_gl2(ia_module);
        auto b = rep::schur_decompose_gl2(model);
        bool dominated = true;
        for (const auto& [hw, m] : a) dominated = dominated && b.count(hw) && b.at(hw) >= m;
        out["schur_ia"] = gl2_json(a);
        out["schur_model"] = gl2_json(b);
        out["schur_dominated"] = dominated;
    }
    return out;
}

Json do_coinv(const rep::ReprExpr& e, std::size_t r) {
    return {{"dimension", rep::evaluate(e, r).dimension()}, {"coinvariants", rep::coinvariants_dim(e, r)}};
}

std::size_t free_nilpotent_homology(std::size_t r, std::size_t c, std::size_t d) {
    if (r == 0) return d == 0 ? 1 : 0;
    return homology::homology_dimension(*homology::shared_free_nilpotent_lie(r, c), d);
}

Json do_degree_check(std::size_t c, std::size_t d, std::size_t max_rank) {
    std::vector<linalg::Integer> dims;
    std::vector<std::size_t> seq;
    for (std::size_t r = 0; r <= max_rank; ++r) {
        seq.push_back(free_nilpotent_homology(r, c, d));
        dims.emplace_back(seq.back());
    }
    auto est = rep::degree_estimate(dims);
    return {{"sequence", seq},
            {"degree", est.degree},
            {"sufficient", est.sufficient},
            {"bound", c * d},
            {"within_bound", est.degree <= c * d}};
}

// ---------------------------------------------------------------------------

std::string csv_field(const Json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<Json>> rows;
};

CsvTable csv_table(const std::string& command, const Json& params, const Json& result) {
    CsvTable t;
    auto list_rows = [&](const char* key, const char* index_name, std::size_t first) {
        t.header = {index_name, key};
        std::size_t k = first;
        for (const auto& v : result.at(key)) t.rows.push_back({Json(k++), v});
    };
    if (command == "witt") {
        list_rows("dims", "degree", 1);
        t.header = {"degree", "dimension"};
    } else if (command == "hall") {
        t.header = {"index", "word", "degree", "weight", "bracket"};
        for (const auto& e : result.at("elements"))
            t.rows.push_back({e.at("index"), e.at("word"), e.at("degree"), e.at("weight"), e.at("bracket")});
    } else if (command == "bch") {
        t.header = {"element", "word", "coeff"};
        for (const char* which : {"x", "y", "product", "commutator"})
            for (const auto& term : result.at(which)) t.rows.push_back({Json(which), term.at("word"), term.at("coeff")});
    } else if (command == "lcs-ranks") {
        t.header = {"degree", "rank", "witt"};
        for (std::size_t n = 0; n < result.at("ranks").size(); ++n)
            t.rows.push_back({Json(n + 1), result.at("ranks")[n], result.at("witt")[n]});
    } else if (command == "center") {
        t.header = {"vector", "word", "coeff"};
        std::size_t k = 0;
        for (const auto& v : result.at("basis")) {
            for (const auto& term : v) t.rows.push_back({Json(k), term.at("word"), term.at("coeff")});
            ++k;
        }
    } else if (command.rfind("betti", 0) == 0) {
        t.header = {"degree", "betti"};
        if (result.contains("degree"))
            t.rows.push_back({result.at("degree"), result.at("betti")});
        else
            list_rows("betti", "degree", 0);
    } else if (command == "weighted-betti") {
        t.header = {"weight", "multiplicity"};
        for (const auto& w : result.at("weights")) t.rows.push_back({w.at("weight"), w.at("multiplicity")});
    } else if (command == "dynkin-check") {
        t.header = {"checked", "failed", "ok"};
        t.rows.push_back({result.at("checked"), result.at("failed"), result.at("ok")});
    } else if (command == "summand-check") {
        t.header = {"ia_dimension", "model_dimension", "dominated", "equal"};
        t.rows.push_back({result.at("ia_dimension"), result.at("model_dimension"), result.at("dominated"),
                          result.at("equal")});
    } else if (command == "coinv") {
        t.header = {"expr", "rank", "dimension", "coinvariants"};
        t.rows.push_back({params.at("expr"), params.at("rank"), result.at("dimension"), result.at("coinvariants")});
    } else if (command == "degree-check") {
        t.header = {"degree", "sufficient", "bound", "within_bound", "sequence"};
        t.rows.push_back({result.at("degree"), result.at("sufficient"), result.at("bound"), result.at("within_bound"),
                          result.at("sequence")});
    } else if (command == "selftest") {
        t.header = {"check", "passed"};
        t.rows.push_back({params.at("check"), result.at("passed")});
    }
    return t;
}

// ---------------------------------------------------------------------------

class Emitter {
public:
    Emitter(std::ostream& out, bool csv, bool timing) : out_(out), csv_(csv), timing_(timing) {}

    void emit(const Request& req, const Json& result, double ms) {
        if (csv_) {
            auto t = csv_table(req.command, req.params, result);
            if (!header_done_) {
                for (std::size_t i = 0; i < t.header.size(); ++i) out_ << (i ? "," : "") << t.header[i];
                out_ << "\n";
                header_done_ = true;
            }
            for (const auto& row : t.rows) {
                for (std::size_t i = 0; i < row.size(); ++i) out_ << (i ? "," : "") << csv_field(row[i]);
                out_ << "\n";
            }
            return;
        }
        Json record{{"command", req.command},
                    {"params", req.params},
                    {"result", result},
                    {"elapsed_ms", timing_ ? Json(static_cast<long long>(ms)) : Json(nullptr)},
                    {"schema_version", kSchemaVersion}};
        out_ << record.dump() << "\n";
    }

private:
    std::ostream& out_;
    bool csv_;
    bool timing_;
    bool header_done_ = false;
};

std::string cache_key(const Request& req) {
    return "nilhom/" + std::to_string(kSchemaVersion) + "/" + req.command + "/" + req.params.dump();
}

Json resolve(const Request& req, const ResultCache& cache, double& ms) {
    auto start = std::chrono::steady_clock::now();
    auto key = cache_key(req);
    Json result;
    bool hit = false;
    if (auto payload = cache.load(key)) {
        try {
            result = Json::parse(*payload);
            hit = true;
        } catch (const Json::parse_error&) {
        }
    }
    if (!hit) {
        result = req.compute();
        cache.store(key, result.dump());
    }
    ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact computations for free nilpotent groups, their automorphisms and homology.", "nilhom"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string cache_dir = ".nilhom-cache";
    bool no_cache = false;
    bool timing = false;
    std::string format = "json";
    app.add_option("--cache-dir", cache_dir, "Cache directory (NILHOM_CACHE_DIR overrides)");
    app.add_flag("--no-cache", no_cache, "Neither read nor write the cache");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--timing", timing, "Report elapsed_ms instead of null");

    std::size_t rank = 0, cls = 0, degree = 0, max_degree = 0, max_rank = 5;
    std::string expr, x = "1", y = "2";
    bool ia_flag = false;

    auto add_rank = [&](CLI::App* s) { return s->add_option("-r,--rank", rank, "Number of generators")->required(); };
    auto add_class = [&](CLI::App* s) { return s->add_option("-c,--class", cls, "Nilpotency class")->required(); };
    auto add_degree = [&](CLI::App* s, bool required) {
        auto o = s->add_option("-d,--degree", degree, "Homological degree");
        if (required) o->required();
        return o;
    };

    auto witt = app.add_subcommand("witt", "Dimensions of the free Lie algebra by degree");
    add_rank(witt);
    witt->add_option("--max-degree", max_degree, "Largest degree")->required();

    auto hall = app.add_subcommand("hall", "Lyndon basis with standard bracketings");
    add_rank(hall);
    add_class(hall);

    auto bch = app.add_subcommand("bch", "Product and commutator in the Malcev completion");
    add_rank(bch);
    add_class(bch);
    bch->add_option("--x", x, "First element as word:coeff,... (default 1)");
    bch->add_option("--y", y, "Second element as word:coeff,... (default 2)");

    auto lcs = app.add_subcommand("lcs-ranks", "Ranks of the lower central series quotients");
    add_rank(lcs);
    add_class(lcs);

    auto center = app.add_subcommand("center", "Center and kernel of the inner action");
    add_rank(center);
    add_class(center);

    auto betti = app.add_subcommand("betti", "Betti numbers");
    betti->require_subcommand(1);
    auto betti_group = betti->add_subcommand("group", "Free nilpotent group N_c^r");
    auto betti_lie = betti->add_subcommand("lie", "Free nilpotent Lie algebra");
    auto betti_ia = betti->add_subcommand("ia", "IA derivation algebra");
    for (auto s : {betti_group, betti_lie, betti_ia}) {
        add_rank(s);
        add_class(s);
    }
    auto lie_degree = add_degree(betti_lie, false);
    auto ia_degree = add_degree(betti_ia, false);

    auto weighted = app.add_subcommand("weighted-betti", "Homology in one degree split by torus weight");
    add_rank(weighted);
    add_class(weighted);
    add_degree(weighted, true);
    weighted->add_flag("--ia", ia_flag, "Use the IA derivation algebra");

    auto dynkin = app.add_subcommand("dynkin-check", "Dynkin retraction on every Hall element");
    add_rank(dynkin);
    dynkin->add_option("--max-degree", max_degree, "Largest degree")->required();

    auto summand = app.add_subcommand("summand-check", "Compare IA homology with its exterior-power model");
    add_rank(summand);
    add_class(summand);
    add_degree(summand, true);

    auto coinv = app.add_subcommand("coinv", "GL_r(Z) coinvariants of a representation");
    add_rank(coinv);
    coinv->add_option("--expr", expr, "Representation, e.g. wedge(2, std)")->required();

    auto degree_check = app.add_subcommand("degree-check", "Polynomial degree of r -> dim H_d(N_c^r)");
    add_class(degree_check);
    add_degree(degree_check, true);
    degree_check->add_option("--max-rank", max_rank, "Largest rank in the window (default 5)");

    auto selftest = app.add_subcommand("selftest", "Run the invariant suite");

    std::vector<std::string> argv_store{"nilhom"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        app.exit(e, err, err);
        return 2;
    }

    if (const char* env = std::getenv("NILHOM_CACHE_DIR"); env && *env) cache_dir = env;
    std::optional<std::filesystem::path> dir;
    if (!no_cache) dir = cache_dir;
    ResultCache cache(dir, err);
    Emitter emitter(out, format == "csv", timing);

    std::vector<Request> requests;
    try {
        auto rc = [&] { return Json{{"rank", rank}, {"class", cls}}; };
        auto check_rc = [&] {
            require_positive(rank, "rank");
            require_positive(cls, "class");
        };
        if (app.got_subcommand(witt)) {
            require_positive(rank, "rank");
            requests.push_back({"witt", {{"rank", rank}, {"max_degree", max_degree}}, [=] { return do_witt(rank, max_degree); }});
        } else if (app.got_subcommand(hall)) {
            check_rc();
            requests.push_back({"hall", rc(), [=] { return do_hall(rank, cls); }});
        } else if (app.got_subcommand(bch)) {
            check_rc();
            auto basis = lie::hall_basis(rank, cls);
            // canonical element text keeps cache keys stable
            Json p = rc();
            p["x"] = terms_json(parse_element(x, basis));
            p["y"] = terms_json(parse_element(y, basis));
            requests.push_back({"bch", p, [=] { return do_bch(rank, cls, x, y); }});
        } else if (app.got_subcommand(lcs)) {
            check_rc();
            requests.push_back({"lcs-ranks", rc(), [=] { return do_lcs(rank, cls); }});
        } else if (app.got_subcommand(center)) {
            check_rc();
            requests.push_back({"center", rc(), [=] { return do_center(rank, cls); }});
        } else if (app.got_subcommand(betti)) {
            check_rc();
            if (betti->got_subcommand(betti_group)) {
                requests.push_back({"betti group", rc(), [=] { return do_betti_group(rank, cls); }});
            } else if (betti->got_subcommand(betti_lie)) {
                std::optional<std::size_t> d;
                Json p = rc();
                if (lie_degree->count()) p["degree"] = *(d = degree);
                requests.push_back({"betti lie", p, [=] { return do_betti_lie(rank, cls, d); }});
            } else {
                std::optional<std::size_t> d;
                Json p = rc();
                if (ia_degree->count()) p["degree"] = *(d = degree);
                requests.push_back({"betti ia", p, [=] { return do_betti_ia(rank, cls, d); }});
            }
        } else if (app.got_subcommand(weighted)) {
            check_rc();
            Json p = rc();
            p["degree"] = degree;
            p["ia"] = ia_flag;
            requests.push_back({"weighted-betti", p, [=] { return do_weighted(rank, cls, degree, ia_flag); }});
        } else if (app.got_subcommand(dynkin)) {
            require_positive(rank, "rank");
            require_positive(max_degree, "max-degree");
            requests.push_back({"dynkin-check", {{"rank", rank}, {"max_degree", max_degree}},
                                [=] { return do_dynkin(rank, max_degree); }});
        } else if (app.got_subcommand(summand)) {
            check_rc();
            Json p = rc();
            p["degree"] = degree;
            requests.push_back({"summand-check", p, [=] { return do_summand(rank, cls, degree); }});
        } else if (app.got_subcommand(coinv)) {
            auto e = rep::parse_expr(expr);
            if (rank < 2) throw std::invalid_argument("coinv: --rank must be >= 2");
            requests.push_back({"coinv", {{"expr", e.to_string()}, {"rank", rank}}, [=] { return do_coinv(e, rank); }});
        } else if (app.got_subcommand(degree_check)) {
            require_positive(cls, "class");
            require_positive(max_rank, "max-rank");
            requests.push_back({"degree-check", {{"class", cls}, {"degree", degree}, {"max_rank", max_rank}},
                                [=] { return do_degree_check(cls, degree, max_rank); }});
        } else if (app.got_subcommand(selftest)) {
            for (const auto& check : self_checks()) requests.push_back({"selftest", {{"check", check.name}}, check.run});
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    int status = 0;
    for (const auto& req : requests) {
        try {
            double ms = 0;
            Json result = resolve(req, cache, ms);
            emitter.emit(req, result, ms);
            if (req.command == "selftest" && !result.value("passed", false)) status = 1;
        } catch (const std::invalid_argument& e) {
            err << "error: " << e.what() << "\n";
            return 2;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return 1;
        }
    }
    return status;
}

}  // namespace nilhom::cli
