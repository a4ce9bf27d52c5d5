// gptnc command-line front end. Every subcommand reads files (or catalog
// names), calls into the library and writes one JSON document.

#include "gptnc/app.hpp"
#include "gptnc/embed.hpp"
#include "gptnc/errors.hpp"
#include "gptnc/gpt.hpp"
#include "gptnc/io.hpp"
#include "gptnc/quasiprob.hpp"
#include "gptnc/quotient.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace gptnc;
using io::Json;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kNonclassical = 3;
constexpr int kInconclusive = 4;

struct Globals {
    bool exact = false;
    double tol = 0;  // 0 means exact
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    std::string format = "json";
    std::string out;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInput("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CatalogParams parse_params(const std::vector<std::string>& items) {
    CatalogParams p;
    for (const auto& kv : items) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw BadParams("parameter '" + kv + "' is not key=value");
        p[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return p;
}

/// A path to a Gpt JSON file, or "catalog:<name>".
Gpt load_gpt(const std::string& spec, const std::vector<std::string>& params) {
    if (spec.rfind("catalog:", 0) == 0) return catalog(spec.substr(8), parse_params(params)).gpt;
    return io::gpt_from(io::parse(read_file(spec)));
}

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(g.out);
    if (!f) throw MalformedInput("cannot write " + g.out);
    f << text << '\n';
}

void emit(const Globals& g, const Json& j) { emit(g, j.dump(2)); }

std::string csv_rows(const Matrix& m) {
    std::ostringstream out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t c = 0; c < m.cols(); ++c) out << (c ? "," : "") << to_string(m(i, c));
        out << '\n';
    }
    return out.str();
}

Rational tol_of(const Globals& g) { return g.tol > 0 ? rationalize(g.tol, g.tol * 1e-3) : Rational(0); }

} // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Simplex-embeddability and noncontextuality toolkit for prepare-measure GPTs", "gptnc"};
    cli.require_subcommand(1);
    cli.fallthrough();
    Globals g;
    double tol_flag = -1;
    cli.add_flag("--exact", g.exact, "Exact rational arithmetic throughout (default unless --tol or GPTNC_TOL)");
    cli.add_option("--tol", tol_flag, "Float tolerance for ingestion and comparisons");
    cli.add_option("--seed", g.seed, "Seed for randomized heuristics");
    cli.add_option("--jobs", g.jobs, "Worker threads for restart batches");
    cli.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    cli.add_option("--out", g.out, "Write the result here instead of stdout");

    std::string gpt_path, table_path, relations_path, pairs_path, model_path, certificate_path;
    std::vector<std::string> params;
    std::string name;
    bool with_model = false, min_d = false;
    std::size_t search_d = 0, restarts = 100, minimize_d = 0;
    double precision = 1e-3;
    std::string epsilon_text = "0";

    auto* cat = cli.add_subcommand("catalog", "Emit a catalog GPT (omit the name to list them)");
    cat->add_option("name", name, "rebit, gbit, classical, polygon, restricted_square");
    cat->add_option("--param", params, "key=value, e.g. d=3 or n=5");
    cat->add_flag("--model", with_model, "Include the reference ontological model when one exists");

    auto* val = cli.add_subcommand("validate", "Check a GPT's defining constraints");
    val->add_option("--gpt", gpt_path, "GPT JSON file or catalog:<name>")->required();
    val->add_option("--param", params, "Catalog parameters");

    auto* quo = cli.add_subcommand("quotient", "Quotient an operational table into a GPT");
    quo->add_option("--table", table_path, "CSV table")->required();
    quo->add_option("--relations", relations_path, "Relations JSON");

    auto* emb = cli.add_subcommand("embed", "Decide simplex-embeddability");
    emb->add_option("--gpt", gpt_path, "GPT JSON file or catalog:<name>")->required();
    emb->add_option("--param", params, "Catalog parameters");
    emb->add_flag("--min-d", min_d, "Search for smaller models between the lower bound and the LP's d");
    emb->add_option("--certificate", certificate_path, "Also write the witness or Farkas certificate here");
    emb->add_option("--search", search_d, "Run only the fixed-cardinality search with this d");
    emb->add_option("--restarts", restarts, "Restarts for the fixed-cardinality search");

    auto* qp = cli.add_subcommand("quasiprob", "Quasiprobability representations");
    qp->add_option("--gpt", gpt_path, "GPT JSON file or catalog:<name>")->required();
    qp->add_option("--param", params, "Catalog parameters");
    qp->add_option("--pairs", pairs_path, "Pairs JSON [{\"v\": [...], \"h\": [...]}, ...]");
    qp->add_option("--from-model", model_path, "Ontological model JSON");
    qp->add_option("--minimize", minimize_d, "Heuristic negativity minimization with this |Λ|");

    auto* rob = cli.add_subcommand("robustness", "Depolarizing-noise threshold for embeddability");
    rob->add_option("--gpt", gpt_path, "GPT JSON file or catalog:<name>")->required();
    rob->add_option("--param", params, "Catalog parameters");
    rob->add_option("--precision", precision, "Bisection bracket width");

    auto* ver = cli.add_subcommand("verdict", "Noise-robust classicality verdict for a measured table");
    ver->add_option("--table", table_path, "CSV table")->required();
    ver->add_option("--relations", relations_path, "Relations JSON");
    ver->add_option("--epsilon", epsilon_text, "Entrywise uncertainty radius");

    CLI11_PARSE(cli, argc, argv);

    if (const char* env = std::getenv("GPTNC_TOL")) g.tol = std::atof(env);
    if (tol_flag >= 0) g.tol = tol_flag;
    if (g.exact) g.tol = 0;

    try {
        if (cat->parsed()) {
            if (name.empty()) {
                emit(g, Json(catalog_names()));
                return kOk;
            }
            auto entry = catalog(name, parse_params(params));
            if (!with_model) {
                emit(g, io::to_json(entry.gpt));
                return kOk;
            }
            Json out{{"gpt", io::to_json(entry.gpt)}};
            if (entry.model) {
                out["model"] = io::to_json(*entry.model);
                out["ontic_labels"] = entry.ontic_labels;
            }
            emit(g, out);
            return kOk;
        }
        if (val->parsed()) {
            auto report = validate(load_gpt(gpt_path, params), tol_of(g));
            emit(g, io::to_json(report));
            return report.ok() ? kOk : kError;
        }
        if (quo->parsed()) {
            auto t = quotient::parse_table_csv(read_file(table_path));
            if (!relations_path.empty()) io::relations_from(io::parse(read_file(relations_path)), t);
            auto q = quotient::quotient_to_gpt(t, g.tol);
            if (g.format == "csv") {
                std::ostringstream out;
                for (const auto& [label, v] : q.maps.state_of) {
                    out << "state," << label;
                    for (const auto& x : v) out << ',' << to_string(x);
                    out << '\n';
                }
                for (const auto& [label, v] : q.maps.effect_of) {
                    out << "effect," << label;
                    for (const auto& x : v) out << ',' << to_string(x);
                    out << '\n';
                }
                emit(g, out.str());
            } else {
                emit(g, Json{{"gpt", io::to_json(q.gpt)}, {"maps", io::to_json(q.maps)}, {"report", io::to_json(q.report)}});
            }
            return kOk;
        }
        if (emb->parsed()) {
            Gpt gpt = load_gpt(gpt_path, params);
            embed::SearchOptions so;
            so.restarts = restarts;
            so.seed = g.seed;
            so.jobs = g.jobs;
            if (search_d > 0) {
                auto model = embed::bilinear_search(gpt, search_d, so);
                Json out{{"d", search_d}, {"found", model.has_value()}, {"lower_bound", embed::min_d_lower_bound(gpt)}};
                if (model) out["model"] = io::to_json(*model);
                emit(g, out);
                return model ? kOk : kNonclassical;
            }
            auto v = embed::decide(gpt);
            Json out = io::to_json(v);
            if (min_d && v.embeddable) {
                std::size_t best = v.witness->d;
                for (std::size_t d = v.lower_bound; d < best; ++d)
                    if (auto m = embed::bilinear_search(gpt, d, so)) {
                        best = d;
                        out["min_d_model"] = io::to_json(*m);
                        break;
                    }
                out["min_d"] = {{"lower_bound", v.lower_bound}, {"best_d", best}, {"minimal", best == v.lower_bound}};
            }
            if (g.format == "csv") {
                emit(g, v.embeddable ? "iota\n" + csv_rows(v.witness->iota) + "kappa\n" + csv_rows(v.witness->kappa)
                                     : "farkas\n" + csv_rows(Matrix::from_rows({v.farkas}, v.farkas.size())));
            } else {
                emit(g, out);
            }
            if (!certificate_path.empty()) {
                std::ofstream f(certificate_path);
                f << (v.embeddable ? io::to_json(*v.witness) : Json{{"farkas", io::to_json(v.farkas)}}).dump(2) << '\n';
            }
            return v.embeddable ? kOk : kNonclassical;
        }
        if (qp->parsed()) {
            Gpt gpt = load_gpt(gpt_path, params);
            quasiprob::QuasiRep rep;
            Json extra = Json::object();
            if (!pairs_path.empty()) {
                rep = quasiprob::from_decomposition(gpt, io::pairs_from(io::parse(read_file(pairs_path))));
            } else if (!model_path.empty()) {
                rep = quasiprob::from_model(io::model_from(io::parse(read_file(model_path))));
            } else if (minimize_d > 0) {
                auto res = quasiprob::minimize_negativity(gpt, minimize_d, g.seed);
                rep = res.rep;
                extra["heuristic"] = "penalized descent; a nonzero negativity proves nothing";
                extra["iterations"] = res.iterations;
            } else {
                throw BadParams("give one of --pairs, --from-model, --minimize");
            }
            auto neg = quasiprob::negativity(gpt, rep);
            auto chk = quasiprob::check(gpt, rep, {}, tol_of(g));
            bool positive = quasiprob::is_positive(gpt, rep, tol_of(g));
            Json out{{"rep", io::to_json(rep)},
                     {"positive", positive},
                     {"valid", chk.ok()},
                     {"negativity", {{"states", io::to_json(neg.states)},
                                     {"effects", io::to_json(neg.effects)},
                                     {"total", io::to_json(neg.total())}}}};
            out.update(extra);
            emit(g, out);
            return positive ? kOk : kNonclassical;
        }
        if (rob->parsed()) {
            auto r = app::robustness_radius(load_gpt(gpt_path, params), precision);
            emit(g, io::to_json(r));
            return sgn(r.r_star) == 0 ? kOk : kNonclassical;
        }
        if (ver->parsed()) {
            std::optional<std::string> rel;
            if (!relations_path.empty()) rel = read_file(relations_path);
            auto nt = app::ingest(read_file(table_path), rel, parse_rational(epsilon_text));
            auto v = app::verdict(nt, g.tol);
            emit(g, io::to_json(v));
            switch (v.outcome) {
            case app::Outcome::Classical: return kOk;
            case app::Outcome::Nonclassical: return kNonclassical;
            case app::Outcome::Inconclusive: return kInconclusive;
            }
        }
    } catch (const Error& e) {
        std::cerr << Json{{"error", e.kind()}, {"message", e.what()}}.dump() << '\n';
        return kError;
    } catch (const std::exception& e) {
        std::cerr << Json{{"error", "InternalError"}, {"message", e.what()}}.dump() << '\n';
        return kError;
    }
    return kError;
}
