// JSON strings cross the boundary; the Python package decodes them.

#include "gptnc/app.hpp"
#include "gptnc/embed.hpp"
#include "gptnc/errors.hpp"
#include "gptnc/gpt.hpp"
#include "gptnc/io.hpp"
#include "gptnc/quasiprob.hpp"
#include "gptnc/quotient.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace gptnc;

namespace {

std::string dump(const io::Json& j) { return j.dump(); }

Gpt gpt_of(const std::string& text) { return io::gpt_from(io::parse(text)); }

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Simplex-embeddability toolkit core";

    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error;
    error.call_once_and_store_result([&]() { return py::exception<Error>(m, "GptncError"); });
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            // Attach the stable kind so callers need not parse the message.
            PyErr_SetObject(error.get_stored().ptr(), py::make_tuple(e.kind(), e.what()).ptr());
        }
    });

    m.def("catalog_names", &catalog_names);

    m.def(
        "catalog",
        [](const std::string& name, const std::map<std::string, std::string>& params) {
            auto c = catalog(name, params);
            io::Json out{{"gpt", io::to_json(c.gpt)}};
            if (c.model) {
                out["model"] = io::to_json(*c.model);
                out["ontic_labels"] = c.ontic_labels;
            }
            return dump(out);
        },
        py::arg("name"), py::arg("params") = std::map<std::string, std::string>{});

    m.def("validate", [](const std::string& gpt) { return dump(io::to_json(validate(gpt_of(gpt)))); });

    m.def(
        "decide",
        [](const std::string& gpt, bool minimize) {
            py::gil_scoped_release unlock;
            return dump(io::to_json(embed::decide(gpt_of(gpt), {minimize})));
        },
        py::arg("gpt"), py::arg("minimize") = true);

    m.def("verify_certificate", [](const std::string& gpt, const std::string& farkas) {
        return embed::verify_certificate(gpt_of(gpt), io::vector_from(io::parse(farkas)));
    });

    m.def("min_d_lower_bound", [](const std::string& gpt) { return embed::min_d_lower_bound(gpt_of(gpt)); });

    m.def(
        "bilinear_search",
        [](const std::string& gpt, std::size_t d, std::size_t restarts, std::uint64_t seed) -> std::optional<std::string> {
            embed::SearchOptions so;
            so.restarts = restarts;
            so.seed = seed;
            py::gil_scoped_release unlock;
            auto model = embed::bilinear_search(gpt_of(gpt), d, so);
            if (!model) return std::nullopt;
            return dump(io::to_json(*model));
        },
        py::arg("gpt"), py::arg("d"), py::arg("restarts") = 100, py::arg("seed") = 0);

    m.def(
        "quotient",
        [](const std::string& csv, std::optional<std::string> relations, double tol) {
            auto t = quotient::parse_table_csv(csv);
            if (relations) io::relations_from(io::parse(*relations), t);
            auto q = quotient::quotient_to_gpt(t, tol);
            return dump({{"gpt", io::to_json(q.gpt)}, {"maps", io::to_json(q.maps)}, {"report", io::to_json(q.report)}});
        },
        py::arg("csv"), py::arg("relations") = std::nullopt, py::arg("tol") = 0.0);

    m.def(
        "robustness_radius",
        [](const std::string& gpt, double precision) {
            py::gil_scoped_release unlock;
            return dump(io::to_json(app::robustness_radius(gpt_of(gpt), precision)));
        },
        py::arg("gpt"), py::arg("precision") = 1e-3);

    m.def(
        "verdict",
        [](const std::string& csv, const std::string& epsilon, std::optional<std::string> relations, double tol) {
            auto nt = app::ingest(csv, relations, io::rational_from(io::Json(epsilon)));
            py::gil_scoped_release unlock;
            return dump(io::to_json(app::verdict(nt, tol)));
        },
        py::arg("csv"), py::arg("epsilon") = "0", py::arg("relations") = std::nullopt, py::arg("tol") = 0.0);

    m.def(
        "quasiprob",
        [](const std::string& gpt, std::optional<std::string> pairs, std::optional<std::string> model) {
            Gpt g = gpt_of(gpt);
            quasiprob::QuasiRep rep;
            if (pairs) rep = quasiprob::from_decomposition(g, io::pairs_from(io::parse(*pairs)));
            else if (model) rep = quasiprob::from_model(io::model_from(io::parse(*model)));
            else throw BadParams("give pairs or model");
            auto neg = quasiprob::negativity(g, rep);
            return dump({{"rep", io::to_json(rep)},
                         {"positive", quasiprob::is_positive(g, rep)},
                         {"valid", quasiprob::check(g, rep).ok()},
                         {"negativity", {{"states", io::to_json(neg.states)},
                                         {"effects", io::to_json(neg.effects)},
                                         {"total", io::to_json(neg.total())}}}});
        },
        py::arg("gpt"), py::arg("pairs") = std::nullopt, py::arg("model") = std::nullopt);
}
