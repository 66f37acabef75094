#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tsf/cli.hpp"
#include "tsf/hodge.hpp"

namespace py = pybind11;

namespace {

py::tuple run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code;
    {
        py::gil_scoped_release release;
        code = tsf::cli::run(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
}

std::vector<int> basic_betti(const std::string& name) {
    auto p = tsf::build_sl2(tsf::builder(name));
    std::vector<int> out;
    for (int k : p.carrier.degrees()) out.push_back(tsf::cohomology(p.d, k).q.dim);
    return out;
}

}  // namespace

PYBIND11_MODULE(_tsf, m) {
    m.doc() = "Exact transversely symplectic foliation toolkit";
    py::register_exception<tsf::DomainError>(m, "DomainError", PyExc_ValueError);

    m.attr("__version__") = tsf::cli::kToolVersion;
    m.attr("SCHEMA_VERSION") = tsf::cli::kSchemaVersion;

    m.def("run", &run_cli, py::arg("args"),
          "Run one tsf command line; returns (exit_code, stdout, stderr).");
    m.def("builders", &tsf::builder_names);
    m.def("model_json", [](const std::string& name) { return tsf::model_to_json(tsf::builder(name)).dump(); },
          py::arg("name"));
    m.def("basic_betti", &basic_betti, py::arg("name"), "Basic cohomology dimensions by degree.");
    m.def("fnv1a64", [](const std::string& s) { return tsf::cli::fnv1a64(s); }, py::arg("data"));
}
