#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "agdcas/registry.hpp"

namespace py = pybind11;
using namespace agdcas;

namespace {

NamedStructure lookup(const std::string& name, int n, int m, int window) { return resolve_structure({name, n, m, window}); }

VarKey generator(const NamedStructure& s, int index, std::pair<int, int> entry) {
  for (VarKey g : s.generators())
    if (g.index() == index && g.a() == entry.first && g.b() == entry.second) return g;
  throw py::value_error("no generator with that index and matrix entry");
}

std::string show(const LambdaValue& v, const Namer& namer, Format f) {
  if (f == Format::Json) return to_json(v).dump();
  return f == Format::Latex ? render_latex(v, namer) : render_text(v, namer);
}

std::string show(const DiffPoly& p, const Namer& namer, Format f) {
  if (f == Format::Json) return to_json(p).dump();
  return f == Format::Latex ? render_latex(p, namer) : render_text(p, namer);
}

HierarchySpec spec_of(const NamedStructure& s) {
  if (!s.ctx) throw py::value_error("structure '" + s.name + "' has no Lax operator");
  HierarchySpec spec;
  spec.ctx = *s.ctx;
  return spec;
}

std::string bracket(const std::string& name, int i, int j, std::pair<int, int> ab, std::pair<int, int> cd,
                    const std::string& which, const std::string& format, int n, int m, int window) {
  NamedStructure s = lookup(name, n, m, window);
  Structure chosen = s.first;
  if (which == "K") {
    if (!s.second) throw py::value_error("structure has no second bracket");
    chosen = *s.second;
  } else if (which == "pencil") {
    chosen = s.pencil();
  } else if (which != "H") {
    throw py::value_error("which must be H, K or pencil");
  }
  return show(chosen.bracket(generator(s, i, ab), generator(s, j, cd)), s.namer, parse_format(format));
}

py::dict verify(const std::string& name, const std::vector<std::string>& checks, int n, int m, int window) {
  NamedStructure s = lookup(name, n, m, window);
  py::dict out;
  for (const auto& c : checks) {
    std::vector<CheckResult> rs;
    if (c == "skew")
      rs = sweep(Check::Skew, s.first, s.generators(), 1);
    else if (c == "jacobi")
      rs = sweep(Check::Jacobi, s.first, s.generators(), 1);
    else if (c == "compat") {
      if (!s.second) throw py::value_error("structure has no second bracket");
      rs = sweep(Check::Compat, s.first, s.generators(), 1, &*s.second);
    } else {
      throw py::value_error("unknown check: " + c);
    }
    bool ok = true;
    for (const auto& r : rs) ok = ok && r.zero;
    out[py::str(c)] = ok;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact symbolic computations with Adler-Gelfand-Dickey Poisson structures";
  m.attr("__version__") = "0.1.0";

  m.def("structure_names", &structure_names, "Names accepted by the structure lookups.");
  m.def("bracket", &bracket, py::arg("name"), py::arg("i"), py::arg("j"), py::arg("ab") = std::pair<int, int>{1, 1},
        py::arg("cd") = std::pair<int, int>{1, 1}, py::arg("which") = "H", py::arg("format") = "text",
        py::arg("N") = 0, py::arg("m") = 1, py::arg("window") = 3,
        "λ-bracket of two generators, selected by index and matrix entry.");
  m.def("verify", &verify, py::arg("name"), py::arg("checks") = std::vector<std::string>{"skew", "jacobi"},
        py::arg("N") = 0, py::arg("m") = 1, py::arg("window") = 3,
        "Run axiom sweeps; returns {check: all residuals vanish}.");
  m.def(
      "flow",
      [](const std::string& name, int k, const std::string& format, int n, int m, int window) {
        NamedStructure s = lookup(name, n, m, window);
        return render_flow(lax_flow(spec_of(s), k), s.namer, parse_format(format));
      },
      py::arg("name"), py::arg("k"), py::arg("format") = "text", py::arg("N") = 0, py::arg("m") = 1,
      py::arg("window") = 3, "The flow d/dt_k from the Lax equation.");
  m.def(
      "density",
      [](const std::string& name, int k, const std::string& format, int n, int m, int window) {
        NamedStructure s = lookup(name, n, m, window);
        return show(reduce_mod_derivatives(density(spec_of(s), k)), s.namer, parse_format(format));
      },
      py::arg("name"), py::arg("k"), py::arg("format") = "text", py::arg("N") = 0, py::arg("m") = 1,
      py::arg("window") = 3, "Conserved density h_k modulo total derivatives.");
  m.def(
      "central_charge",
      [](const std::string& name, int n, int m) {
        NamedStructure s = lookup(name, n, m, 3);
        if (!s.ctx || !s.ctx->reduced) throw py::value_error("needs a W algebra (w2, w3, wN, w-mat(N,m))");
        VirasoroReport r = virasoro_report(*s.ctx, s.first);
        if (!r.virasoro_shape) throw py::value_error("no Virasoro element found");
        return r.central_charge.get_str();
      },
      py::arg("name"), py::arg("N") = 0, py::arg("m") = 1, "Central charge as a string p or p/q.");

  py::register_exception<std::invalid_argument>(m, "StructureError", PyExc_ValueError);
}
