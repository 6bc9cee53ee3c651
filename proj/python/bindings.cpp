#include "frechet/cli_bench.hpp"
#include "frechet/oracles.hpp"
#include "frechet/simplification.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace frechet;

namespace {

using Vertices = std::vector<std::pair<std::int64_t, std::int64_t>>;

Curve to_curve(const Vertices& v) {
  if (v.empty()) throw py::value_error("curve needs at least one vertex");
  return Curve::from_integers(v);
}

py::int_ to_int(const BigInt& b) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(b.str().c_str(), nullptr, 10));
}

py::tuple to_pair(const IntFraction& f) { return py::make_tuple(to_int(f.num()), to_int(f.den())); }

IntFraction from_pair(const py::int_& num, const py::int_& den) {
  auto big = [](const py::int_& v) { return BigInt(py::str(py::handle(v)).cast<std::string>()); };
  return IntFraction(big(num), big(den));
}

Engine engine_of(const std::string& name) {
  const auto e = parse_engine(name);
  if (!e) throw py::value_error("engine must be 'dijkstra' or 'sweepline'");
  return *e;
}

Vertices to_vertices(const Curve& c) {
  Vertices out;
  for (const Point& p : c.vertices())
    out.emplace_back(p.x.num().convert_to<std::int64_t>(), p.y.num().convert_to<std::int64_t>());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact continuous Frechet distance for integer polygonal curves.";

  m.def(
      "frechet_squared",
      [](const Vertices& a, const Vertices& b, const std::string& engine, bool simplify) {
        const Curve ca = to_curve(a), cb = to_curve(b);
        PairOutcome r;
        {
          py::gil_scoped_release release;
          r = compute_pair(ca, cb, engine_of(engine), simplify);
        }
        return py::make_tuple(to_pair(r.value2.value), r.iterations, r.vertices_inserted);
      },
      py::arg("a"), py::arg("b"), py::arg("engine") = "dijkstra", py::arg("simplify") = true,
      "Squared distance as (num, den), VE-graph solves, inserted vertices.");

  m.def(
      "decide",
      [](const Vertices& a, const Vertices& b, const py::int_& num, const py::int_& den) {
        return decide_frechet(to_curve(a), to_curve(b), {from_pair(num, den)});
      },
      py::arg("a"), py::arg("b"), py::arg("num"), py::arg("den"));

  m.def(
      "brute_force_squared",
      [](const Vertices& a, const Vertices& b) { return to_pair(brute_force_exact(to_curve(a), to_curve(b)).value); },
      py::arg("a"), py::arg("b"));

  m.def(
      "discrete_squared",
      [](const Vertices& a, const Vertices& b) { return to_pair(discrete_frechet(to_curve(a), to_curve(b)).value); },
      py::arg("a"), py::arg("b"));

  m.def(
      "simplify",
      [](const Vertices& c, const py::int_& num, const py::int_& den) {
        return initial_simplification(to_curve(c), {from_pair(num, den)}).selected();
      },
      py::arg("curve"), py::arg("num"), py::arg("den") = py::int_(1),
      "Indices kept by the greedy simplification at squared threshold num/den.");

  m.def(
      "read_curve", [](const std::string& path, int scale) { return to_vertices(parse_curve_file(path, scale)); },
      py::arg("path"), py::arg("scale") = 0);

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
  py::register_exception<IterationBoundExceeded>(m, "IterationBoundExceeded", PyExc_RuntimeError);
}
