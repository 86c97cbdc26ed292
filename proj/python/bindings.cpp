#include "cli.hpp"
#include "cylbill/admissible.hpp"
#include "cylbill/entropy.hpp"
#include "cylbill/flow.hpp"
#include "cylbill/freegroup.hpp"
#include "cylbill/rotation.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace cylbill;

namespace {

std::string termination_name(Termination t) {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::Singular: return "singular";
    case Termination::EventBudget: return "event_budget";
  }
  return "unknown";
}

py::dict simulate_py(const Vec3& q, const Vec3& v, double T, double r0) {
  const OrbitRecord rec = simulate({q, v.normalized(), 0.0}, T, r0, {.keep_collisions = false});
  py::dict d;
  d["word"] = word_of(rec).str();
  d["crossings"] = rec.crossings;
  d["collisions"] = rec.collisions;
  d["duration"] = rec.duration();
  d["final_q"] = Vec3(rec.final.q);
  d["final_v"] = Vec3(rec.final.v);
  d["termination"] = termination_name(rec.termination);
  return d;
}

py::dict construct_py(const std::string& word, double r0, std::optional<double> target_speed) {
  const ReducedWord w = ReducedWord::parse_reduced(word);
  AdmissibleOrbit orbit;
  OrbitRecord record;
  if (target_speed) {
    auto built = construct_at_speed(w, r0, *target_speed);
    orbit = std::move(built.orbit);
    record = std::move(built.record);
  } else {
    orbit = minimize_arclength(plan_word(w), r0);
    record = validate_orbit(orbit);
    orbit.validated = true;
  }
  std::vector<Vec3> points(orbit.points.begin(), orbit.points.end());
  py::dict d;
  d["word"] = word_of(record).str();
  d["length"] = orbit.length;
  d["duration"] = orbit.duration();
  d["speed"] = orbit.speed();
  d["points"] = points;
  d["cell_times"] = orbit.cell_times;
  d["validated"] = orbit.validated;
  return d;
}

py::tuple run_cli_py(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Billiards among cylinders on the edges of the cubic lattice";

  py::register_exception<ConstructionError>(m, "ConstructionError", PyExc_RuntimeError);

  m.def("reduce", [](const std::string& s) { return ReducedWord::parse(s).str(); }, py::arg("word"),
        "Free reduction of a word over a, b, c and their inverses A, B, C.");
  m.def("count_reduced_words", [](unsigned n) { return py::int_(py::str(count_reduced_words(n).str())); },
        py::arg("n"));
  m.def("simulate", &simulate_py, py::arg("q"), py::arg("v"), py::arg("T"), py::arg("r0"));
  m.def(
      "rotation_vector",
      [](const std::string& word, double T) {
        const RotationSample s = rotation_vector(ReducedWord::parse_reduced(word), T);
        return py::make_tuple(s.vector.speed, s.vector.direction.word.str());
      },
      py::arg("word"), py::arg("T"));
  m.def(
      "upper_bound",
      [](double T, double eps0) {
        const UpperBound u = upper_bound_f(T, eps0);
        return py::make_tuple(u.f, u.rate);
      },
      py::arg("T"), py::arg("eps0"));
  m.def("lower_bound_words", &lower_bound_words, py::arg("T"));
  m.def("construct", &construct_py, py::arg("word"), py::arg("r0"), py::arg("target_speed") = std::nullopt);
  m.def("run_cli", &run_cli_py, py::arg("args"), "Runs the command line tool and returns (exit code, stdout, stderr).");
}
