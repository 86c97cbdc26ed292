#include "cylbill/io.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace cylbill {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

void put_vec(std::ostream& out, const Vec3& v) {
  out << '[' << format_double(v[0]) << ',' << format_double(v[1]) << ',' << format_double(v[2]) << ']';
}

nlohmann::ordered_json cell_json(const Cell& c) { return {c[0], c[1], c[2]}; }

nlohmann::ordered_json edge_json(const Edge& e) {
  return {{"axis", e.axis}, {"base", cell_json(e.base)}};
}

// Compartment each vertex was planned in: the one where it is not the entry.
std::vector<std::size_t> owner_cells(const EdgePlan& plan) {
  std::vector<std::size_t> owner(plan.vertices.size(), 0);
  for (std::size_t k = 0; k < plan.cells.size(); ++k)
    for (std::size_t i = plan.cells[k].first + (k == 0 ? 0 : 1); i <= plan.cells[k].last && i < owner.size(); ++i)
      owner[i] = k;
  return owner;
}

}  // namespace

void write_events_jsonl(std::ostream& out, const OrbitRecord& record) {
  for (const auto& e : record.events) {
    out << "{\"t\":" << format_double(e.time);
    if (e.kind == EventKind::Collision) {
      out << ",\"kind\":\"collision\",\"axis\":" << e.cylinder.axis << ",\"sign\":0,\"line\":["
          << e.cylinder.base[0] << ',' << e.cylinder.base[1] << ']';
    } else {
      out << ",\"kind\":\"crossing\",\"axis\":" << e.axis << ",\"sign\":" << e.sign;
    }
    out << ",\"q\":";
    put_vec(out, e.q);
    out << ",\"v\":";
    put_vec(out, e.v);
    out << "}\n";
  }
}

void write_summary_row(std::ostream& out, std::uint64_t seed, const OrbitRecord& record) {
  const ReducedWord w = word_of(record);
  out << seed << ',' << format_double(record.duration()) << ',' << format_double(record.r0) << ','
      << record.crossings[0] << ',' << record.crossings[1] << ',' << record.crossings[2] << ',' << w.size() << ','
      << w.prefix(64).str() << ',' << (record.singular() ? 1 : 0) << '\n';
}

void write_rotation_row(std::ostream& out, const RotationSample& s) {
  out << s.seed << ',' << format_double(s.T) << ',' << format_double(s.vector.speed) << ',' << s.word_length << ','
      << s.crossings[0] << ',' << s.crossings[1] << ',' << s.crossings[2] << ',' << s.vector.direction.word.str()
      << '\n';
}

void write_entropy_csv(std::ostream& out, const EntropyReport& report) {
  out << kEntropyHeader << '\n';
  for (const auto& r : report.rows) {
    out << format_double(r.T) << ',' << format_double(report.eps0) << ',' << format_double(report.r0) << ','
        << report.n_orbits << ',' << r.n_hat << ',' << format_double(r.log_rate) << ',' << format_double(r.f) << ','
        << format_double(r.upper_rate) << ',' << format_double(r.lower_rate) << '\n';
  }
}

void write_contacts_csv(std::ostream& out, const AdmissibleOrbit& orbit) {
  out << kContactHeader << '\n';
  const EdgePlan& plan = orbit.plan;
  const auto owner = owner_cells(plan);
  for (std::size_t i = 0; i < plan.vertices.size(); ++i) {
    const PlanVertex& v = plan.vertices[i];
    const Cell& c = plan.cells[owner[i]].cell;
    const Vec3& p = orbit.points[i];
    out << i << ',' << c[0] << ',' << c[1] << ',' << c[2] << ',' << v.edge.axis << ',' << v.edge.base[0] << ','
        << v.edge.base[1] << ',' << v.edge.base[2] << ',' << format_double(orbit.axial[i]) << ','
        << format_double(orbit.angle[i]) << ',' << v.force << ',' << to_string(v.kind) << ',' << (v.idle ? 1 : 0)
        << ',' << format_double(p[0]) << ',' << format_double(p[1]) << ',' << format_double(p[2]) << '\n';
  }
}

nlohmann::ordered_json plan_to_json(const EdgePlan& plan) {
  nlohmann::ordered_json j;
  j["word"] = plan.word.str();
  j["periodic"] = plan.periodic;
  if (plan.periodic) j["period_shift"] = cell_json(plan.period_shift);
  auto cells = nlohmann::ordered_json::array();
  for (const auto& c : plan.cells) {
    nlohmann::ordered_json cj;
    cj["cell"] = cell_json(c.cell);
    cj["first"] = c.first;
    cj["last"] = c.last;
    cj["case"] = c.turn_case ? std::string(to_string(*c.turn_case)) : std::string("end");
    cells.push_back(std::move(cj));
  }
  j["compartments"] = std::move(cells);
  auto verts = nlohmann::ordered_json::array();
  for (const auto& v : plan.vertices) {
    nlohmann::ordered_json vj;
    vj["edge"] = edge_json(v.edge);
    vj["force"] = v.force;
    vj["kind"] = std::string(to_string(v.kind));
    vj["pinned"] = v.pinned;
    vj["idle"] = v.idle;
    verts.push_back(std::move(vj));
  }
  j["contacts"] = std::move(verts);
  return j;
}

nlohmann::ordered_json orbit_to_json(const AdmissibleOrbit& orbit) {
  nlohmann::ordered_json j;
  j["word"] = orbit.plan.word.str();
  j["r0"] = orbit.r0;
  j["length"] = orbit.length;
  j["lead_trim"] = orbit.lead_trim;
  j["tail_trim"] = orbit.tail_trim;
  j["duration"] = orbit.duration();
  j["speed"] = orbit.speed();
  j["interior_margin"] = orbit.interior_margin;
  j["gradient_norm"] = orbit.gradient_norm;
  j["iterations"] = orbit.iterations;
  j["validated"] = orbit.validated;
  j["cell_times"] = orbit.cell_times;
  auto pts = nlohmann::ordered_json::array();
  for (const auto& p : orbit.points) pts.push_back({p[0], p[1], p[2]});
  j["points"] = std::move(pts);
  return j;
}

}  // namespace cylbill
