#include "cli.hpp"

#include "cylbill/admissible.hpp"
#include "cylbill/entropy.hpp"
#include "cylbill/io.hpp"
#include "cylbill/parallel.hpp"
#include "cylbill/random.hpp"
#include "cylbill/rotation.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

namespace cylbill::cli {

namespace {

namespace fs = std::filesystem;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::set<std::string> kFlagKeys = {"periodic", "events", "alternate-exit"};

struct Common {
  double r0 = 0.1;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::string out = ".";
  std::string config;
};

struct SimulateArgs {
  double T = 1000.0;
  long long n = 1;
  bool events = false;
};

struct ConstructArgs {
  std::string word;
  std::optional<double> target_speed;
  bool periodic = false;
  bool alternate_exit = false;
  int periods = 3;
};

struct RotationArgs {
  double T = 1000.0;
  long long n = 100;
  std::size_t prefix_len = kDefaultPrefixLength;
  std::size_t depth = 4;
  std::string words;
};

struct EntropyArgs {
  long long n = 1000;
  std::string T_grid = "5,10,15,20,25,30,35,40";
  double eps0 = 0.1;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--r0", c.r0, "Scatterer radius, in (0, 1/2)")->capture_default_str();
  app->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  app->add_option("--jobs", c.jobs, "Worker threads")->capture_default_str();
  app->add_option("--out", c.out, "Output directory")->capture_default_str();
  app->add_option("--config", c.config, "File of key = value lines; command-line values take precedence");
}

void check_common(const Common& c) {
  if (!(c.r0 > 0.0 && c.r0 < 0.5)) throw ConfigError("--r0 must lie in (0, 0.5)");
  if (c.jobs < 1) throw ConfigError("--jobs must be at least 1");
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return f;
}

void write_file(const fs::path& path, const std::string& text) {
  auto f = open_output(path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

fs::path prepare_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw std::runtime_error("cannot create " + p.string() + ": " + ec.message());
  return p;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_simulate(const Common& c, const SimulateArgs& a, std::ostream& out) {
  check_common(c);
  if (a.n < 1) throw ConfigError("--n must be at least 1");
  if (!(a.T > 0.0)) throw ConfigError("--T must be positive");
  const fs::path dir = prepare_dir(c.out);
  if (a.events) prepare_dir((dir / "events").string());

  const auto n = static_cast<std::size_t>(a.n);
  std::vector<std::string> rows(n);
  std::vector<char> within(n, 0), singular(n, 0);
  parallel_for(n, c.jobs, [&](std::size_t i) {
    const std::uint64_t s = stream_seed(c.seed, i);
    Rng rng(s);
    const PhasePoint start = random_phase_point(rng, c.r0);
    SimulateOptions so;
    so.keep_collisions = a.events;
    const OrbitRecord rec = simulate(start, a.T, c.r0, so);
    std::ostringstream row;
    write_summary_row(row, s, rec);
    rows[i] = row.str();
    within[i] = check_speed_bound(rec).pass;
    singular[i] = rec.singular();
    if (a.events) {
      char name[32];
      std::snprintf(name, sizeof name, "orbit_%06zu.jsonl", i);
      auto f = open_output(dir / "events" / name);
      write_events_jsonl(f, rec);
    }
  });

  std::ostringstream csv;
  csv << kSummaryHeader << '\n';
  for (const auto& r : rows) csv << r;
  write_file(dir / "summary.csv", csv.str());
  const auto violations = std::count(within.begin(), within.end(), 0);
  const auto n_singular = std::count(singular.begin(), singular.end(), 1);
  out << "simulated " << n << " orbits, T = " << format_double(a.T) << ", r0 = " << format_double(c.r0) << '\n'
      << "singular: " << n_singular << ", crossing-envelope violations: " << violations << '\n';
  return kExitOk;
}

struct Constructed {
  AdmissibleOrbit orbit;
  OrbitRecord record;
  RotationSample sample;
  std::optional<PeriodicValidation> periodic;
};

Constructed construct_word(const ReducedWord& w, double r0, const ConstructArgs& a) {
  PlanOptions po;
  po.cases.alternate_cross_exit = a.alternate_exit;
  Constructed c;
  try {
    if (a.periodic) {
      c.orbit = close_periodic(w, r0, po);
      c.periodic = validate_periodic(c.orbit, a.periods);
      c.record = c.periodic->record;
    } else if (a.target_speed) {
      auto v = construct_at_speed(w, r0, *a.target_speed, po);
      c.orbit = std::move(v.orbit);
      c.record = std::move(v.record);
      if (word_of(c.record) != w) throw ValidationMismatch("validated orbit realises a different word");
    } else {
      c.orbit = minimize_arclength(plan_word(w, po), r0);
      c.record = validate_orbit(c.orbit);
      if (word_of(c.record) != w) throw ValidationMismatch("validated orbit realises a different word");
    }
  } catch (const ConstructionError&) {
    throw;
  } catch (const std::logic_error& e) {
    throw ConstructionError(e.what());
  }
  c.orbit.validated = true;
  c.sample = rotation_vector(c.record);
  c.sample.provenance = w.str();
  return c;
}

ReducedWord parse_word(const std::string& text) {
  try {
    return ReducedWord::parse_reduced(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--word: ") + e.what());
  }
}

int cmd_construct(const Common& c, const ConstructArgs& a, std::ostream& out) {
  check_common(c);
  const ReducedWord w = parse_word(a.word);
  if (w.empty()) throw ConfigError("--word must be nonempty");
  if (a.periodic && !w.cyclically_reduced()) throw ConfigError("--periodic needs a cyclically reduced word");
  if (a.periodic && a.target_speed) throw ConfigError("--target-speed applies to open orbits only");
  if (a.target_speed && !(*a.target_speed > 0.0)) throw ConfigError("--target-speed must be positive");
  if (a.periods < 1) throw ConfigError("--periods must be at least 1");
  const fs::path dir = prepare_dir(c.out);

  const Constructed k = construct_word(w, c.r0, a);
  write_file(dir / "plan.json", plan_to_json(k.orbit.plan).dump(2) + "\n");
  {
    auto f = open_output(dir / "contacts.csv");
    write_contacts_csv(f, k.orbit);
  }
  {
    auto f = open_output(dir / "orbit.jsonl");
    write_events_jsonl(f, k.record);
  }
  nlohmann::ordered_json j = orbit_to_json(k.orbit);
  nlohmann::ordered_json v;
  v["word"] = word_of(k.record).str();
  v["duration"] = k.record.duration();
  v["collisions"] = k.record.collisions;
  if (k.periodic) {
    v["periods"] = a.periods;
    v["max_position_error"] = k.periodic->max_position_error;
    v["max_velocity_error"] = k.periodic->max_velocity_error;
  }
  j["validation"] = std::move(v);
  j["rotation"] = {{"speed", k.sample.vector.speed}, {"direction", k.sample.vector.direction.word.str()}};
  write_file(dir / "orbit.json", j.dump(2) + "\n");
  std::ostringstream csv;
  csv << kRotationHeader << '\n';
  write_rotation_row(csv, k.sample);
  write_file(dir / "rotation.csv", csv.str());

  out << "word " << w.str() << (a.periodic ? " (periodic, " + k.orbit.plan.word.str() + ")" : "") << ": "
      << k.orbit.plan.vertices.size() << " contacts, duration " << format_double(k.orbit.duration()) << ", speed "
      << format_double(k.orbit.speed()) << ", validated\n";
  return kExitOk;
}

int cmd_rotation_set(const Common& c, const RotationArgs& a, std::ostream& out) {
  check_common(c);
  if (a.n < 1) throw ConfigError("--n must be at least 1");
  if (!(a.T > 0.0)) throw ConfigError("--T must be positive");
  std::vector<ReducedWord> words;
  for (const auto& s : split_list(a.words)) words.push_back(parse_word(s));
  const fs::path dir = prepare_dir(c.out);

  SamplingOptions so;
  so.prefix_len = a.prefix_len;
  so.jobs = c.jobs;
  const RotationSetEstimate est = sample_rotation_set(static_cast<std::size_t>(a.n), a.T, c.r0, c.seed, so);
  std::ostringstream csv;
  csv << kRotationHeader << '\n';
  for (const auto& s : est.samples) write_rotation_row(csv, s);
  write_file(dir / "rotation.csv", csv.str());
  write_file(dir / "prefix_tree.json", est.tree.to_json(a.depth).dump(2) + "\n");

  if (!words.empty()) {
    std::vector<RotationSample> built(words.size());
    ConstructArgs ca;
    parallel_for(words.size(), c.jobs, [&](std::size_t i) {
      if (words[i].empty()) throw ConstructionError("cannot construct an orbit for the empty word");
      built[i] = construct_word(words[i], c.r0, ca).sample;
    });
    std::ostringstream cc;
    cc << kRotationHeader << '\n';
    for (const auto& s : built) write_rotation_row(cc, s);
    write_file(dir / "constructed.csv", cc.str());
  }
  out << "samples: " << est.samples.size() << ", singular: " << est.singular_count
      << ", max speed: " << format_double(est.max_speed())
      << ", envelope sqrt(3) + 3/T: " << format_double(std::numbers::sqrt3 + 3.0 / a.T) << '\n';
  return kExitOk;
}

int cmd_entropy(const Common& c, const EntropyArgs& a, std::ostream& out) {
  check_common(c);
  if (a.n < 1) throw ConfigError("--n must be at least 1");
  if (!(a.eps0 > 0.0 && a.eps0 < 0.5)) throw ConfigError("--eps0 must lie in (0, 0.5)");
  std::vector<double> grid;
  for (const auto& s : split_list(a.T_grid)) {
    try {
      std::size_t used = 0;
      grid.push_back(std::stod(s, &used));
      if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
      throw ConfigError("--T-grid: cannot read '" + s + "'");
    }
  }
  if (grid.empty()) throw ConfigError("--T-grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1])))
      throw ConfigError("--T-grid must be positive and strictly increasing");
  const fs::path dir = prepare_dir(c.out);

  const EntropyReport rep = count_itineraries(static_cast<std::size_t>(a.n), grid, a.eps0, c.r0, c.seed, c.jobs);
  std::ostringstream csv;
  write_entropy_csv(csv, rep);
  write_file(dir / "entropy.csv", csv.str());
  out << csv.str();
  return kExitOk;
}

std::optional<std::string> find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

}  // namespace

std::vector<std::string> config_arguments(const std::string& path, const std::vector<std::string>& given) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::set<std::string> present;
  for (const auto& a : given) {
    if (a.rfind("--", 0) != 0) continue;
    present.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  }
  std::vector<std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line.erase(0, line.find_first_not_of(" \t\r"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    if (key == "config" || present.count(key)) continue;
    if (kFlagKeys.count(key)) {
      if (value == "true" || value == "1" || value == "yes") out.push_back("--" + key);
      else if (!(value == "false" || value == "0" || value == "no"))
        throw ConfigError(path + ":" + std::to_string(lineno) + ": " + key + " expects true or false");
      continue;
    }
    out.push_back("--" + key + "=" + value);
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Billiard flow among three families of cylindrical scatterers in the 3-torus"};
  app.require_subcommand(1);
  Common common;
  SimulateArgs sim;
  ConstructArgs con;
  RotationArgs rot;
  EntropyArgs ent;

  auto* s = app.add_subcommand("simulate", "Simulate random orbits and tabulate crossings");
  add_common(s, common);
  s->add_option("--T", sim.T, "Flow time per orbit")->capture_default_str();
  s->add_option("--n", sim.n, "Number of orbits")->capture_default_str();
  s->add_flag("--events", sim.events, "Write every orbit's events as JSONL under events/");

  auto* c = app.add_subcommand("construct", "Build and validate an admissible orbit for a word");
  add_common(c, common);
  c->add_option("--word", con.word, "Reduced word over a b c A B C")->required();
  c->add_option("--target-speed", con.target_speed, "Lower the speed with idle cycles");
  c->add_flag("--periodic", con.periodic, "Close the word into a periodic orbit");
  c->add_flag("--alternate-exit", con.alternate_exit, "Use the alternative exit edge in cross-edge turns");
  c->add_option("--periods", con.periods, "Periods simulated when validating a periodic orbit")->capture_default_str();

  auto* r = app.add_subcommand("rotation-set", "Sample finite-time rotation vectors");
  add_common(r, common);
  r->add_option("--T", rot.T, "Flow time per orbit")->capture_default_str();
  r->add_option("--n", rot.n, "Number of orbits")->capture_default_str();
  r->add_option("--prefix-len", rot.prefix_len, "Direction prefix length")->capture_default_str();
  r->add_option("--depth", rot.depth, "Depth of the prefix-tree dump")->capture_default_str();
  r->add_option("--words", rot.words, "Comma-separated words to construct and overlay");

  auto* e = app.add_subcommand("entropy", "Count distinct partition itineraries");
  add_common(e, common);
  e->add_option("--n", ent.n, "Number of orbits")->capture_default_str();
  e->add_option("--T-grid", ent.T_grid, "Comma-separated increasing times")->capture_default_str();
  e->add_option("--eps0", ent.eps0, "Band width of the partition")->capture_default_str();

  try {
    std::vector<std::string> merged = args;
    if (const auto cfg = find_config(args)) {
      const auto extra = config_arguments(*cfg, args);
      merged.insert(merged.end(), extra.begin(), extra.end());
    }
    std::reverse(merged.begin(), merged.end());
    app.parse(merged);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const ConfigError& ex) {
    err << "config error: " << ex.what() << '\n';
    return kExitConfig;
  }

  try {
    if (s->parsed()) return cmd_simulate(common, sim, out);
    if (c->parsed()) return cmd_construct(common, con, out);
    if (r->parsed()) return cmd_rotation_set(common, rot, out);
    if (e->parsed()) return cmd_entropy(common, ent, out);
  } catch (const ConfigError& ex) {
    err << "config error: " << ex.what() << '\n';
    return kExitConfig;
  } catch (const ConstructionError& ex) {
    err << "construction failed: " << ex.what();
    if (ex.index()) err << " (index " << *ex.index() << ')';
    err << '\n';
    return kExitConstruction;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitFailure;
  }
  return kExitConfig;
}

}  // namespace cylbill::cli
