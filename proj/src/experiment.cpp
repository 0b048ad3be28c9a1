#include "infoperc/experiment.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "infoperc/clusters.hpp"
#include "infoperc/error.hpp"
#include "infoperc/forward.hpp"
#include "infoperc/mixing.hpp"
#include "infoperc/parallel.hpp"
#include "infoperc/rng.hpp"
#include "infoperc/zn.hpp"

namespace infoperc {

using nlohmann::json;

namespace {

const std::map<std::string, ExperimentKind> kKinds = {
    {"magnetization", ExperimentKind::Magnetization}, {"tm", ExperimentKind::Tm},
    {"clusters", ExperimentKind::Clusters},           {"zn", ExperimentKind::Zn},
    {"tv", ExperimentKind::Tv},                       {"cutoff-scan", ExperimentKind::CutoffScan},
    {"mp-check", ExperimentKind::MpCheck}};

const std::set<std::string> kKeys = {
    "schema_version", "kind",    "graph",  "beta",      "times",       "replicas",
    "seed",           "average_sites",     "t_star",    "mode",        "stationary_samples",
    "precision",      "replica_budget",    "length_cap", "sizes",      "eps",
    "offsets",        "sites",   "trials", "output_dir"};

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw ConfigError("config field '" + field + "': " + why);
}

template <class T>
T read(const json& j, const char* key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    bad(key, e.what());
  }
}

bool is_count(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

std::size_t read_count(const json& j, const char* key, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!is_count(v)) bad(key, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

std::vector<double> read_times(const json& j) {
  if (!j.contains("times")) return {};
  const auto& v = j.at("times");
  if (v.is_array()) return read<std::vector<double>>(j, "times", {});
  if (!v.is_object()) bad("times", "expected an array or {start, stop, step}");
  for (const auto& [k, _] : v.items())
    if (k != "start" && k != "stop" && k != "step") bad("times." + k, "unknown key");
  const double start = read<double>(v, "start", 0.0);
  const double stop = read<double>(v, "stop", NAN);
  const double step = read<double>(v, "step", NAN);
  if (!(step > 0.0) || !std::isfinite(stop) || !(stop >= start)) bad("times", "need finite stop >= start and step > 0");
  if ((stop - start) / step > 1e6) bad("times", "grid too fine");
  std::vector<double> out;
  const auto count = std::size_t(std::floor((stop - start) / step + 1e-9));
  for (std::size_t i = 0; i <= count; ++i) out.push_back(start + double(i) * step);
  return out;
}

GraphSpec read_graph(const json& j) {
  GraphSpec g;
  if (!j.contains("graph")) return g;
  const auto& v = j.at("graph");
  if (!v.is_object()) bad("graph", "expected an object");
  const auto family = read<std::string>(v, "family", "");
  if (family == "cycle") {
    g.family = GraphFamily::Cycle;
    for (const auto& [k, _] : v.items())
      if (k != "family" && k != "n") bad("graph." + k, "unknown key for a cycle");
    g.n = read_count(v, "n", 0);
  } else if (family == "torus") {
    g.family = GraphFamily::Torus;
    for (const auto& [k, _] : v.items())
      if (k != "family" && k != "side" && k != "dim") bad("graph." + k, "unknown key for a torus");
    g.side = read_count(v, "side", 0);
    g.dim = read_count(v, "dim", 2);
  } else if (family == "explicit") {
    g.family = GraphFamily::Explicit;
    for (const auto& [k, _] : v.items())
      if (k != "family" && k != "n" && k != "edges") bad("graph." + k, "unknown key for an explicit graph");
    g.n = read_count(v, "n", 0);
    const auto edges = read<std::vector<std::vector<Vertex>>>(v, "edges", {});
    for (const auto& e : edges) {
      if (e.size() != 2) bad("graph.edges", "each edge is a pair [u, v]");
      g.edges.emplace_back(e[0], e[1]);
    }
  } else {
    bad("graph.family", "expected \"cycle\", \"torus\" or \"explicit\"");
  }
  return g;
}

bool needs_graph(ExperimentKind k) {
  return k == ExperimentKind::Magnetization || k == ExperimentKind::Tm || k == ExperimentKind::Clusters ||
         k == ExperimentKind::Zn || k == ExperimentKind::Tv;
}

void check_grid(const std::vector<double>& times) {
  if (times.empty()) bad("times", "required and nonempty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0) bad("times", "entries must be finite and >= 0");
    if (i > 0 && times[i] < times[i - 1]) bad("times", "must be sorted");
  }
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<PlotRow> histogram_rows(const std::string& series, const std::vector<double>& sizes) {
  std::map<double, double> h;
  for (double s : sizes) h[s] += 1.0;
  std::vector<PlotRow> out;
  for (const auto& [x, c] : h) out.push_back({series, x, c, 0.0});
  return out;
}

void write_csv(const std::filesystem::path& file, const ExperimentRecord& rec, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream os(file);
  if (!os) throw Error(ErrorKind::InvalidArgument, "cannot write " + file.string());
  os << "# config_hash=" << rec.config_hash << " seed=" << rec.seed << " kind=" << to_string(rec.kind)
     << " version=" << rec.version << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// --- per-kind runners -------------------------------------------------------

void run_magnetization(const ExperimentConfig& c, ExperimentRecord& rec) {
  MonteCarloOptions o;
  o.replicas = c.replicas;
  o.seed = c.seed;
  o.average_sites = c.average_sites;
  o.workers = c.workers;
  const auto curve = estimate_magnetization(c.graph.build(), c.beta, c.times, o);
  Table t{"magnetization", {"t", "m_hat", "std_error", "replicas"}, {}};
  for (const auto& p : curve.points) t.rows.push_back({p.time, p.estimate, p.std_error, double(p.replicas)});
  rec.tables.push_back(std::move(t));
}

void run_tm(const ExperimentConfig& c, ExperimentRecord& rec) {
  TmOptions o;
  o.precision = c.precision;
  o.replica_budget = c.replica_budget;
  o.initial_replicas = std::min<std::size_t>(c.replicas, c.replica_budget);
  o.average_sites = c.average_sites;
  o.seed = c.seed;
  o.workers = c.workers;
  const Graph g = c.graph.build();
  const auto e = find_t_m(g, c.beta, o);
  rec.tables.push_back({"t_m",
                        {"n", "beta", "t_m", "ci_low", "ci_high", "replicas"},
                        {{double(g.size()), c.beta, e.t_m, e.ci_low, e.ci_high, double(e.replicas)}}});
}

void run_clusters(const ExperimentConfig& c, ExperimentRecord& rec) {
  const Graph g = c.graph.build();
  const std::size_t n = g.size();
  const double cap = c.length_cap > 0.0 ? c.length_cap : default_length_cap(n);
  auto per_replica = run_replicas(
      c.replicas,
      [&](std::size_t r) {
        const auto seq = generate(n, c.t_star, derive_seed(c.seed, stream::kReplica, r));
        return build_clusters(g, seq, c.beta, cap);
      },
      c.workers);
  Table summary{"cluster_summary", {"replica", "clusters", "red", "green", "blue", "red_vertices"}, {}};
  for (std::size_t r = 0; r < per_replica.size(); ++r) {
    double counts[3] = {0, 0, 0};
    double red_sites = 0;
    for (const auto& cl : per_replica[r]) {
      counts[int(cl.color)] += 1;
      if (cl.color == Color::Red) red_sites += double(cl.roots.size());
      json line = {{"replica", r},
                   {"roots", cl.roots.ids()},
                   {"color", to_string(cl.color)},
                   {"steiner_width", cl.stats.steiner_width},
                   {"steiner_exact", cl.stats.steiner_exact},
                   {"chi", cl.stats.chi},
                   {"length", cl.stats.length},
                   {"survives", cl.stats.survives}};
      rec.cluster_lines.push_back(std::move(line));
    }
    summary.rows.push_back({double(r), double(per_replica[r].size()), counts[0], counts[1], counts[2], red_sites});
  }
  rec.tables.push_back(std::move(summary));
}

void run_zn(const ExperimentConfig& c, ExperimentRecord& rec) {
  const std::size_t n = c.graph.n;
  const double theta = cycle_theta(c.beta);
  struct Row {
    double clusters = 0, red = 0, green = 0, blue = 0, bottom = 0, walks = 0;
    std::vector<double> sizes;
  };
  auto rows = run_replicas(
      c.replicas,
      [&](std::size_t r) {
        const auto seq = generate(n, c.t_star, derive_seed(c.seed, stream::kReplica, r));
        const auto wc = walk_clusters(seq, theta);
        Row row;
        row.clusters = double(wc.clusters.size());
        for (const auto& cl : wc.clusters) {
          (cl.color == Color::Red ? row.red : cl.color == Color::Green ? row.green : row.blue) += 1;
          row.sizes.push_back(double(cl.roots.size()));
        }
        row.bottom = double(wc.bottom_sites);
        row.walks = double(wc.surviving_walks);
        return row;
      },
      c.workers);
  Table per{"zn_replicas", {"replica", "clusters", "red", "green", "blue", "bottom_sites", "surviving_walks"}, {}};
  std::vector<double> survival(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& w = rows[r];
    per.rows.push_back({double(r), w.clusters, w.red, w.green, w.blue, w.bottom, w.walks});
    survival[r] = w.walks / double(n);
  }
  const auto s = estimate_mean(survival);
  rec.tables.push_back(std::move(per));
  rec.tables.push_back({"zn_summary",
                        {"n", "beta", "theta", "t_star", "survival_hat", "std_error", "survival_exact", "cutoff_location"},
                        {{double(n), c.beta, theta, c.t_star, s.mean, s.std_error, survival_probability(theta, c.t_star),
                          zn_cutoff_location(n, theta)}}});
  for (const auto& w : rows)
    for (double sz : w.sizes) rec.cluster_lines.push_back({{"size", sz}});
}

StatisticalOptions stat_options(const ExperimentConfig& c) {
  StatisticalOptions o;
  o.replicas = c.replicas;
  o.stationary_samples = c.stationary_samples;
  o.seed = c.seed;
  o.workers = c.workers;
  return o;
}

void run_tv(const ExperimentConfig& c, ExperimentRecord& rec) {
  const auto mode = c.mode == "exact" ? ProfileMode::Exact : ProfileMode::Statistical;
  const auto p = tv_profile(c.graph.build(), c.beta, c.times, mode, stat_options(c));
  Table t{"tv_profile", {"t", "tv", "std_error", "plug_in", "exact"}, {}};
  for (const auto& q : p.points) t.rows.push_back({q.time, q.tv, q.std_error, q.plug_in, q.exact ? 1.0 : 0.0});
  rec.tables.push_back(std::move(t));
}

void run_cutoff(const ExperimentConfig& c, ExperimentRecord& rec) {
  CutoffOptions o;
  o.offsets = c.offsets;
  o.stats = stat_options(c);
  o.tm.precision = c.precision;
  o.tm.replica_budget = c.replica_budget;
  o.tm.seed = c.seed;
  o.tm.workers = c.workers;
  const auto rows = cutoff_window_scan(c.sizes, c.beta, c.eps, o);
  Table windows{"cutoff", {"n", "t_m", "eps", "t_mix", "t_mix_minus_t_m"}, {}};
  Table profiles{"cutoff_profiles", {"n", "t", "t_minus_t_m", "tv", "std_error", "plug_in"}, {}};
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.eps.size(); ++i)
      windows.rows.push_back({double(row.n), row.t_m, row.eps[i], row.t_mix[i], row.t_mix[i] - row.t_m});
    for (const auto& q : row.profile.points)
      profiles.rows.push_back({double(row.n), q.time, q.time - row.t_m, q.tv, q.std_error, q.plug_in});
  }
  rec.tables.push_back(std::move(windows));
  rec.tables.push_back(std::move(profiles));
}

void run_mp(const ExperimentConfig& c, ExperimentRecord& rec) {
  const std::size_t violations = mp_l2_check(c.sites, c.trials, c.seed);
  // Equality case: all mass on R = V with a point-mass spin law.
  const std::size_t subsets = std::size_t{1} << c.sites;
  std::vector<double> weights(subsets, 0.0);
  weights.back() = 1.0;
  std::vector<std::vector<double>> laws(subsets);
  for (std::size_t r = 0; r < subsets; ++r) laws[r].assign(std::size_t{1} << std::popcount(r), 0.0);
  for (auto& l : laws) l[0] = 1.0;
  const auto eq = mp_l2_evaluate(c.sites, weights, laws);
  rec.tables.push_back({"mp_check",
                        {"sites", "trials", "violations", "equality_lhs", "equality_rhs"},
                        {{double(c.sites), double(c.trials), double(violations), eq.lhs, eq.rhs}}});
}

}  // namespace

const char* to_string(ExperimentKind k) noexcept {
  for (const auto& [name, kind] : kKinds)
    if (kind == k) return name.c_str();
  return "unknown";
}

std::optional<ExperimentKind> parse_kind(const std::string& name) {
  const auto it = kKinds.find(name);
  if (it == kKinds.end()) return std::nullopt;
  return it->second;
}

Graph GraphSpec::build() const {
  if (family == GraphFamily::Torus) return build_torus(side, dim);
  if (family == GraphFamily::Explicit) return build_explicit(n, edges);
  return build_cycle(n);
}

json ExperimentConfig::to_json() const {
  json g;
  if (graph.family == GraphFamily::Torus) {
    g = {{"family", "torus"}, {"side", graph.side}, {"dim", graph.dim}};
  } else if (graph.family == GraphFamily::Explicit) {
    json edges = json::array();
    for (const auto& [a, b] : graph.edges) edges.push_back({a, b});
    g = {{"family", "explicit"}, {"n", graph.n}, {"edges", edges}};
  } else {
    g = {{"family", "cycle"}, {"n", graph.n}};
  }
  return {{"schema_version", schema_version},
          {"kind", to_string(kind)},
          {"graph", g},
          {"beta", beta},
          {"times", times},
          {"replicas", replicas},
          {"seed", seed},
          {"average_sites", average_sites},
          {"t_star", t_star},
          {"mode", mode},
          {"stationary_samples", stationary_samples},
          {"precision", precision},
          {"replica_budget", replica_budget},
          {"length_cap", length_cap},
          {"sizes", sizes},
          {"eps", eps},
          {"offsets", offsets},
          {"sites", sites},
          {"trials", trials},
          {"output_dir", out_dir}};
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [k, _] : j.items())
    if (!kKeys.contains(k)) bad(k, "unknown key");
  ExperimentConfig c;
  if (!j.contains("schema_version")) bad("schema_version", "required");
  c.schema_version = read<int>(j, "schema_version", 0);
  const auto kind = read<std::string>(j, "kind", "");
  if (const auto k = parse_kind(kind)) c.kind = *k;
  else bad("kind", "unknown experiment kind '" + kind + "'");
  c.graph = read_graph(j);
  c.beta = read<double>(j, "beta", 0.0);
  c.times = read_times(j);
  c.replicas = read_count(j, "replicas", c.replicas);
  if (j.contains("seed") && !is_count(j.at("seed"))) bad("seed", "expected a nonnegative integer");
  c.seed = read<std::uint64_t>(j, "seed", c.seed);
  c.average_sites = read<bool>(j, "average_sites", c.average_sites);
  c.t_star = read<double>(j, "t_star", c.t_star);
  c.mode = read<std::string>(j, "mode", c.mode);
  c.stationary_samples = read_count(j, "stationary_samples", c.stationary_samples);
  c.precision = read<double>(j, "precision", c.precision);
  c.replica_budget = read_count(j, "replica_budget", c.replica_budget);
  c.length_cap = read<double>(j, "length_cap", c.length_cap);
  if (j.contains("sizes")) {
    for (const auto& v : j.at("sizes"))
      if (!is_count(v)) bad("sizes", "expected nonnegative integers");
    c.sizes = read<std::vector<std::size_t>>(j, "sizes", {});
  }
  c.eps = read<std::vector<double>>(j, "eps", c.eps);
  c.offsets = read<std::vector<double>>(j, "offsets", c.offsets);
  c.sites = read_count(j, "sites", c.sites);
  c.trials = read_count(j, "trials", c.trials);
  c.out_dir = read<std::string>(j, "output_dir", c.out_dir);
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw ConfigError("cannot open config file " + file.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return parse_config(j);
}

void validate(const ExperimentConfig& c) {
  if (c.schema_version != kConfigSchemaVersion) bad("schema_version", "unsupported version");
  if (!std::isfinite(c.beta) || c.beta < 0.0) bad("beta", "must be finite and >= 0");
  if (c.replicas == 0) bad("replicas", "must be positive");
  if (!(c.length_cap >= 0.0) || !std::isfinite(c.length_cap)) bad("length_cap", "must be finite and >= 0");
  if (c.workers < 0) bad("workers", "must be >= 0");
  if (needs_graph(c.kind)) {
    if (c.graph.family == GraphFamily::Cycle && c.graph.n < 3) bad("graph.n", "cycle needs n >= 3");
    if (c.graph.family == GraphFamily::Torus && (c.graph.side < 3 || c.graph.dim < 1))
      bad("graph", "torus needs side >= 3 and dim >= 1");
    if (c.graph.family == GraphFamily::Explicit) {
      if (c.graph.n == 0) bad("graph.n", "explicit graph needs n >= 1");
      try {
        (void)c.graph.build();
      } catch (const Error& e) {
        bad("graph.edges", e.what());
      }
    }
  }
  switch (c.kind) {
    case ExperimentKind::Magnetization:
      check_grid(c.times);
      break;
    case ExperimentKind::Tm:
      if (!(c.precision > 0.0)) bad("precision", "must be positive");
      if (c.replica_budget == 0) bad("replica_budget", "must be positive");
      break;
    case ExperimentKind::Clusters:
      if (!(c.t_star > 0.0) || !std::isfinite(c.t_star)) bad("t_star", "must be finite and positive");
      break;
    case ExperimentKind::Zn:
      if (c.graph.family != GraphFamily::Cycle) bad("graph.family", "zn needs a cycle");
      if (!(c.t_star > 0.0) || !std::isfinite(c.t_star)) bad("t_star", "must be finite and positive");
      break;
    case ExperimentKind::Tv:
      check_grid(c.times);
      if (c.mode != "exact" && c.mode != "statistical") bad("mode", "expected \"exact\" or \"statistical\"");
      if (c.mode == "statistical" && c.replicas < 2) bad("replicas", "statistical mode needs >= 2");
      break;
    case ExperimentKind::CutoffScan:
      if (c.sizes.empty()) bad("sizes", "required and nonempty");
      for (auto n : c.sizes)
        if (n < 3) bad("sizes", "cycle sizes must be >= 3");
      if (c.eps.empty()) bad("eps", "required and nonempty");
      for (double e : c.eps)
        if (!(e > 0.0 && e < 1.0)) bad("eps", "levels must lie in (0,1)");
      if (c.offsets.empty()) bad("offsets", "required and nonempty");
      for (double o : c.offsets)
        if (!std::isfinite(o)) bad("offsets", "must be finite");
      if (!(c.precision > 0.0)) bad("precision", "must be positive");
      if (c.replicas < 2) bad("replicas", "statistical mode needs >= 2");
      break;
    case ExperimentKind::MpCheck:
      if (c.sites < 1 || c.sites > 4) bad("sites", "must lie in [1, 4]");
      break;
  }
}

std::string config_hash(const ExperimentConfig& c) {
  char buf[17];
  auto j = c.to_json();
  j.erase("output_dir");
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(j.dump())));
  return buf;
}

const Table& ExperimentRecord::table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return t;
  throw InvalidArgument("no table named " + name);
}

ExperimentRecord run(const ExperimentConfig& config) {
  validate(config);
  ExperimentRecord rec;
  rec.config_hash = config_hash(config);
  rec.kind = config.kind;
  rec.seed = config.seed;
  const auto start = std::chrono::steady_clock::now();
  switch (config.kind) {
    case ExperimentKind::Magnetization: run_magnetization(config, rec); break;
    case ExperimentKind::Tm: run_tm(config, rec); break;
    case ExperimentKind::Clusters: run_clusters(config, rec); break;
    case ExperimentKind::Zn: run_zn(config, rec); break;
    case ExperimentKind::Tv: run_tv(config, rec); break;
    case ExperimentKind::CutoffScan: run_cutoff(config, rec); break;
    case ExperimentKind::MpCheck: run_mp(config, rec); break;
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<PlotRow> emit_plot_data(const ExperimentRecord& record) {
  std::vector<PlotRow> out;
  switch (record.kind) {
    case ExperimentKind::Magnetization:
      for (const auto& r : record.table("magnetization").rows) out.push_back({"m_t", r[0], r[1], r[2]});
      break;
    case ExperimentKind::Tm:
      for (const auto& r : record.table("t_m").rows) out.push_back({"t_m", r[0], r[2], 0.5 * (r[4] - r[3])});
      break;
    case ExperimentKind::Clusters:
    case ExperimentKind::Zn: {
      std::vector<double> sizes;
      for (const auto& line : record.cluster_lines)
        sizes.push_back(line.contains("size") ? line.at("size").get<double>()
                                              : double(line.at("roots").size()));
      out = histogram_rows("cluster_size", sizes);
      break;
    }
    case ExperimentKind::Tv:
      for (const auto& r : record.table("tv_profile").rows) {
        out.push_back({"tv", r[0], r[1], r[2]});
        if (r[4] == 0.0) out.push_back({"tv_plug_in", r[0], r[3], r[2]});
      }
      break;
    case ExperimentKind::CutoffScan:
      for (const auto& r : record.table("cutoff_profiles").rows)
        out.push_back({"n=" + std::to_string(std::size_t(r[0])), r[2], r[3], r[4]});
      break;
    case ExperimentKind::MpCheck:
      for (const auto& r : record.table("mp_check").rows) out.push_back({"mp_violations", r[0], r[2], 0.0});
      break;
  }
  return out;
}

void write_outputs(const ExperimentRecord& record, const ExperimentConfig& config,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  for (const auto& t : record.tables) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : t.rows) {
      std::vector<std::string> cells;
      for (double x : r) cells.push_back(num(x));
      rows.push_back(std::move(cells));
    }
    write_csv(dir / (t.name + ".csv"), record, t.columns, rows);
    files.push_back(t.name + ".csv");
  }
  std::vector<std::vector<std::string>> plot;
  for (const auto& p : emit_plot_data(record)) plot.push_back({p.series, num(p.x), num(p.y), num(p.err)});
  write_csv(dir / "plot.csv", record, {"series", "x", "y", "err"}, plot);
  files.push_back("plot.csv");
  if (!record.cluster_lines.empty()) {
    std::ofstream os(dir / "clusters.jsonl");
    for (const auto& line : record.cluster_lines) os << line.dump() << '\n';
    files.push_back("clusters.jsonl");
  }
  std::ofstream m(dir / "manifest.txt");
  m << "kind: " << to_string(record.kind) << '\n'
    << "config_hash: " << record.config_hash << '\n'
    << "seed: " << record.seed << '\n'
    << "version: " << record.version << '\n'
    << "workers: " << (config.workers > 0 ? config.workers : default_workers()) << '\n'
    << "wall_seconds: " << num(record.wall_seconds) << '\n';
  for (const auto& f : files) m << "output: " << f << '\n';
  m << "config: " << config.to_json().dump() << '\n';
}

}  // namespace infoperc
